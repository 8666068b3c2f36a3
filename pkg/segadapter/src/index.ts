export { ColorThresholdBackend, keywordColor } from './backend';
export { autoPaletteColor, exportMasks, ExportSummary } from './exporter';
export { detectFaces, exportLandmarks, synthesizeLandmarks } from './landmarks';
export { listFramePngs, readRgbFrame, writeLabelPng } from './png';
export {
  MaskBitmap,
  ManifestEntry,
  parsePrompts,
  PromptSpec,
  RgbFrame,
  SegmentationBackend,
  validateSpec,
} from './types';
