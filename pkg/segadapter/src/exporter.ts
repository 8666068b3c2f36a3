import * as fs from 'fs';
import * as path from 'path';
import { listFramePngs, maskArea, readRgbFrame, writeLabelPng } from './png';
import {
  ManifestEntry,
  PromptSpec,
  RgbFrame,
  SegmentationBackend,
  validateSpec,
} from './types';

export interface ExportSummary {
  framesWritten: number;
  manifest: ManifestEntry[];
  omitted: string[];
}

/** Evenly spread opaque palette colors via golden-angle hue stepping. */
export function autoPaletteColor(index: number): string {
  const hue = ((index * 0.618033988749895) % 1) * 6;
  const sector = Math.floor(hue);
  const f = hue - sector;
  const v = 236;
  const p = Math.round(v * 0.25);
  const q = Math.round(v * (1 - 0.75 * f));
  const t = Math.round(v * (0.25 + 0.75 * f));
  const rgb = [
    [v, t, p],
    [q, v, p],
    [p, v, t],
    [p, q, v],
    [t, p, v],
    [v, p, q],
  ][sector % 6];
  return '#' + rgb.map((c) => c.toString(16).padStart(2, '0')).join('');
}

function mergePasses(
  width: number,
  height: number,
  perKeyword: { label: number; mask: { data: Uint8Array } | null }[],
): Uint8Array {
  const canvas = new Uint8Array(width * height);
  // later entries overwrite earlier ones on conflicts
  for (const { label, mask } of perKeyword) {
    if (!mask) continue;
    for (let i = 0; i < canvas.length; i++) {
      if (mask.data[i]) canvas[i] = label;
    }
  }
  return canvas;
}

/**
 * Segment every kept frame and write the interchange set: frame_NNNN.png
 * label masks, manifest.json, and a generated palette.json. Keywords with
 * zero detections over the whole clip are dropped from the manifest with a
 * warning. Returns what was written.
 */
export function exportMasks(
  video: string,
  spec: PromptSpec,
  outDir: string,
  backend: SegmentationBackend,
): ExportSummary {
  validateSpec(spec);
  const files = listFramePngs(video).filter((_, i) => i % spec.frameStride === 0);

  // flatten pass-by-pass; label IDs follow keyword appearance order
  const keywords: { name: string; pass: number; offset: number; label: number }[] = [];
  spec.prompts.forEach((group, pass) => {
    group.forEach((name, offset) => {
      keywords.push({ name, pass, offset, label: keywords.length + 1 });
    });
  });
  if (keywords.length > 255) {
    throw new Error(`${keywords.length} keywords exceed the 255-label limit`);
  }

  const masksDir = path.join(outDir, 'masks');
  fs.mkdirSync(masksDir, { recursive: true });

  const detected = new Array<boolean>(keywords.length).fill(false);
  let prevFrame: RgbFrame | null = null;
  let prevMasks: ReturnType<SegmentationBackend['propagate']>[] = [];

  files.forEach((file, index) => {
    const frame = readRgbFrame(file);
    if (prevFrame && (frame.width !== prevFrame.width || frame.height !== prevFrame.height)) {
      throw new Error(`${path.basename(file)}: frame size changed mid-clip`);
    }
    const passMasks = spec.prompts.map((group, pass) => {
      if (prevFrame === null) {
        return backend.segmentFirstFrame(frame, group);
      }
      return backend.propagate(prevFrame, frame, prevMasks[pass], group);
    });

    const flat = keywords.map(({ pass, offset, label }, k) => {
      const mask = passMasks[pass][offset];
      if (maskArea(mask) > 0) detected[k] = true;
      return { label, mask };
    });

    const canvas = mergePasses(frame.width, frame.height, flat);
    const name = `frame_${String(index).padStart(4, '0')}.png`;
    writeLabelPng(canvas, frame.width, frame.height, path.join(masksDir, name));

    prevFrame = frame;
    prevMasks = passMasks;
  });

  const manifest: ManifestEntry[] = [];
  const omitted: string[] = [];
  keywords.forEach(({ name, label }, k) => {
    if (detected[k]) {
      manifest.push({ id: label, name });
    } else {
      omitted.push(name);
      console.warn(`warning: no detections for "${name}", omitting from manifest`);
    }
  });

  fs.writeFileSync(path.join(outDir, 'manifest.json'), JSON.stringify(manifest, null, 2));
  const palette: Record<string, string> = {};
  manifest.forEach((entry, i) => {
    palette[String(entry.id)] = autoPaletteColor(i);
  });
  fs.writeFileSync(path.join(outDir, 'palette.json'), JSON.stringify(palette, null, 2));

  return { framesWritten: files.length, manifest, omitted };
}
