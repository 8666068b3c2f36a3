import * as fs from 'fs';
import * as path from 'path';
import { PNG } from 'pngjs';
import { MaskBitmap, RgbFrame } from './types';

const CONTAINER_EXTS = new Set(['.mp4', '.mov', '.avi', '.mkv', '.webm']);

export function readRgbFrame(file: string): RgbFrame {
  const png = PNG.sync.read(fs.readFileSync(file));
  const out = new Uint8Array(png.width * png.height * 3);
  for (let i = 0; i < png.width * png.height; i++) {
    out[i * 3] = png.data[i * 4];
    out[i * 3 + 1] = png.data[i * 4 + 1];
    out[i * 3 + 2] = png.data[i * 4 + 2];
  }
  return { width: png.width, height: png.height, data: out };
}

/** Write a label canvas as an 8-bit grayscale-style PNG (equal RGB, opaque). */
export function writeLabelPng(
  labels: Uint8Array,
  width: number,
  height: number,
  file: string,
): void {
  const png = new PNG({ width, height, colorType: 0, inputColorType: 0, bitDepth: 8 });
  // pngjs still keeps an RGBA buffer internally; colorType 0 packs on write.
  for (let i = 0; i < width * height; i++) {
    png.data[i * 4] = labels[i];
    png.data[i * 4 + 1] = labels[i];
    png.data[i * 4 + 2] = labels[i];
    png.data[i * 4 + 3] = 255;
  }
  fs.writeFileSync(file, PNG.sync.write(png, { colorType: 0, inputColorType: 6 }));
}

/**
 * Resolve a "video" argument to an ordered list of frame PNGs. Only
 * directories of extracted frames are supported here; containers get a
 * pointer to ffmpeg instead of a half-working demuxer.
 */
export function listFramePngs(video: string): string[] {
  const ext = path.extname(video).toLowerCase();
  if (CONTAINER_EXTS.has(ext)) {
    throw new Error(
      `${video}: video containers are not decoded here; extract frames first, ` +
        `e.g. ffmpeg -i ${path.basename(video)} frames/frame_%04d.png`,
    );
  }
  if (!fs.existsSync(video) || !fs.statSync(video).isDirectory()) {
    throw new Error(`${video}: expected a directory of frame PNGs`);
  }
  const files = fs
    .readdirSync(video)
    .filter((f) => f.toLowerCase().endsWith('.png'))
    .sort()
    .map((f) => path.join(video, f));
  if (files.length === 0) {
    throw new Error(`${video}: no .png frames found`);
  }
  return files;
}

export function maskArea(mask: MaskBitmap | null): number {
  if (!mask) return 0;
  let n = 0;
  for (let i = 0; i < mask.data.length; i++) n += mask.data[i];
  return n;
}
