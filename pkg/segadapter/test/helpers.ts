import * as fs from 'fs';
import * as os from 'os';
import * as path from 'path';
import { PNG } from 'pngjs';

export function tmpdir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), 'segadapter-'));
}

export type Painter = (x: number, y: number) => [number, number, number];

export function writeRgbPng(file: string, width: number, height: number, paint: Painter): void {
  const png = new PNG({ width, height });
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      const [r, g, b] = paint(x, y);
      const i = (y * width + x) * 4;
      png.data[i] = r;
      png.data[i + 1] = g;
      png.data[i + 2] = b;
      png.data[i + 3] = 255;
    }
  }
  fs.writeFileSync(file, PNG.sync.write(png));
}

/** Clip with a moving red square and a static green bar on black. */
export function writeClip(dir: string, frames: number, size = 48): void {
  fs.mkdirSync(dir, { recursive: true });
  for (let k = 0; k < frames; k++) {
    writeRgbPng(path.join(dir, `frame_${String(k).padStart(4, '0')}.png`), size, size, (x, y) => {
      if (y >= 6 && y < 22 && x >= 2 + 2 * k && x < 18 + 2 * k) return [220, 30, 30];
      if (y >= 30 && y < 42 && x >= 4 && x < 40) return [30, 200, 40];
      return [0, 0, 0];
    });
  }
}

export function readLabels(file: string): { width: number; height: number; labels: Uint8Array } {
  const png = PNG.sync.read(fs.readFileSync(file));
  const labels = new Uint8Array(png.width * png.height);
  for (let i = 0; i < labels.length; i++) {
    labels[i] = png.data[i * 4];
  }
  return { width: png.width, height: png.height, labels };
}
