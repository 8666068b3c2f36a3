import { MaskBitmap, RgbFrame, SegmentationBackend } from './types';

/** Reference colors for keywords the fake backend understands directly. */
const NAMED_COLORS: Record<string, [number, number, number]> = {
  red: [255, 0, 0],
  green: [0, 255, 0],
  blue: [0, 0, 255],
  yellow: [255, 255, 0],
  cyan: [0, 255, 255],
  magenta: [255, 0, 255],
  white: [255, 255, 255],
  black: [0, 0, 0],
  hair: [40, 25, 15],
  skin: [224, 172, 140],
  't-shirt': [60, 90, 180],
  trousers: [50, 50, 60],
  shoes: [25, 25, 25],
};

/** Deterministic fallback color for unknown keywords (hash -> hue wheel). */
export function keywordColor(keyword: string): [number, number, number] {
  const named = NAMED_COLORS[keyword.toLowerCase()];
  if (named) return named;
  let h = 2166136261;
  for (let i = 0; i < keyword.length; i++) {
    h = (h ^ keyword.charCodeAt(i)) >>> 0;
    h = (h * 16777619) >>> 0;
  }
  const hue = (h % 360) / 60;
  const x = Math.round(255 * (1 - Math.abs((hue % 2) - 1)));
  const sector = Math.floor(hue) % 6;
  const rgb: [number, number, number][] = [
    [255, x, 0],
    [x, 255, 0],
    [0, 255, x],
    [0, x, 255],
    [x, 0, 255],
    [255, 0, x],
  ];
  return rgb[sector];
}

/**
 * Test backend: "segmentation" is a per-pixel color-distance threshold
 * against a reference color derived from the keyword. Stateless, so
 * propagation just re-runs the threshold on the next frame; labels stay
 * consistent because keyword order is fixed.
 */
export class ColorThresholdBackend implements SegmentationBackend {
  constructor(private tolerance: number = 80) {}

  private threshold(frame: RgbFrame, keyword: string): MaskBitmap | null {
    const [tr, tg, tb] = keywordColor(keyword);
    const tol2 = this.tolerance * this.tolerance;
    const n = frame.width * frame.height;
    const data = new Uint8Array(n);
    let hits = 0;
    for (let i = 0; i < n; i++) {
      const dr = frame.data[i * 3] - tr;
      const dg = frame.data[i * 3 + 1] - tg;
      const db = frame.data[i * 3 + 2] - tb;
      if (dr * dr + dg * dg + db * db <= tol2) {
        data[i] = 1;
        hits++;
      }
    }
    if (hits === 0) return null;
    return { width: frame.width, height: frame.height, data };
  }

  segmentFirstFrame(frame: RgbFrame, keywords: string[]): (MaskBitmap | null)[] {
    return keywords.map((kw) => this.threshold(frame, kw));
  }

  propagate(
    _prev: RgbFrame,
    next: RgbFrame,
    _masks: (MaskBitmap | null)[],
    keywords: string[],
  ): (MaskBitmap | null)[] {
    return keywords.map((kw) => this.threshold(next, kw));
  }
}
