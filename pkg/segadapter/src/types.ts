/** Shared shapes for the adapter pipeline. */

/** Decoded 8-bit RGB frame, row-major. */
export interface RgbFrame {
  width: number;
  height: number;
  /** width * height * 3 bytes, RGB order. */
  data: Uint8Array;
}

/** Binary mask over a frame; width * height bytes of 0/1. */
export interface MaskBitmap {
  width: number;
  height: number;
  data: Uint8Array;
}

/**
 * Prompt configuration: each inner list is one independent segmentation
 * pass, and every keyword inside it becomes its own label.
 */
export interface PromptSpec {
  prompts: string[][];
  frameStride: number;
}

export interface ManifestEntry {
  id: number;
  name: string;
}

/**
 * Two-call segmentation contract. The real model stack and the test
 * color-threshold fake both fit behind it.
 */
export interface SegmentationBackend {
  /** One mask per keyword on a pass's first frame; null when nothing matched. */
  segmentFirstFrame(frame: RgbFrame, keywords: string[]): (MaskBitmap | null)[];
  /** Carry per-keyword masks from the previous frame onto the next one. */
  propagate(
    prev: RgbFrame,
    next: RgbFrame,
    masks: (MaskBitmap | null)[],
    keywords: string[],
  ): (MaskBitmap | null)[];
}

/** Parse "hair,skin;t-shirt" into [["hair","skin"],["t-shirt"]]. */
export function parsePrompts(raw: string): string[][] {
  const groups = raw
    .split(';')
    .map((group) =>
      group
        .split(',')
        .map((kw) => kw.trim())
        .filter((kw) => kw.length > 0),
    )
    .filter((group) => group.length > 0);
  if (groups.length === 0) {
    throw new Error(`prompts "${raw}" contain no keywords`);
  }
  const seen = new Set<string>();
  for (const group of groups) {
    for (const kw of group) {
      if (seen.has(kw)) throw new Error(`duplicate prompt keyword "${kw}"`);
      seen.add(kw);
    }
  }
  return groups;
}

export function validateSpec(spec: PromptSpec): void {
  if (spec.prompts.length === 0 || spec.prompts.every((g) => g.length === 0)) {
    throw new Error('at least one nonempty prompt list is required');
  }
  if (!Number.isInteger(spec.frameStride) || spec.frameStride < 1) {
    throw new Error(`frame stride ${spec.frameStride} must be an integer >= 1`);
  }
}
