import * as fs from 'fs';
import { listFramePngs, readRgbFrame } from './png';
import { RgbFrame } from './types';

export interface FaceBox {
  left: number;
  top: number;
  width: number;
  height: number;
}

/** Exact marker color the fake detector treats as a face region. */
const MARKER: [number, number, number] = [255, 0, 255];

/**
 * Stand-in for a frontal-face detector: faces are solid magenta rectangles
 * painted into the clip. Returns the bounding box of every 4-connected
 * marker component.
 */
export function detectFaces(frame: RgbFrame): FaceBox[] {
  const { width, height, data } = frame;
  const marks = new Uint8Array(width * height);
  for (let i = 0; i < width * height; i++) {
    if (data[i * 3] === MARKER[0] && data[i * 3 + 1] === MARKER[1] && data[i * 3 + 2] === MARKER[2]) {
      marks[i] = 1;
    }
  }
  const seen = new Uint8Array(width * height);
  const boxes: FaceBox[] = [];
  const queue = new Int32Array(width * height);
  for (let start = 0; start < width * height; start++) {
    if (!marks[start] || seen[start]) continue;
    let head = 0;
    let tail = 0;
    queue[tail++] = start;
    seen[start] = 1;
    let minX = width;
    let minY = height;
    let maxX = -1;
    let maxY = -1;
    while (head < tail) {
      const idx = queue[head++];
      const x = idx % width;
      const y = (idx / width) | 0;
      if (x < minX) minX = x;
      if (x > maxX) maxX = x;
      if (y < minY) minY = y;
      if (y > maxY) maxY = y;
      const neighbors = [idx - 1, idx + 1, idx - width, idx + width];
      const ok = [x > 0, x < width - 1, y > 0, y < height - 1];
      for (let d = 0; d < 4; d++) {
        const n = neighbors[d];
        if (ok[d] && marks[n] && !seen[n]) {
          seen[n] = 1;
          queue[tail++] = n;
        }
      }
    }
    boxes.push({ left: minX, top: minY, width: maxX - minX + 1, height: maxY - minY + 1 });
  }
  return boxes;
}

/**
 * Place a schematic 68-point set (standard jaw/brows/nose/eyes/mouth
 * ordering) inside a face box. Purely geometric; good enough to exercise
 * downstream feature rendering.
 */
export function synthesizeLandmarks(box: FaceBox): [number, number][] {
  const pts: [number, number][] = [];
  const at = (u: number, v: number): [number, number] => [
    box.left + u * box.width,
    box.top + v * box.height,
  ];
  for (let i = 0; i < 17; i++) {
    const th = (Math.PI * i) / 16;
    pts.push(at(0.5 - 0.45 * Math.cos(th), 0.25 + 0.72 * Math.sin(th)));
  }
  for (let i = 0; i < 5; i++) {
    pts.push(at(0.16 + 0.06 * i, 0.28 - 0.03 * Math.sin((Math.PI * i) / 4)));
  }
  for (let i = 0; i < 5; i++) {
    pts.push(at(0.6 + 0.06 * i, 0.28 - 0.03 * Math.sin((Math.PI * i) / 4)));
  }
  for (let i = 0; i < 4; i++) {
    pts.push(at(0.5, 0.33 + 0.07 * i));
  }
  for (let i = 0; i < 5; i++) {
    pts.push(at(0.42 + 0.04 * i, i === 2 ? 0.62 : 0.6));
  }
  for (const cx of [0.3, 0.7]) {
    for (let i = 0; i < 6; i++) {
      const th = (Math.PI * 2 * i) / 6;
      pts.push(at(cx + 0.08 * Math.cos(th), 0.38 - 0.035 * Math.sin(th)));
    }
  }
  for (let i = 0; i < 12; i++) {
    const th = (Math.PI * 2 * i) / 12;
    pts.push(at(0.5 - 0.14 * Math.cos(th), 0.75 + 0.06 * Math.sin(th)));
  }
  for (let i = 0; i < 8; i++) {
    const th = (Math.PI * 2 * i) / 8;
    pts.push(at(0.5 - 0.08 * Math.cos(th), 0.75 + 0.025 * Math.sin(th)));
  }
  return pts;
}

export interface LandmarkSummary {
  framesWritten: number;
  facesFound: number;
}

/**
 * Detect a face per frame and write landmarks.json keyed by frame index.
 * Frames without a face are simply absent; multi-face frames use the
 * largest bounding box.
 */
export function exportLandmarks(video: string, outFile: string): LandmarkSummary {
  const files = listFramePngs(video);
  const result: Record<string, [number, number][]> = {};
  let faces = 0;
  files.forEach((file, index) => {
    const boxes = detectFaces(readRgbFrame(file));
    if (boxes.length === 0) return;
    const best = boxes.reduce((a, b) => (b.width * b.height > a.width * a.height ? b : a));
    result[String(index)] = synthesizeLandmarks(best);
    faces++;
  });
  fs.writeFileSync(outFile, JSON.stringify(result, null, 2));
  return { framesWritten: files.length, facesFound: faces };
}
