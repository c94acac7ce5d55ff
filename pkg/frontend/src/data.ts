/**
 * Reader for the simulator's `.data` snapshots: one `x y value` line per
 * sample on a uniform tensor grid, ordered row-major by y then x.
 */

import * as fs from "fs";

export interface FieldGrid {
  /** distinct sample coordinates, ascending */
  xs: number[];
  ys: number[];
  /** values[i][j] is the sample at (xs[i], ys[j]) */
  values: number[][];
}

export function parseField(text: string, path = "<data>"): FieldGrid {
  const samples: { x: number; y: number; v: number }[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === "") continue;
    const parts = line.split(/\s+/);
    if (parts.length !== 3) {
      throw new Error(`${path}: expected 'x y value' at line ${i + 1}`);
    }
    const [x, y, v] = parts.map(Number);
    if ([x, y, v].some((n) => Number.isNaN(n))) {
      throw new Error(`${path}: non-numeric entry at line ${i + 1}`);
    }
    samples.push({ x, y, v });
  }
  if (samples.length === 0) {
    throw new Error(`${path}: empty snapshot`);
  }
  const xs = [...new Set(samples.map((s) => s.x))].sort((a, b) => a - b);
  const ys = [...new Set(samples.map((s) => s.y))].sort((a, b) => a - b);
  if (xs.length * ys.length !== samples.length) {
    throw new Error(`${path}: samples do not form a tensor grid`);
  }
  const xi = new Map(xs.map((x, i) => [x, i]));
  const yi = new Map(ys.map((y, j) => [y, j]));
  const values = xs.map(() => new Array<number>(ys.length).fill(NaN));
  for (const s of samples) {
    values[xi.get(s.x)!][yi.get(s.y)!] = s.v;
  }
  return { xs, ys, values };
}

export function readField(path: string): FieldGrid {
  let text: string;
  try {
    text = fs.readFileSync(path, "ascii");
  } catch (err) {
    throw new Error(`cannot read snapshot ${path}: ${(err as Error).message}`);
  }
  return parseField(text, path);
}
