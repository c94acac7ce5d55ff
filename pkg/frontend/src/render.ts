/**
 * Snapshot renderer: one pixel per `.data` sample, field minimum and maximum
 * mapped to the colormap endpoints, image row 0 = maximum-y sample row.
 */

import * as fs from "fs";
import { PNG } from "pngjs";
import { COLORMAPS, Rgb } from "./colormap";
import { FieldGrid, readField } from "./data";

export function fieldToImage(grid: FieldGrid, cmap: (t: number) => Rgb): PNG {
  const width = grid.xs.length;
  const height = grid.ys.length;
  let lo = Infinity;
  let hi = -Infinity;
  for (const row of grid.values) {
    for (const v of row) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  const span = hi > lo ? hi - lo : 0;
  const png = new PNG({ width, height });
  for (let j = 0; j < height; j++) {
    for (let i = 0; i < width; i++) {
      const v = grid.values[i][height - 1 - j]; // top image row = max y
      const t = span > 0 ? (v - lo) / span : 0;
      const [r, g, b] = cmap(t);
      const at = (j * width + i) * 4;
      png.data[at] = r;
      png.data[at + 1] = g;
      png.data[at + 2] = b;
      png.data[at + 3] = 255;
    }
  }
  return png;
}

export function renderSnapshot(inputPath: string, outputPath: string, cmapName = "fire"): void {
  const cmap = COLORMAPS[cmapName];
  if (!cmap) {
    throw new Error(`unknown colormap ${cmapName} (have: ${Object.keys(COLORMAPS).join(", ")})`);
  }
  const grid = readField(inputPath);
  const png = fieldToImage(grid, cmap);
  fs.writeFileSync(outputPath, PNG.sync.write(png));
}

export interface PngSummary {
  width: number;
  height: number;
  uniform: boolean;
  topLeft: [number, number, number, number];
}

/** Small JSON-able summary used by cross-component tests. */
export function inspectPng(path: string): PngSummary {
  const png = PNG.sync.read(fs.readFileSync(path));
  const first = [png.data[0], png.data[1], png.data[2], png.data[3]] as [
    number, number, number, number,
  ];
  let uniform = true;
  for (let k = 0; k < png.width * png.height * 4; k += 4) {
    if (
      png.data[k] !== first[0] ||
      png.data[k + 1] !== first[1] ||
      png.data[k + 2] !== first[2] ||
      png.data[k + 3] !== first[3]
    ) {
      uniform = false;
      break;
    }
  }
  return { width: png.width, height: png.height, uniform, topLeft: first };
}
