/**
 * Satellite image -> fuel-availability CSV.
 *
 * The green channel indicates vegetation, the main flammable material. Pixel
 * values are scaled into [0, 1] by /255; an optional threshold zeroes pixels
 * whose scaled value falls below it (lighting artifacts), and an optional
 * integer downscale factor averages k x k blocks. The CSV is header-free,
 * row-major with row 0 = top of the image, 6 significant digits (lossless for
 * 8-bit sources), and loads directly into the simulator's fuel-map reader.
 */

import * as fs from "fs";
import { PNG } from "pngjs";

export interface RasterJob {
  inputPath: string;
  outputPath: string;
  /** zero pixels with green/255 strictly below this value (no default applied) */
  threshold?: number;
  /** average k x k blocks; defaults to 1 (no downscaling) */
  downscale?: number;
}

export interface GreenRaster {
  rows: number;
  cols: number;
  /** row-major green-channel fractions in [0, 1] */
  values: Float64Array;
}

export function decodeGreenChannel(path: string): GreenRaster {
  let buffer: Buffer;
  try {
    buffer = fs.readFileSync(path);
  } catch (err) {
    throw new Error(`cannot read image ${path}: ${(err as Error).message}`);
  }
  let png: PNG;
  try {
    png = PNG.sync.read(buffer);
  } catch (err) {
    throw new Error(`unreadable PNG image ${path}: ${(err as Error).message}`);
  }
  // pngjs expands everything to RGBA; reject sources without color channels
  const colorType = (png as unknown as { colorType?: number }).colorType;
  if (colorType === 0 || colorType === 4) {
    throw new Error(`non-RGB image ${path}: grayscale PNG has no green channel`);
  }
  const values = new Float64Array(png.width * png.height);
  for (let r = 0; r < png.height; r++) {
    for (let c = 0; c < png.width; c++) {
      values[r * png.width + c] = png.data[(r * png.width + c) * 4 + 1] / 255;
    }
  }
  return { rows: png.height, cols: png.width, values };
}

export function applyThreshold(raster: GreenRaster, threshold: number): GreenRaster {
  if (!(threshold >= 0 && threshold <= 1)) {
    throw new Error(`threshold must lie in [0, 1], got ${threshold}`);
  }
  const values = raster.values.map((v) => (v < threshold ? 0 : v));
  return { ...raster, values };
}

export function downscale(raster: GreenRaster, factor: number): GreenRaster {
  if (!Number.isInteger(factor) || factor < 1) {
    throw new Error(`downscale factor must be an integer >= 1, got ${factor}`);
  }
  if (factor === 1) return raster;
  const rows = Math.floor(raster.rows / factor);
  const cols = Math.floor(raster.cols / factor);
  if (rows < 1 || cols < 1) {
    throw new Error(`downscale factor ${factor} leaves no pixels`);
  }
  const values = new Float64Array(rows * cols);
  for (let r = 0; r < rows; r++) {
    for (let c = 0; c < cols; c++) {
      let sum = 0;
      for (let i = 0; i < factor; i++) {
        for (let j = 0; j < factor; j++) {
          sum += raster.values[(r * factor + i) * raster.cols + c * factor + j];
        }
      }
      values[r * cols + c] = sum / (factor * factor);
    }
  }
  return { rows, cols, values };
}

/** 6 significant digits, enough to round-trip 8-bit raster fractions. */
export function formatCell(v: number): string {
  return Number(v.toPrecision(6)).toString();
}

export function rasterToCsv(raster: GreenRaster): string {
  const lines: string[] = [];
  for (let r = 0; r < raster.rows; r++) {
    const cells: string[] = [];
    for (let c = 0; c < raster.cols; c++) {
      cells.push(formatCell(raster.values[r * raster.cols + c]));
    }
    lines.push(cells.join(","));
  }
  return lines.join("\n") + "\n";
}

export function imageToFuelCsv(job: RasterJob): void {
  let raster = decodeGreenChannel(job.inputPath);
  if (job.threshold !== undefined) {
    raster = applyThreshold(raster, job.threshold);
  }
  raster = downscale(raster, job.downscale ?? 1);
  fs.writeFileSync(job.outputPath, rasterToCsv(raster), { encoding: "ascii" });
}
