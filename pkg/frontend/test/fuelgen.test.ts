import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { PNG } from "pngjs";
import { afterEach, beforeEach, describe, expect, it } from "vitest";
import {
  applyThreshold,
  decodeGreenChannel,
  downscale,
  formatCell,
  imageToFuelCsv,
  rasterToCsv,
} from "../src/fuelgen";

let dir: string;

beforeEach(() => {
  dir = fs.mkdtempSync(path.join(os.tmpdir(), "fuelgen-"));
});

afterEach(() => {
  fs.rmSync(dir, { recursive: true, force: true });
});

function writePng(name: string, width: number, height: number, rgb: (r: number, c: number) => [number, number, number]): string {
  const png = new PNG({ width, height });
  for (let r = 0; r < height; r++) {
    for (let c = 0; c < width; c++) {
      const at = (r * width + c) * 4;
      const [red, green, blue] = rgb(r, c);
      png.data[at] = red;
      png.data[at + 1] = green;
      png.data[at + 2] = blue;
      png.data[at + 3] = 255;
    }
  }
  const p = path.join(dir, name);
  fs.writeFileSync(p, PNG.sync.write(png));
  return p;
}

describe("green-channel extraction", () => {
  it("maps a pure-green image to all ones", () => {
    const img = writePng("green.png", 4, 3, () => [0, 255, 0]);
    const out = path.join(dir, "out.csv");
    imageToFuelCsv({ inputPath: img, outputPath: out });
    const rows = fs.readFileSync(out, "ascii").trim().split("\n");
    expect(rows).toHaveLength(3);
    for (const row of rows) {
      expect(row.split(",")).toEqual(["1", "1", "1", "1"]);
    }
  });

  it("maps a black image to all zeros", () => {
    const img = writePng("black.png", 2, 2, () => [0, 0, 0]);
    const out = path.join(dir, "out.csv");
    imageToFuelCsv({ inputPath: img, outputPath: out });
    expect(fs.readFileSync(out, "ascii")).toBe("0,0\n0,0\n");
  });

  it("divides the green byte by 255 (hand-computed 2x2 case)", () => {
    const greens = [
      [0, 64],
      [128, 255],
    ];
    const img = writePng("mix.png", 2, 2, (r, c) => [5, greens[r][c], 77]);
    const out = path.join(dir, "out.csv");
    imageToFuelCsv({ inputPath: img, outputPath: out });
    // 128/255 = 0.50196078... -> 0.501961 at the 6-significant-digit contract
    expect(fs.readFileSync(out, "ascii")).toBe("0,0.25098\n0.501961,1\n");
  });

  it("keeps row 0 as the top of the image", () => {
    const img = writePng("rows.png", 1, 2, (r) => [0, r === 0 ? 255 : 0, 0]);
    const raster = decodeGreenChannel(img);
    expect(raster.values[0]).toBe(1);
    expect(raster.values[1]).toBe(0);
  });

  it("rejects grayscale images with the path in the message", () => {
    const png = new PNG({ width: 2, height: 2, colorType: 0 });
    png.data.fill(128);
    const p = path.join(dir, "gray.png");
    fs.writeFileSync(p, PNG.sync.write(png, { colorType: 0 }));
    expect(() => decodeGreenChannel(p)).toThrow(/non-RGB image .*gray\.png/);
  });

  it("reports unreadable files with the path", () => {
    expect(() => decodeGreenChannel(path.join(dir, "missing.png"))).toThrow(/missing\.png/);
    const bad = path.join(dir, "bad.png");
    fs.writeFileSync(bad, "not a png");
    expect(() => decodeGreenChannel(bad)).toThrow(/bad\.png/);
  });

  it("is idempotent byte for byte", () => {
    const img = writePng("idem.png", 5, 4, (r, c) => [r, (r * 37 + c * 11) % 256, c]);
    const out1 = path.join(dir, "a.csv");
    const out2 = path.join(dir, "b.csv");
    imageToFuelCsv({ inputPath: img, outputPath: out1, threshold: 0.1 });
    imageToFuelCsv({ inputPath: img, outputPath: out2, threshold: 0.1 });
    expect(fs.readFileSync(out1)).toEqual(fs.readFileSync(out2));
  });
});

describe("threshold", () => {
  it("zeroes values strictly below the threshold", () => {
    const raster = { rows: 1, cols: 3, values: new Float64Array([0.1, 0.5, 0.9]) };
    const out = applyThreshold(raster, 0.5);
    expect([...out.values]).toEqual([0, 0.5, 0.9]);
  });

  it("validates the range", () => {
    const raster = { rows: 1, cols: 1, values: new Float64Array([0.5]) };
    expect(() => applyThreshold(raster, -0.1)).toThrow(/threshold/);
    expect(() => applyThreshold(raster, 1.5)).toThrow(/threshold/);
  });
});

describe("downscale", () => {
  it("averages k x k blocks", () => {
    const raster = {
      rows: 2,
      cols: 4,
      values: new Float64Array([0, 1, 0.5, 0.5, 1, 0, 0.25, 0.75]),
    };
    const out = downscale(raster, 2);
    expect(out.rows).toBe(1);
    expect(out.cols).toBe(2);
    expect([...out.values]).toEqual([0.5, 0.5]);
  });

  it("drops partial edge blocks", () => {
    const raster = { rows: 3, cols: 3, values: new Float64Array(9).fill(1) };
    const out = downscale(raster, 2);
    expect([out.rows, out.cols]).toEqual([1, 1]);
  });

  it("validates the factor", () => {
    const raster = { rows: 2, cols: 2, values: new Float64Array(4) };
    expect(() => downscale(raster, 0)).toThrow(/factor/);
    expect(() => downscale(raster, 1.5)).toThrow(/factor/);
    expect(() => downscale(raster, 5)).toThrow(/no pixels/);
  });
});

describe("csv format", () => {
  it("uses 6 significant digits", () => {
    expect(formatCell(64 / 255)).toBe("0.25098");
    expect(formatCell(1)).toBe("1");
    expect(formatCell(0)).toBe("0");
  });

  it("writes header-free comma-separated rows", () => {
    const text = rasterToCsv({ rows: 2, cols: 2, values: new Float64Array([1, 0, 0, 1]) });
    expect(text).toBe("1,0\n0,1\n");
  });
});
