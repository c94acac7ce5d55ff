import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { PNG } from "pngjs";
import { afterEach, beforeEach, describe, expect, it } from "vitest";
import { fire, grayscale } from "../src/colormap";
import { parseField } from "../src/data";
import { fieldToImage, inspectPng, renderSnapshot } from "../src/render";

let dir: string;

beforeEach(() => {
  dir = fs.mkdtempSync(path.join(os.tmpdir(), "render-"));
});

afterEach(() => {
  fs.rmSync(dir, { recursive: true, force: true });
});

function writeData(name: string, n: number, value: (i: number, j: number) => number): string {
  const lines: string[] = [];
  for (let j = 0; j <= n; j++) {
    for (let i = 0; i <= n; i++) {
      lines.push(`${i} ${j} ${value(i, j)}`);
    }
  }
  const p = path.join(dir, name);
  fs.writeFileSync(p, lines.join("\n") + "\n");
  return p;
}

describe("data parsing", () => {
  it("reads a tensor grid ordered y-major", () => {
    const p = writeData("f.data", 2, (i, j) => i + 10 * j);
    const grid = parseField(fs.readFileSync(p, "ascii"), p);
    expect(grid.xs).toEqual([0, 1, 2]);
    expect(grid.ys).toEqual([0, 1, 2]);
    expect(grid.values[1][2]).toBe(21);
  });

  it("reports the line number of malformed rows", () => {
    expect(() => parseField("0 0 1\n0 1\n")).toThrow(/line 2/);
    expect(() => parseField("0 0 x\n")).toThrow(/line 1/);
    expect(() => parseField("")).toThrow(/empty/);
  });

  it("rejects non-grid samples", () => {
    expect(() => parseField("0 0 1\n1 1 2\n")).toThrow(/tensor grid/);
  });
});

describe("colormap", () => {
  it("runs yellow through red to dark red", () => {
    expect(fire(0)).toEqual([255, 230, 30]);
    expect(fire(0.5)).toEqual([220, 30, 20]);
    expect(fire(1)).toEqual([90, 0, 0]);
  });

  it("clamps out-of-range inputs", () => {
    expect(fire(-1)).toEqual(fire(0));
    expect(fire(2)).toEqual(fire(1));
  });
});

describe("rendering", () => {
  it("produces one pixel per sample", () => {
    const p = writeData("f.data", 4, (i, j) => i * j);
    const out = path.join(dir, "f.png");
    renderSnapshot(p, out);
    const info = inspectPng(out);
    expect(info.width).toBe(5);
    expect(info.height).toBe(5);
  });

  it("renders a constant field as a uniform image", () => {
    const p = writeData("c.data", 3, () => 7.25);
    const out = path.join(dir, "c.png");
    renderSnapshot(p, out);
    expect(inspectPng(out).uniform).toBe(true);
  });

  it("maps the field extremes to the colormap endpoints", () => {
    const grid = parseField("0 0 0\n1 0 1\n0 1 0.5\n1 1 0.25\n");
    const png = fieldToImage(grid, grayscale);
    // min -> 0, max -> 255; top image row holds the max-y samples
    const px = (i: number, j: number) => png.data[(j * png.width + i) * 4];
    expect(px(0, 1)).toBe(0); // value 0 at (x=0, y=0) -> bottom row
    expect(px(1, 1)).toBe(255); // value 1 at (x=1, y=0)
    expect(px(0, 0)).toBe(128); // value 0.5 at (x=0, y=1) -> top row
  });

  it("rejects unknown colormaps", () => {
    const p = writeData("f.data", 1, () => 0);
    expect(() => renderSnapshot(p, path.join(dir, "x.png"), "plasma")).toThrow(/colormap/);
  });
});
