#!/usr/bin/env node
/**
 * CLI for the preprocessing tools:
 *
 *   fuelgen <image.png> <out.csv> [--threshold t] [--downscale k]
 *   render  <in.data> <out.png> [--cmap fire]
 *   inspect <image.png>
 */

import { imageToFuelCsv } from "./fuelgen";
import { inspectPng, renderSnapshot } from "./render";

function parseFlags(args: string[], spec: Record<string, "number" | "string">) {
  const positional: string[] = [];
  const flags: Record<string, number | string> = {};
  for (let i = 0; i < args.length; i++) {
    const arg = args[i];
    if (arg.startsWith("--")) {
      const name = arg.slice(2);
      if (!(name in spec)) {
        throw new Error(`unknown flag --${name}`);
      }
      const raw = args[++i];
      if (raw === undefined) {
        throw new Error(`flag --${name} needs a value`);
      }
      if (spec[name] === "number") {
        const v = Number(raw);
        if (Number.isNaN(v)) {
          throw new Error(`flag --${name} needs a number, got ${raw}`);
        }
        flags[name] = v;
      } else {
        flags[name] = raw;
      }
    } else {
      positional.push(arg);
    }
  }
  return { positional, flags };
}

const USAGE = `usage:
  fuelgen <image.png> <out.csv> [--threshold t] [--downscale k]
  render  <in.data> <out.png> [--cmap fire|vegetation|grayscale]
  inspect <image.png>`;

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    if (command === "fuelgen") {
      const { positional, flags } = parseFlags(rest, { threshold: "number", downscale: "number" });
      if (positional.length !== 2) throw new Error(USAGE);
      imageToFuelCsv({
        inputPath: positional[0],
        outputPath: positional[1],
        threshold: flags.threshold as number | undefined,
        downscale: flags.downscale as number | undefined,
      });
      return 0;
    }
    if (command === "render") {
      const { positional, flags } = parseFlags(rest, { cmap: "string" });
      if (positional.length !== 2) throw new Error(USAGE);
      renderSnapshot(positional[0], positional[1], (flags.cmap as string) ?? "fire");
      return 0;
    }
    if (command === "inspect") {
      const { positional } = parseFlags(rest, {});
      if (positional.length !== 1) throw new Error(USAGE);
      process.stdout.write(JSON.stringify(inspectPng(positional[0])) + "\n");
      return 0;
    }
    throw new Error(USAGE);
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 2;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
