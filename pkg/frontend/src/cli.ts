/**
 * Figure rendering entry point.
 *
 *   node dist/cli.js <scaling|motif|seeds|tiers|all> --data DIR [--out DIR]
 *
 * --data is the spingrad output directory (bounds.csv + analysis/);
 * SVGs land in --out (default: <data>/figures).
 */
import { join } from "path";
import { render } from "./render";
import type { FigureId, FigureSpec } from "./figure";

const FIGURES: FigureId[] = ["scaling", "motif", "seeds", "tiers"];

function parseArgs(argv: string[]): { ids: FigureId[]; data: string; out: string } {
  const [command, ...rest] = argv;
  if (!command) {
    throw new Error(`usage: cli.js <${FIGURES.join("|")}|all> --data DIR [--out DIR]`);
  }
  const ids: FigureId[] =
    command === "all"
      ? FIGURES
      : FIGURES.includes(command as FigureId)
        ? [command as FigureId]
        : (() => {
            throw new Error(`unknown figure ${command}`);
          })();
  let data: string | undefined;
  let out: string | undefined;
  for (let i = 0; i < rest.length; i += 2) {
    const key = rest[i];
    const value = rest[i + 1];
    if (value === undefined) throw new Error(`missing value for ${key}`);
    if (key === "--data") data = value;
    else if (key === "--out") out = value;
    else throw new Error(`unknown flag ${key}`);
  }
  if (!data) throw new Error("--data DIR is required");
  return { ids, data, out: out ?? join(data, "figures") };
}

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  let failures = 0;
  for (const id of parsed.ids) {
    const spec: FigureSpec = {
      id,
      dataDir: parsed.data,
      output: join(parsed.out, `${id}.svg`),
    };
    try {
      const figure = render(spec);
      console.log(`${id}: wrote ${spec.output} (${figure.points.length} sourced values)`);
    } catch (err) {
      console.error(`${id}: ${(err as Error).message}`);
      failures += 1;
    }
  }
  return failures === 0 ? 0 : 1;
}

process.exit(main(process.argv.slice(2)));
