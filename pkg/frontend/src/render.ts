/** Headless SVG rendering via the echarts server-side renderer. */
import { mkdirSync, writeFileSync } from "fs";
import { dirname } from "path";
import echarts = require("echarts");
import { buildMotif } from "./figures/motif";
import { buildScaling } from "./figures/scaling";
import { buildSeeds } from "./figures/seeds";
import { buildTiers } from "./figures/tiers";
import type { BuiltFigure, FigureSpec } from "./figure";

const BUILDERS = {
  scaling: buildScaling,
  motif: buildMotif,
  seeds: buildSeeds,
  tiers: buildTiers,
} as const;

export function buildFigure(spec: FigureSpec): BuiltFigure {
  const builder = BUILDERS[spec.id];
  if (!builder) throw new Error(`unknown figure id ${spec.id}`);
  return builder(spec);
}

export function toSvg(figure: BuiltFigure): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: figure.width,
    height: figure.height,
  });
  try {
    chart.setOption(figure.option);
    // echarts bakes process-global counters into class/id names; renumber
    // them by first appearance so identical inputs give identical bytes
    let svg = chart.renderToSVGString();
    for (const [pattern, tag] of [
      [/zr\d+-cls-\d+/g, "zr-cls-"],
      [/zr\d+-g\d+/g, "zr-g"],
      [/zr\d+-c\d+/g, "zr-c"],
    ] as const) {
      const seen = new Map<string, string>();
      svg = svg.replace(pattern, (name) => {
        if (!seen.has(name)) seen.set(name, `${tag}${seen.size}`);
        return seen.get(name)!;
      });
    }
    return svg;
  } finally {
    chart.dispose();
  }
}

/** Build + render + write; the file only appears if the whole figure built. */
export function render(spec: FigureSpec): BuiltFigure {
  const figure = buildFigure(spec);
  const svg = toSvg(figure);
  mkdirSync(dirname(spec.output), { recursive: true });
  writeFileSync(spec.output, svg);
  return figure;
}
