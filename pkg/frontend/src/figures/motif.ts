/**
 * Motif figure: top-4 computational-basis weights of the optimized probe,
 * one panel per chain size, bars colored by Dicke sector, cumulative
 * top-4 weight annotated. Inputs are the best-of-seeds motif reports at
 * the deepest circuit under the fixed Ramsey tier.
 */
import { readdirSync } from "fs";
import { join } from "path";
import type { EChartsOption } from "echarts";
import { readJsonFile } from "../csv";
import { motifReport, type MotifReport } from "../schema";
import { sectorColor, type BuiltFigure, type FigureSpec } from "../figure";

export function motifInputPaths(dataDir: string): string[] {
  const dir = join(dataDir, "analysis", "motif");
  const names = readdirSync(dir)
    .filter((name) => /^L3_N\d+_T1\.json$/.test(name))
    .sort((a, b) => {
      const n = (s: string) => Number(s.match(/_N(\d+)_/)![1]);
      return n(a) - n(b);
    });
  return names.map((name) => join(dir, name));
}

export function buildMotif(spec: FigureSpec): BuiltFigure {
  const paths = motifInputPaths(spec.dataDir);
  if (paths.length === 0) {
    throw new Error(`no L3/T1 motif reports under ${spec.dataDir}/analysis/motif`);
  }
  const reports: MotifReport[] = paths.map((path) => {
    const parsed = motifReport.safeParse(readJsonFile(path));
    if (!parsed.success) {
      throw new Error(`${path}: invalid motif report: ${parsed.error.message}`);
    }
    return parsed.data;
  });

  const allSectors = reports.flatMap((r) => r.motif.top4.map((t) => t.sector));
  const panels = reports.length;
  const width = 320 * panels;

  const option: EChartsOption = {
    animation: false,
    title: reports.map((report, p) => ({
      text:
        `N = ${report.cell.n_spins}` +
        `  (top-4 weight ${report.motif.cumulative_top4.toFixed(2)})`,
      left: `${(100 * (p + 0.18)) / panels}%`,
      top: 4,
      textStyle: { fontSize: 12 },
    })),
    grid: reports.map((_, p) => ({
      left: `${(100 * (p + 0.12)) / panels}%`,
      width: `${78 / panels}%`,
      top: 40,
      bottom: 48,
    })),
    xAxis: reports.map((report, p) => ({
      gridIndex: p,
      type: "category",
      data: report.motif.top4.map((t) => t.bits),
      axisLabel: { rotate: panels > 2 ? 45 : 0, fontSize: 10 },
    })),
    yAxis: reports.map((_, p) => ({
      gridIndex: p,
      type: "value",
      name: p === 0 ? "|c_k|^2" : undefined,
      min: 0,
      max: 1,
    })),
    series: reports.map((report, p) => ({
      type: "bar",
      xAxisIndex: p,
      yAxisIndex: p,
      barWidth: "60%",
      data: report.motif.top4.map((t) => ({
        value: t.p,
        itemStyle: { color: sectorColor(t.sector, allSectors) },
        label: {
          show: true,
          position: "top",
          fontSize: 9,
          formatter: `m=${t.sector}`,
        },
      })),
    })),
  };

  return {
    id: "motif",
    option,
    points: [], // JSON-sourced; parity checked directly against the reports
    width: spec.style?.width ?? width,
    height: spec.style?.height ?? 360,
  };
}
