/**
 * Seed-variance figure: per-seed det F normalized by the separable bound,
 * one panel per decoder tier, grouped by chain size, color-coded by
 * depth. Boxes come from the per-cell quartiles in the saturation table
 * (divided by the same row's det Q_SQL: the y-axis unit); individual
 * seed outcomes are overlaid verbatim from the seed statistics table.
 * The dashed line marks the separable bound, the solid segments the
 * benchmark ratio from the bounds table.
 */
import { join } from "path";
import type { EChartsOption, SeriesOption } from "echarts";
import { readCsvTable, sourced, type SourcedValue } from "../csv";
import { boundsRow, saturationRow, seedStatsRow, validateRows } from "../schema";
import { LAYER_COLORS, type BuiltFigure, type FigureSpec } from "../figure";

const TIERS = ["T1", "T2", "T3", "T4"] as const;
const BOX_COLUMNS = ["seed_min", "seed_q1", "seed_median", "seed_q3", "seed_max"];

export function buildSeeds(spec: FigureSpec): BuiltFigure {
  const seedTable = readCsvTable(join(spec.dataDir, "analysis", "seed_stats.csv"));
  const satTable = readCsvTable(
    join(spec.dataDir, "analysis", "saturation_table.csv"),
  );
  const boundsTable = readCsvTable(join(spec.dataDir, "bounds.csv"));
  validateRows(seedStatsRow, seedTable.rows, seedTable.path);
  validateRows(saturationRow, satTable.rows, satTable.path);
  validateRows(boundsRow, boundsTable.rows, boundsTable.path);
  if (seedTable.rows.length === 0) {
    throw new Error(`${seedTable.path}: empty record set`);
  }

  const tiers = TIERS.filter((t) => seedTable.rows.some((r) => r.tier === t));
  const nValues = [...new Set(seedTable.rows.map((r) => Number(r.n_spins)))].sort(
    (a, b) => a - b,
  );
  const layers = [...new Set(seedTable.rows.map((r) => Number(r.layers)))].sort(
    (a, b) => a - b,
  );
  const points: SourcedValue[] = [];

  const grids = tiers.map((_, p) => ({
    left: `${(100 * (p + 0.12)) / tiers.length}%`,
    width: `${80 / tiers.length}%`,
    top: 40,
    bottom: 64,
  }));
  const categories = nValues.map((n) => `N=${n}`);
  const series: SeriesOption[] = [];

  tiers.forEach((tier, p) => {
    layers.forEach((layer, li) => {
      const color = LAYER_COLORS[String(layer)] ?? "#666";
      // category offset so the three depths sit side by side inside a group
      const offset = (li - (layers.length - 1) / 2) * 0.26;

      const boxData: [number, number, number, number, number, number][] = [];
      satTable.rows.forEach((row, i) => {
        if (row.tier !== tier || Number(row.layers) !== layer) return;
        const x = nValues.indexOf(Number(row.n_spins)) + offset;
        const sql = sourced(satTable, i, "det_q_sql");
        const stats = BOX_COLUMNS.map((c) => {
          const v = sourced(satTable, i, c);
          points.push(v);
          return v.value / sql.value;
        });
        boxData.push([x, stats[0], stats[1], stats[2], stats[3], stats[4]] as never);
      });
      series.push({
        type: "boxplot",
        xAxisIndex: p,
        yAxisIndex: p,
        color,
        boxWidth: ["40%", "18"] as never,
        itemStyle: { borderColor: color, color: "transparent" },
        data: boxData,
        silent: true,
      } as SeriesOption);

      const scatter: [number, number][] = [];
      seedTable.rows.forEach((row, i) => {
        if (row.tier !== tier || Number(row.layers) !== layer) return;
        const v = sourced(seedTable, i, "ratio_to_sql");
        points.push(v);
        scatter.push([nValues.indexOf(Number(row.n_spins)) + offset, v.value]);
      });
      series.push({
        name: `L=${layer}`,
        type: "scatter",
        xAxisIndex: p,
        yAxisIndex: p,
        color,
        symbolSize: 4,
        data: scatter,
      });
    });

    // reference marks: separable bound at 1, benchmark-over-SQL per N
    const benchmark: SeriesOption = {
      type: "line",
      xAxisIndex: p,
      yAxisIndex: p,
      symbol: "none",
      color: "#222",
      lineStyle: { width: 0 },
      data: [],
      markLine: {
        silent: true,
        symbol: "none",
        lineStyle: { type: "dashed", color: "#555" },
        label: { show: false },
        data: [{ yAxis: 1 }],
      },
    };
    series.push(benchmark);
    boundsTable.rows.forEach((row, i) => {
      const n = Number(row.n_spins);
      if (!nValues.includes(n)) return;
      const sql = sourced(boundsTable, i, "det_q_sql");
      const qstar = sourced(boundsTable, i, "det_q_star");
      points.push(sql, qstar);
      const x = nValues.indexOf(n);
      series.push({
        type: "line",
        xAxisIndex: p,
        yAxisIndex: p,
        symbol: "none",
        color: "#222",
        lineStyle: { width: 2 },
        data: [
          [x - 0.42, qstar.value / sql.value],
          [x + 0.42, qstar.value / sql.value],
        ],
      });
    });
  });

  const option: EChartsOption = {
    animation: false,
    title: tiers.map((tier, p) => ({
      text: `tier ${tier}`,
      left: `${(100 * (p + 0.4)) / tiers.length}%`,
      top: 6,
      textStyle: { fontSize: 12 },
    })),
    legend: {
      bottom: 0,
      data: layers.map((l) => `L=${l}`),
    },
    grid: grids,
    xAxis: tiers.map((_, p) => ({
      gridIndex: p,
      type: "value",
      min: -0.5,
      max: nValues.length - 0.5,
      interval: 1,
      axisLabel: {
        formatter: (value: number) =>
          Number.isInteger(value) && value >= 0 && value < categories.length
            ? categories[value]
            : "",
      },
    })),
    yAxis: tiers.map((_, p) => ({
      gridIndex: p,
      type: "log",
      name: p === 0 ? "det F / det Q_SQL" : undefined,
    })),
    series,
  };

  return {
    id: "seeds",
    option,
    points,
    width: spec.style?.width ?? 1200,
    height: spec.style?.height ?? 420,
  };
}
