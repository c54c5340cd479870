/**
 * Tier heatmap: benchmark saturation per (depth, size) row across the
 * four decoder tiers, with the best-worst spread (percentage points) as
 * the rightmost column under its own color scale.
 */
import { join } from "path";
import type { EChartsOption } from "echarts";
import { readCsvTable, sourced, type SourcedValue } from "../csv";
import { tierMatrixRow, validateRows } from "../schema";
import type { BuiltFigure, FigureSpec } from "../figure";

const TIER_COLUMNS = ["T1", "T2", "T3", "T4"] as const;

export function buildTiers(spec: FigureSpec): BuiltFigure {
  const table = readCsvTable(join(spec.dataDir, "analysis", "tier_matrix.csv"));
  validateRows(tierMatrixRow, table.rows, table.path);
  if (table.rows.length === 0) {
    throw new Error(`${table.path}: empty record set`);
  }

  const rows = table.rows
    .map((row, i) => ({ row, i }))
    .sort(
      (a, b) =>
        Number(a.row.layers) - Number(b.row.layers) ||
        Number(a.row.n_spins) - Number(b.row.n_spins),
    );
  const rowLabels = rows.map(
    ({ row }) => `L=${row.layers}, N=${row.n_spins}`,
  );
  const points: SourcedValue[] = [];

  const ratioData: [number, number, number][] = [];
  rows.forEach(({ row, i }, y) => {
    TIER_COLUMNS.forEach((tier, x) => {
      if (row[tier] === "") return; // tier not part of this run
      const v = sourced(table, i, tier);
      points.push(v);
      ratioData.push([x, y, v.value]);
    });
  });
  const deltaData: [number, number, number][] = rows.map(({ i }, y) => {
    const v = sourced(table, i, "delta_pp");
    points.push(v);
    return [4, y, v.value];
  });
  const maxDelta = Math.max(...deltaData.map((d) => d[2]));

  const option: EChartsOption = {
    animation: false,
    title: {
      text: "benchmark saturation by decoder tier",
      left: "center",
      top: 4,
      textStyle: { fontSize: 13 },
    },
    grid: { left: 110, right: 40, top: 40, bottom: 70 },
    xAxis: {
      type: "category",
      data: [...TIER_COLUMNS, "spread (pp)"],
      splitArea: { show: true },
    },
    yAxis: {
      type: "category",
      data: rowLabels,
      splitArea: { show: true },
    },
    visualMap: [
      {
        min: 0,
        max: 1,
        seriesIndex: 0,
        calculable: false,
        orient: "horizontal",
        left: "12%",
        bottom: 4,
        text: ["1", "det F / det Q*  0"],
        inRange: { color: ["#30123b", "#28bceb", "#a4fc3c", "#fb7e21", "#7a0403"] },
      },
      {
        min: 0,
        max: Math.max(maxDelta, 1e-9),
        seriesIndex: 1,
        calculable: false,
        orient: "horizontal",
        left: "62%",
        bottom: 4,
        text: ["max", "spread 0"],
        inRange: { color: ["#f7fbff", "#6baed6", "#08306b"] },
      },
    ],
    series: [
      {
        type: "heatmap",
        data: ratioData,
        label: {
          show: true,
          fontSize: 10,
          formatter: (params) => (params.value as number[])[2].toFixed(2),
        },
      },
      {
        type: "heatmap",
        data: deltaData,
        label: {
          show: true,
          fontSize: 10,
          formatter: (params) => (params.value as number[])[2].toFixed(1),
        },
      },
    ],
  };

  return {
    id: "tiers",
    option,
    points,
    width: spec.style?.width ?? 640,
    height: spec.style?.height ?? Math.max(360, 60 + 28 * rows.length),
  };
}
