/**
 * Scaling figure: det F versus chain size under the fixed-tier readout.
 *
 * Panel (a): det F per depth on a log axis with the separable bound
 * (dashed) and the best-found benchmark (dotted) from the bounds table.
 * Panel (b): the same cells as a fraction of the benchmark
 * (ratio_to_qstar column, rendered as a percentage axis).
 */
import { join } from "path";
import type { EChartsOption, SeriesOption } from "echarts";
import { readCsvTable, sourced, type SourcedValue } from "../csv";
import { boundsRow, saturationRow, validateRows } from "../schema";
import { LAYER_COLORS, type BuiltFigure, type FigureSpec } from "../figure";

export function buildScaling(spec: FigureSpec): BuiltFigure {
  const tier = spec.style?.tier ?? "T1";
  const satTable = readCsvTable(
    join(spec.dataDir, "analysis", "saturation_table.csv"),
  );
  const boundsTable = readCsvTable(join(spec.dataDir, "bounds.csv"));
  validateRows(saturationRow, satTable.rows, satTable.path);
  validateRows(boundsRow, boundsTable.rows, boundsTable.path);

  const tierIdx = satTable.rows
    .map((row, i) => ({ row, i }))
    .filter(({ row }) => row.tier === tier);
  if (tierIdx.length === 0) {
    throw new Error(`${satTable.path}: no rows for tier ${tier}`);
  }

  const points: SourcedValue[] = [];
  const take = (i: number, column: string) => {
    const v = sourced(satTable, i, column);
    points.push(v);
    return v.value;
  };

  const nValues = [...new Set(tierIdx.map(({ row }) => Number(row.n_spins)))].sort(
    (a, b) => a - b,
  );
  const layers = [...new Set(tierIdx.map(({ row }) => Number(row.layers)))].sort(
    (a, b) => a - b,
  );

  const detSeries: SeriesOption[] = [];
  const ratioSeries: SeriesOption[] = [];
  for (const layer of layers) {
    const cells = tierIdx
      .filter(({ row }) => Number(row.layers) === layer)
      .sort((a, b) => Number(a.row.n_spins) - Number(b.row.n_spins));
    const color = LAYER_COLORS[String(layer)] ?? "#666";
    detSeries.push({
      name: `L=${layer}`,
      type: "line",
      symbol: "circle",
      symbolSize: 7,
      color,
      data: cells.map(({ row, i }) => [Number(row.n_spins), take(i, "best_det_f")]),
      xAxisIndex: 0,
      yAxisIndex: 0,
    });
    ratioSeries.push({
      name: `L=${layer}`,
      type: "line",
      symbol: "circle",
      symbolSize: 7,
      color,
      data: cells.map(({ row, i }) => [
        Number(row.n_spins),
        take(i, "ratio_to_qstar"),
      ]),
      xAxisIndex: 1,
      yAxisIndex: 1,
    });
  }

  const boundPoints = (column: string) =>
    boundsTable.rows
      .map((row, i) => ({ row, i }))
      .filter(({ row }) => nValues.includes(Number(row.n_spins)))
      .sort((a, b) => Number(a.row.n_spins) - Number(b.row.n_spins))
      .map(({ row, i }) => {
        const v = sourced(boundsTable, i, column);
        points.push(v);
        return [Number(row.n_spins), v.value] as [number, number];
      });

  detSeries.push(
    {
      name: "SQL",
      type: "line",
      color: "#333",
      lineStyle: { type: "dashed" },
      symbol: "none",
      data: boundPoints("det_q_sql"),
      xAxisIndex: 0,
      yAxisIndex: 0,
    },
    {
      name: "best-found benchmark",
      type: "line",
      color: "#888",
      lineStyle: { type: "dotted", width: 2 },
      symbol: "none",
      data: boundPoints("det_q_star"),
      xAxisIndex: 0,
      yAxisIndex: 0,
    },
  );

  const option: EChartsOption = {
    animation: false,
    title: [
      { text: `(a) det F scaling, tier ${tier}`, left: "18%", top: 4, textStyle: { fontSize: 13 } },
      { text: "(b) fraction of benchmark", left: "68%", top: 4, textStyle: { fontSize: 13 } },
    ],
    legend: { bottom: 0, data: [...layers.map((l) => `L=${l}`), "SQL", "best-found benchmark"] },
    grid: [
      { left: "7%", right: "55%", top: 36, bottom: 54 },
      { left: "56%", right: "4%", top: 36, bottom: 54 },
    ],
    xAxis: [
      { gridIndex: 0, type: "value", name: "N", min: "dataMin", max: "dataMax", minInterval: 1 },
      { gridIndex: 1, type: "value", name: "N", min: "dataMin", max: "dataMax", minInterval: 1 },
    ],
    yAxis: [
      { gridIndex: 0, type: "log", name: "det F" },
      {
        gridIndex: 1,
        type: "value",
        name: "det F / det Q*",
        min: 0,
        max: 1,
        axisLabel: { formatter: (value: number) => `${Math.round(value * 100)}%` },
      },
    ],
    series: [...detSeries, ...ratioSeries],
  };

  return {
    id: "scaling",
    option,
    points,
    width: spec.style?.width ?? 900,
    height: spec.style?.height ?? 420,
  };
}
