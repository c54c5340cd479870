/** Figure specification and build result shared by all four figures. */
import type { EChartsOption } from "echarts";
import type { SourcedValue } from "./csv";

export type FigureId = "scaling" | "motif" | "seeds" | "tiers";

export interface FigureSpec {
  id: FigureId;
  /** directory holding bounds.csv and analysis/ */
  dataDir: string;
  /** destination SVG path */
  output: string;
  style?: {
    /** tier shown in the scaling figure (default T1) */
    tier?: "T1" | "T2" | "T3" | "T4";
    width?: number;
    height?: number;
  };
}

export interface BuiltFigure {
  id: FigureId;
  option: EChartsOption;
  /** every CSV-sourced plotted value, traceable to its source cell */
  points: SourcedValue[];
  width: number;
  height: number;
}

export const LAYER_COLORS: Record<string, string> = {
  "1": "#4878b0",
  "2": "#e1812c",
  "3": "#3a923a",
};

export const SECTOR_PALETTE = [
  "#4878b0",
  "#e1812c",
  "#3a923a",
  "#c03d3e",
  "#9372b2",
  "#84584e",
  "#d57dbe",
];

export function sectorColor(sector: number, sectors: number[]): string {
  const ordered = [...new Set(sectors)].sort((a, b) => a - b);
  return SECTOR_PALETTE[ordered.indexOf(sector) % SECTOR_PALETTE.length];
}
