/**
 * CSV/JSON loading for spingrad result files.
 *
 * Every table is kept as raw strings so figures can trace each plotted
 * value back to the exact bytes of its source cell.
 */
import { readFileSync } from "fs";
import Papa from "papaparse";

export const SCHEMA_VERSION = 1;

export interface CsvTable {
  path: string;
  version: number;
  header: string[];
  /** row-major raw cells, exactly as they appear in the file */
  rows: Record<string, string>[];
}

export class SchemaMismatchError extends Error {
  constructor(path: string, found: number | string) {
    super(
      `${path}: schema_version ${found} does not match expected ${SCHEMA_VERSION}; ` +
        `refusing to render`,
    );
    this.name = "SchemaMismatchError";
  }
}

export function readCsvTable(path: string): CsvTable {
  const text = readFileSync(path, "utf8");
  const firstLine = text.slice(0, text.indexOf("\n"));
  const match = firstLine.match(/^# schema_version=(\d+)$/);
  if (!match) throw new SchemaMismatchError(path, "missing");
  const version = Number(match[1]);
  if (version !== SCHEMA_VERSION) throw new SchemaMismatchError(path, version);

  const body = text.slice(text.indexOf("\n") + 1);
  const parsed = Papa.parse<Record<string, string>>(body.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new Error(`${path}: CSV parse error: ${parsed.errors[0].message}`);
  }
  return {
    path,
    version,
    header: parsed.meta.fields ?? [],
    rows: parsed.data,
  };
}

export function readJsonFile(path: string): unknown {
  const payload = JSON.parse(readFileSync(path, "utf8"));
  const version = (payload as { schema_version?: unknown }).schema_version;
  if (version !== SCHEMA_VERSION) {
    throw new SchemaMismatchError(path, String(version));
  }
  return payload;
}

/** A plotted value with provenance back to its source cell. */
export interface SourcedValue {
  file: string;
  row: number;
  column: string;
  raw: string;
  value: number;
}

export function sourced(
  table: CsvTable,
  rowIndex: number,
  column: string,
): SourcedValue {
  const raw = table.rows[rowIndex][column];
  if (raw === undefined) {
    throw new Error(`${table.path}: row ${rowIndex} has no column ${column}`);
  }
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    throw new Error(`${table.path}: ${column}[${rowIndex}] = ${raw} is not a number`);
  }
  return { file: table.path, row: rowIndex, column, raw, value };
}
