/**
 * Row schemas of the primary pipeline's output files (zod).
 *
 * Values stay strings at this layer (`numeric` = string holding a float);
 * conversion happens at figure assembly with provenance tracking.
 */
import { z } from "zod";

const numeric = z.string().regex(/^-?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$/, {
  message: "expected a numeric string",
});
const integer = z.string().regex(/^-?\d+$/);

export const boundsRow = z.object({
  n_spins: integer,
  det_q_sql: numeric,
  log_det_q_sql: numeric,
  det_q_star: numeric,
  log_det_q_star: numeric,
  restart_spread: numeric,
  restarts: integer,
});

export const saturationRow = z.object({
  layers: integer,
  n_spins: integer,
  tier: z.enum(["T1", "T2", "T3", "T4"]),
  best_det_f: numeric,
  det_q_sql: numeric,
  det_q_star: numeric,
  ratio_to_sql: numeric,
  ratio_to_qstar: numeric,
  seed_min: numeric,
  seed_q1: numeric,
  seed_median: numeric,
  seed_q3: numeric,
  seed_max: numeric,
  seed_spread_pct: numeric,
});

const numericOrEmpty = z.union([numeric, z.literal("")]);

export const tierMatrixRow = z.object({
  layers: integer,
  n_spins: integer,
  T1: numericOrEmpty,
  T2: numericOrEmpty,
  T3: numericOrEmpty,
  T4: numericOrEmpty,
  delta_pp: numeric,
});

export const seedStatsRow = z.object({
  layers: integer,
  n_spins: integer,
  tier: z.enum(["T1", "T2", "T3", "T4"]),
  seed: integer,
  det_f: numeric,
  log_det_f: numeric,
  ratio_to_sql: numeric,
  ratio_to_qstar: numeric,
});

export const motifReport = z.object({
  schema_version: z.literal(1),
  cell: z.object({
    layers: z.number().int(),
    n_spins: z.number().int(),
    tier: z.string(),
  }),
  seed: z.number().int(),
  motif: z.object({
    top4: z
      .array(
        z.object({
          bits: z.string().regex(/^[01]+$/),
          p: z.number(),
          sector: z.number(),
        }),
      )
      .length(4),
    cumulative_top4: z.number(),
    ghz_pair_weight: z.number(),
    halfflip_pair_weight: z.number(),
    ghz_fidelity: z.number(),
    off_motif_weight: z.number(),
    halfflip_split: z.array(z.string()).length(2),
  }),
});

export type MotifReport = z.infer<typeof motifReport>;

export function validateRows<T>(
  schema: z.ZodType<T>,
  rows: Record<string, string>[],
  path: string,
): T[] {
  return rows.map((row, i) => {
    const result = schema.safeParse(row);
    if (!result.success) {
      throw new Error(`${path}: row ${i + 1} invalid: ${result.error.message}`);
    }
    return result.data;
  });
}
