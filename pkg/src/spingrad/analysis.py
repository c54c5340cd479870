"""Post-processing of optimized probes and run records.

Motif extraction with Dicke-sector labels, GHZ fidelity, saturation and
tier-comparison tables, and per-seed statistics. Everything here is a pure
transformation of already-computed data; nothing re-runs physics.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Iterable

import numpy as np

from . import ioutil, kernels
from .chain import ChainConfig, generator_table

log = logging.getLogger(__name__)

if TYPE_CHECKING:  # pragma: no cover
    from .varopt import RunRecord

SCHEMA_VERSION = 1

SATURATION_COLUMNS = [
    "layers", "n_spins", "tier", "best_det_f", "det_q_sql", "det_q_star",
    "ratio_to_sql", "ratio_to_qstar", "seed_min", "seed_q1", "seed_median",
    "seed_q3", "seed_max", "seed_spread_pct",
]
TIER_MATRIX_COLUMNS = ["layers", "n_spins", "T1", "T2", "T3", "T4", "delta_pp"]
SEED_STATS_COLUMNS = [
    "layers", "n_spins", "tier", "seed", "det_f", "log_det_f",
    "ratio_to_sql", "ratio_to_qstar",
]


def bitstring(k: int, n_spins: int) -> str:
    return format(k, f"0{n_spins}b")


def halfflip_pairs(n_spins: int) -> list[tuple[int, int]]:
    """Admissible half-chain-flip index pairs (0^a 1^b, 1^a 0^b).

    Even N has the single balanced split; odd N admits both near-balanced
    splits, either of which satisfies motif membership.
    """
    splits = {(n_spins - n_spins // 2, n_spins // 2)}
    splits.add((n_spins // 2, n_spins - n_spins // 2))
    pairs = []
    for a, b in sorted(splits):
        pairs.append(((1 << b) - 1, ((1 << a) - 1) << b))
    return pairs


def canonical_motif_sets(n_spins: int) -> list[set[int]]:
    """Acceptable four-string motif sets: GHZ extrema plus one flip pair."""
    extrema = {0, (1 << n_spins) - 1}
    return [extrema | set(pair) for pair in halfflip_pairs(n_spins)]


@dataclass
class MotifReport:
    """Weight structure of a probe over the GHZ + half-flip motif."""

    top4: list[tuple[str, float, float]]  # (basis string, probability, sector)
    cumulative_top4: float
    ghz_pair_weight: float
    halfflip_pair_weight: float
    ghz_fidelity: float
    off_motif_weight: float
    halfflip_split: tuple[str, str]

    def to_json_dict(self) -> dict:
        return {
            "top4": [{"bits": b, "p": p, "sector": s} for b, p, s in self.top4],
            "cumulative_top4": self.cumulative_top4,
            "ghz_pair_weight": self.ghz_pair_weight,
            "halfflip_pair_weight": self.halfflip_pair_weight,
            "ghz_fidelity": self.ghz_fidelity,
            "off_motif_weight": self.off_motif_weight,
            "halfflip_split": list(self.halfflip_split),
        }


def motif_report(state: np.ndarray, cfg: ChainConfig) -> MotifReport:
    """Top-4 basis weights (ties broken by ascending index), Dicke sectors,
    and weights against the canonical motif set."""
    p = kernels.probabilities(state)
    table = generator_table(cfg)
    # ties (within float noise) break toward the lowest basis index
    order = np.lexsort((np.arange(p.size), -np.round(p, 12)))
    top = order[:4]
    top4 = [(bitstring(int(k), cfg.n_spins), float(p[k]), float(table.lam_b[k]))
            for k in top]

    last = cfg.dim - 1
    ghz_pair = float(p[0] + p[last])
    ghz_fidelity = float(abs(state[0] + state[last]) ** 2 / 2.0)

    pairs = halfflip_pairs(cfg.n_spins)
    weights = [float(p[a] + p[b]) for a, b in pairs]
    chosen = int(np.argmax(weights))
    s1, s2 = pairs[chosen]

    return MotifReport(
        top4=top4,
        cumulative_top4=float(p[top].sum()),
        ghz_pair_weight=ghz_pair,
        halfflip_pair_weight=weights[chosen],
        ghz_fidelity=ghz_fidelity,
        off_motif_weight=float(1.0 - ghz_pair - weights[chosen]),
        halfflip_split=(bitstring(s1, cfg.n_spins), bitstring(s2, cfg.n_spins)),
    )


@dataclass
class SaturationRow:
    layers: int
    n_spins: int
    tier: str
    best_det_f: float
    det_q_sql: float
    det_q_star: float
    ratio_to_sql: float
    ratio_to_qstar: float
    seed_min: float
    seed_q1: float
    seed_median: float
    seed_q3: float
    seed_max: float
    seed_spread_pct: float

    def as_csv_row(self) -> list:
        return [getattr(self, name) for name in SATURATION_COLUMNS]


@dataclass
class SaturationTable:
    rows: list[SaturationRow] = field(default_factory=list)
    missing: list[tuple[int, int, str]] = field(default_factory=list)


def _log_spread_pct(log_values: np.ndarray) -> float:
    """Percentage seed spread: (max - min) over |mean| of log det F."""
    width = float(log_values.max() - log_values.min())
    if width == 0.0:
        return 0.0
    return 100.0 * width / max(abs(float(log_values.mean())), 1e-12)


def saturation_table(records: Iterable["RunRecord"],
                     benchmarks: dict[int, tuple[float, float]],
                     expected_cells: Iterable[tuple[int, int, str]] | None = None,
                     ) -> SaturationTable:
    """Best-of-seeds saturation per cell plus seed statistics.

    benchmarks maps n_spins -> (det_q_sql, det_q_star). Missing expected
    cells are reported in .missing, never fatal.
    """
    by_cell: dict[tuple[int, int, str], list] = {}
    for rec in records:
        by_cell.setdefault(rec.cell, []).append(rec)

    table = SaturationTable()
    for cell in sorted(by_cell, key=lambda c: (c[0], c[1], c[2])):
        layers, n_spins, tier = cell
        if n_spins not in benchmarks:
            log.warning("no benchmark for N=%d; skipping cell %s", n_spins, cell)
            continue
        group = by_cell[cell]
        dets = np.array([r.det_f for r in group])
        logs = np.array([r.best_objective for r in group])
        det_sql, det_qstar = benchmarks[n_spins]
        best = float(dets.max())
        q1, median, q3 = (float(v) for v in np.percentile(dets, [25, 50, 75]))
        table.rows.append(SaturationRow(
            layers=layers, n_spins=n_spins, tier=tier, best_det_f=best,
            det_q_sql=det_sql, det_q_star=det_qstar,
            ratio_to_sql=best / det_sql, ratio_to_qstar=best / det_qstar,
            seed_min=float(dets.min()), seed_q1=q1, seed_median=median,
            seed_q3=q3, seed_max=float(dets.max()),
            seed_spread_pct=_log_spread_pct(logs)))

    if expected_cells is not None:
        present = set(by_cell)
        table.missing = sorted(set(expected_cells) - present)
    return table


def tier_matrix(table: SaturationTable) -> list[dict]:
    """Rows (L, N) with per-tier ratio_to_qstar and the best-worst spread
    in percentage points."""
    cells: dict[tuple[int, int], dict[str, float]] = {}
    for row in table.rows:
        cells.setdefault((row.layers, row.n_spins), {})[row.tier] = row.ratio_to_qstar
    out = []
    for (layers, n_spins), ratios in sorted(cells.items()):
        values = list(ratios.values())
        out.append({
            "layers": layers, "n_spins": n_spins, **ratios,
            "delta_pp": 100.0 * (max(values) - min(values)),
        })
    return out


def write_saturation_csv(table: SaturationTable, path: Path) -> None:
    ioutil.write_csv(path, SATURATION_COLUMNS,
                     (row.as_csv_row() for row in table.rows), SCHEMA_VERSION)


def write_tier_matrix_csv(table: SaturationTable, path: Path) -> None:
    rows = []
    for entry in tier_matrix(table):
        rows.append([entry.get(col, "") for col in TIER_MATRIX_COLUMNS])
    ioutil.write_csv(path, TIER_MATRIX_COLUMNS, rows, SCHEMA_VERSION)


def write_seed_stats_csv(records: Iterable["RunRecord"],
                         benchmarks: dict[int, tuple[float, float]],
                         path: Path) -> None:
    rows = []
    ordered = sorted(records, key=lambda r: (r.layers, r.n_spins, r.tier, r.seed))
    for rec in ordered:
        if rec.n_spins not in benchmarks:
            continue
        det_sql, det_qstar = benchmarks[rec.n_spins]
        rows.append([rec.layers, rec.n_spins, rec.tier, rec.seed, rec.det_f,
                     rec.best_objective, rec.det_f / det_sql,
                     rec.det_f / det_qstar])
    ioutil.write_csv(path, SEED_STATS_COLUMNS, rows, SCHEMA_VERSION)


def write_motif_json(report_payload: dict, cell: tuple[int, int, str],
                     seed: int, path: Path) -> None:
    layers, n_spins, tier = cell
    ioutil.write_json(path, {
        "schema_version": SCHEMA_VERSION,
        "cell": {"layers": layers, "n_spins": n_spins, "tier": tier},
        "seed": seed,
        "motif": report_payload,
    })
