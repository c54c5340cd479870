"""Command-line entry point and on-disk result schemas.

Verbs: bounds, run, analyze, all (plus init-config). Layout under the
output directory:

    config.ini                     echo of the effective configuration
    bounds.csv / bounds.json       benchmark table per N
    L{L}_N{N}_{tier}/seed{S}.json  one RunRecord per (cell, seed)
    manifest.json                  record listing with result checksums
    analysis/saturation_table.csv  best-of-seeds saturation per cell
    analysis/tier_matrix.csv       per-(L,N) tier ratios + spread column
    analysis/seed_stats.csv        one row per record
    analysis/motif/...json         best-of-seeds motif report per cell

Record payloads are deterministic except the "runtime" block; manifest
checksums cover only the deterministic "result" block, so a rerun with
the same config reproduces identical checksums.
"""
from __future__ import annotations

import argparse
import configparser
import io
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

from . import analysis, bounds, ioutil, varopt
from .chain import ChainConfig, ParameterPoint
from .decoders import TIERS
from .qsim import TrotterConfig

log = logging.getLogger(__name__)

SCHEMA_VERSION = varopt.SCHEMA_VERSION


@dataclass(frozen=True)
class ExperimentConfig:
    """Full experiment description; defaults reproduce the reference study grid."""

    schema_version: int = SCHEMA_VERSION
    master_seed: int = 7
    output_dir: str = "out"
    # chain
    n_values: tuple = (2, 3, 4, 5, 6)
    spacing: float = 1.0
    gamma_e_t: float = 1.0
    j_l: float = 3.0
    j_s: float = -1.0
    mu0: float = 6.7e-4
    # grid
    layer_values: tuple = (1, 2, 3)
    tiers: tuple = ("T1", "T2", "T3", "T4")
    seeds: tuple = (204, 604, 1204, 2004, 3004)
    extra_seeds: tuple = ()
    extra_seed_cells: tuple = ()
    # optimizer
    sigma0: float = 0.3
    max_generations: int = 2000
    max_evaluations: int = 20000
    population: int = 0  # 0 = CMA-ES default 4 + floor(3 ln dim)
    regularizer: float = 1e-6
    # trotter
    trotter_steps: int = 400
    # operating point
    b0: float = 0.0
    g: float = math.pi / 100
    # bounds
    bounds_restarts: int = 50

    def __post_init__(self):
        for name in ("n_values", "layer_values", "tiers", "seeds"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be nonempty")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be distinct")
        for tier in self.tiers:
            if tier not in TIERS:
                raise ValueError(f"unknown tier {tier!r}")

    def chain_config(self, n_spins: int) -> ChainConfig:
        return ChainConfig(n_spins=n_spins, spacing=self.spacing,
                           gamma_e_t=self.gamma_e_t, j_l=self.j_l,
                           j_s=self.j_s, mu0=self.mu0)

    def operating_point(self) -> ParameterPoint:
        return ParameterPoint(b0=self.b0, g=self.g)

    def trotter(self) -> TrotterConfig:
        return TrotterConfig(steps=self.trotter_steps)

    def cma_settings(self) -> varopt.CmaSettings:
        return varopt.CmaSettings(
            sigma0=self.sigma0, max_generations=self.max_generations,
            max_evaluations=self.max_evaluations,
            population=self.population or None,
            regularizer=self.regularizer)

    def seeds_for(self, n_spins: int, tier: str) -> tuple:
        if self.extra_seeds and any(
                _parse_filter(token).matches(None, n_spins, tier)
                for token in self.extra_seed_cells):
            return self.seeds + tuple(s for s in self.extra_seeds
                                      if s not in self.seeds)
        return self.seeds


_SECTIONS = {
    "experiment": ("schema_version", "master_seed", "output_dir"),
    "chain": ("n_values", "spacing", "gamma_e_t", "j_l", "j_s", "mu0"),
    "grid": ("layer_values", "tiers", "seeds", "extra_seeds", "extra_seed_cells"),
    "optimizer": ("sigma0", "max_generations", "max_evaluations", "population",
                  "regularizer"),
    "trotter": ("trotter_steps",),
    "operating_point": ("b0", "g"),
    "bounds": ("bounds_restarts",),
}
_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def config_to_ini(config: ExperimentConfig) -> str:
    out = io.StringIO()
    for section, names in _SECTIONS.items():
        out.write(f"[{section}]\n")
        for name in names:
            value = getattr(config, name)
            if isinstance(value, tuple):
                text = ", ".join(ioutil.format_value(v) for v in value)
            else:
                text = ioutil.format_value(value)
                if isinstance(value, float) and not any(c in text for c in ".eE"):
                    text += ".0"
            out.write(f"{name} = {text}\n")
        out.write("\n")
    return out.getvalue()


def config_from_ini(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser()
    parser.read_string(text)
    values = {}
    for section, names in _SECTIONS.items():
        if not parser.has_section(section):
            continue
        for name in names:
            if not parser.has_option(section, name):
                continue
            raw = parser.get(section, name).strip()
            values[name] = _parse_field(name, raw)
    return ExperimentConfig(**values)


def _parse_field(name: str, raw: str):
    default = getattr(ExperimentConfig, name)
    if isinstance(default, tuple):
        items = [tok.strip() for tok in raw.split(",") if tok.strip()]
        if name in ("tiers", "extra_seed_cells"):
            return tuple(items)
        return tuple(int(tok) for tok in items)
    if isinstance(default, bool):
        return raw.lower() in ("1", "true", "yes")
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    return raw


def load_config(path: str | None) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    return config_from_ini(Path(path).read_text())


@dataclass(frozen=True)
class CellFilter:
    """--only filter, e.g. "L3,N5,T1"; omitted dimensions match anything."""

    layers: frozenset | None = None
    ns: frozenset | None = None
    tiers: frozenset | None = None

    def matches(self, layers: int | None, n_spins: int | None,
                tier: str | None) -> bool:
        if self.layers is not None and layers is not None and layers not in self.layers:
            return False
        if self.ns is not None and n_spins is not None and n_spins not in self.ns:
            return False
        if self.tiers is not None and tier is not None and tier not in self.tiers:
            return False
        return True


def _parse_filter(text: str | None) -> CellFilter:
    if not text:
        return CellFilter()
    layers, ns, tiers = set(), set(), set()
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if token.startswith("L") and token[1:].isdigit():
            layers.add(int(token[1:]))
        elif token.startswith("N") and token[1:].isdigit():
            ns.add(int(token[1:]))
        elif token in TIERS:
            tiers.add(token)
        else:
            raise ValueError(f"bad --only token {token!r}")
    return CellFilter(layers=frozenset(layers) or None,
                      ns=frozenset(ns) or None,
                      tiers=frozenset(tiers) or None)


def record_path(out_dir: Path, layers: int, n_spins: int, tier: str,
                seed: int) -> Path:
    return out_dir / f"L{layers}_N{n_spins}_{tier}" / f"seed{seed}.json"


def _config_checksum(config: ExperimentConfig) -> str:
    payload = {name: list(v) if isinstance(v := getattr(config, name), tuple)
               else v for name in _FIELD_TYPES}
    payload.pop("output_dir")
    return ioutil.canonical_checksum(payload)


class Manifest:
    """Single-writer record index; written atomically after every update."""

    def __init__(self, out_dir: Path, config: ExperimentConfig):
        self.path = out_dir / "manifest.json"
        self.config_checksum = _config_checksum(config)
        self.entries: dict[tuple, dict] = {}

    @staticmethod
    def load(out_dir: Path, config: ExperimentConfig) -> "Manifest":
        manifest = Manifest(out_dir, config)
        if not manifest.path.exists():
            return manifest
        import json
        payload = json.loads(manifest.path.read_text())
        if payload.get("schema_version") != SCHEMA_VERSION:
            raise ValueError("manifest schema version mismatch")
        if payload.get("config_checksum") != manifest.config_checksum:
            raise ValueError(
                "manifest was produced by a different configuration; "
                "refusing to resume (use a fresh --out)")
        for entry in payload.get("records", []):
            key = (entry["layers"], entry["n_spins"], entry["tier"], entry["seed"])
            manifest.entries[key] = entry
        return manifest

    def add(self, record: varopt.RunRecord, path_rel: str, checksum: str,
            status: str = "ok") -> None:
        key = (record.layers, record.n_spins, record.tier, record.seed)
        self.entries[key] = {
            "path": path_rel, "layers": record.layers,
            "n_spins": record.n_spins, "tier": record.tier,
            "seed": record.seed, "status": status, "checksum": checksum,
        }
        self.write()

    def add_failure(self, layers: int, n_spins: int, tier: str, seed: int) -> None:
        key = (layers, n_spins, tier, seed)
        self.entries[key] = {
            "path": None, "layers": layers, "n_spins": n_spins, "tier": tier,
            "seed": seed, "status": "failed", "checksum": None,
        }
        self.write()

    def write(self) -> None:
        ordered = sorted(
            self.entries.values(),
            key=lambda e: (TIERS.index(e["tier"]), e["n_spins"], e["seed"],
                           e["layers"]))
        ioutil.write_json(self.path, {
            "schema_version": SCHEMA_VERSION,
            "config_checksum": self.config_checksum,
            "records": ordered,
        })

    def ok_keys(self) -> set[tuple]:
        return {k for k, e in self.entries.items() if e["status"] == "ok"}


def _load_record(out_dir: Path, entry: dict) -> varopt.RunRecord:
    import json
    payload = json.loads((out_dir / entry["path"]).read_text())
    return varopt.RunRecord.from_json_dict(payload)


def _persist_record(out_dir: Path, manifest: Manifest,
                    record: varopt.RunRecord) -> None:
    path = record_path(out_dir, record.layers, record.n_spins, record.tier,
                       record.seed)
    payload = record.to_json_dict()
    ioutil.write_json(path, payload)
    checksum = ioutil.canonical_checksum(payload["result"])
    manifest.add(record, str(path.relative_to(out_dir)), checksum)


def compute_bounds_rows(config: ExperimentConfig) -> list[dict]:
    rows = []
    for n in config.n_values:
        cfg = config.chain_config(n)
        sql = bounds.sql_fim(n, config.spacing)
        solution = bounds.optimize_simplex_benchmark(
            cfg, restarts=config.bounds_restarts, seed=config.master_seed)
        rows.append({
            "n_spins": n,
            "det_q_sql": sql.det,
            "log_det_q_sql": math.log(sql.det),
            "det_q_star": solution.det_q,
            "log_det_q_star": math.log(solution.det_q),
            "restart_spread": solution.spread,
            "restarts": solution.restarts,
            # global optimality is not certified beyond N = 3; the value is
            # a lower bound on the true simplex maximum
            "lower_bound_only": n >= 4,
            "top5": solution.top5,
            "p_star": [float(v) for v in solution.p],
        })
    return rows


BOUNDS_COLUMNS = ["n_spins", "det_q_sql", "log_det_q_sql", "det_q_star",
                  "log_det_q_star", "restart_spread", "restarts"]


def cmd_bounds(config: ExperimentConfig, out_dir: Path) -> int:
    rows = compute_bounds_rows(config)
    ioutil.write_csv(out_dir / "bounds.csv", BOUNDS_COLUMNS,
                     ([row[c] for c in BOUNDS_COLUMNS] for row in rows),
                     SCHEMA_VERSION)
    ioutil.write_json(out_dir / "bounds.json",
                      {"schema_version": SCHEMA_VERSION, "rows": rows})
    for row in rows:
        log.info("N=%d det(Q_SQL)=%s det(Q*)=%s spread=%.2e", row["n_spins"],
                 row["det_q_sql"], row["det_q_star"], row["restart_spread"])
    return 0


def _read_benchmarks(config: ExperimentConfig,
                     out_dir: Path) -> dict[int, tuple[float, float]]:
    import json
    path = out_dir / "bounds.json"
    if not path.exists():
        log.info("bounds.json missing; computing it first")
        cmd_bounds(config, out_dir)
    payload = json.loads(path.read_text())
    if payload.get("schema_version") != SCHEMA_VERSION:
        raise ValueError("bounds.json schema version mismatch")
    return {row["n_spins"]: (row["det_q_sql"], row["det_q_star"])
            for row in payload["rows"]}


def _chain_task(args):
    """Worker for one (n, tier) best-of-depth chain (process-pool safe)."""
    (config, n, tier, layer_values, seeds, existing_payloads) = args
    existing = {key: varopt.RunRecord.from_json_dict(payload)
                for key, payload in existing_payloads.items()}
    records = varopt.run_depth_chain(
        config.chain_config(n), layer_values, tier, seeds,
        pt=config.operating_point(), trotter=config.trotter(),
        settings=config.cma_settings(), existing=existing)
    return [r.to_json_dict() for r in records]


def cmd_run(config: ExperimentConfig, out_dir: Path, jobs: int = 1,
            only: str | None = None, resume: bool = False) -> int:
    cell_filter = _parse_filter(only)
    out_dir.mkdir(parents=True, exist_ok=True)
    ioutil.atomic_write_text(out_dir / "config.ini", config_to_ini(config))
    manifest = Manifest.load(out_dir, config) if resume else Manifest(out_dir, config)
    done = manifest.ok_keys() if resume else set()

    required = [(layers, n, tier)
                for tier in config.tiers for n in config.n_values
                for layers in config.layer_values
                if cell_filter.matches(layers, n, tier)]
    if not required:
        log.warning("--only filter matched no cells")
        return 0

    chains = []
    for tier in sorted({t for _, _, t in required}, key=TIERS.index):
        for n in sorted({n for _, n, t in required if t == tier}):
            max_layer = max(l for l, nn, t in required
                            if nn == n and t == tier)
            layer_values = tuple(l for l in sorted(config.layer_values)
                                 if l <= max_layer)
            seeds = config.seeds_for(n, tier)
            pending = [(l, seed) for l in layer_values for seed in seeds
                       if (l, n, tier, seed) not in done]
            if not pending:
                continue
            existing_payloads = {
                (l, n, tier, seed): _load_record(
                    out_dir, manifest.entries[(l, n, tier, seed)]).to_json_dict()
                for l in layer_values for seed in seeds
                if (l, n, tier, seed) in done
            }
            chains.append((config, n, tier, layer_values, seeds,
                           existing_payloads))

    def mark_missing(records, chain):
        _, n, tier, layer_values, seeds, _ = chain
        got = {(r.layers, r.seed) for r in records}
        for layers in layer_values:
            for seed in seeds:
                if (layers, seed) not in got:
                    manifest.add_failure(layers, n, tier, seed)

    if jobs > 1 and len(chains) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for chain, payloads in zip(chains, pool.map(_chain_task, chains)):
                records = [varopt.RunRecord.from_json_dict(p) for p in payloads]
                for record in records:
                    if (record.layers, chain[1], chain[2], record.seed) not in done:
                        _persist_record(out_dir, manifest, record)
                mark_missing(records, chain)
    else:
        for chain in chains:
            config_, n, tier, layer_values, seeds, existing_payloads = chain
            existing = {key: varopt.RunRecord.from_json_dict(payload)
                        for key, payload in existing_payloads.items()}
            # persist each record as it completes so interrupts lose at
            # most one cell
            records = varopt.run_depth_chain(
                config_.chain_config(n), layer_values, tier, seeds,
                pt=config_.operating_point(), trotter=config_.trotter(),
                settings=config_.cma_settings(), existing=existing,
                on_record=lambda rec: _persist_record(out_dir, manifest, rec))
            mark_missing(records, chain)

    manifest.write()
    failures = sum(
        1 for (layers, n, tier) in required
        for seed in config.seeds_for(n, tier)
        if manifest.entries.get((layers, n, tier, seed), {}).get("status") != "ok")
    if failures:
        log.error("%d requested cell-seed runs failed", failures)
    return 1 if failures else 0


def cmd_analyze(config: ExperimentConfig, out_dir: Path) -> int:
    manifest = Manifest.load(out_dir, config)
    if not manifest.entries:
        log.error("no manifest/records under %s; run `spingrad run` first", out_dir)
        return 1
    records = [_load_record(out_dir, entry)
               for entry in manifest.entries.values()
               if entry["status"] == "ok"]
    benchmarks = _read_benchmarks(config, out_dir)

    expected = [(layers, n, tier)
                for tier in config.tiers for n in config.n_values
                for layers in config.layer_values]
    table = analysis.saturation_table(records, benchmarks, expected)
    analysis_dir = out_dir / "analysis"
    analysis.write_saturation_csv(table, analysis_dir / "saturation_table.csv")
    analysis.write_tier_matrix_csv(table, analysis_dir / "tier_matrix.csv")
    analysis.write_seed_stats_csv(records, benchmarks,
                                  analysis_dir / "seed_stats.csv")
    for cell, record in sorted(varopt.best_of_seeds(records).items()):
        layers, n, tier = cell
        analysis.write_motif_json(
            record.motif, cell, record.seed,
            analysis_dir / "motif" / f"L{layers}_N{n}_{tier}.json")
    for cell in table.missing:
        log.warning("missing cell %s", cell)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="spingrad",
        description="Joint magnetometry-gradiometry workbench on dipolar "
                    "spin chains")
    parser.add_argument("--config", help="path to experiment config (INI)")
    parser.add_argument("--out", help="output directory (overrides config)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("bounds", help="write the benchmark table (CSV + JSON)")
    run_p = sub.add_parser("run", help="execute the optimization grid")
    run_p.add_argument("--jobs", type=int, default=1,
                       help="concurrent warm-start lineages")
    run_p.add_argument("--only", help="cell filter, e.g. L3,N5,T1")
    run_p.add_argument("--resume", action="store_true",
                       help="skip cells already in the manifest")
    sub.add_parser("analyze", help="write analysis tables from records")
    all_p = sub.add_parser("all", help="bounds + run + analyze")
    all_p.add_argument("--jobs", type=int, default=1)
    all_p.add_argument("--only", help="cell filter, e.g. L3,N5,T1")
    all_p.add_argument("--resume", action="store_true")
    init_p = sub.add_parser("init-config",
                            help="write the default config file")
    init_p.add_argument("path", help="destination path")

    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s")

    if args.command == "init-config":
        ioutil.atomic_write_text(Path(args.path),
                                 config_to_ini(ExperimentConfig()))
        return 0

    config = load_config(args.config)
    out_dir = Path(args.out or config.output_dir)

    if args.command == "bounds":
        return cmd_bounds(config, out_dir)
    if args.command == "run":
        return cmd_run(config, out_dir, jobs=args.jobs, only=args.only,
                       resume=args.resume)
    if args.command == "analyze":
        return cmd_analyze(config, out_dir)
    if args.command == "all":
        status = cmd_bounds(config, out_dir)
        status = max(status, cmd_run(config, out_dir, jobs=args.jobs,
                                     only=args.only, resume=args.resume))
        return max(status, cmd_analyze(config, out_dir))
    return 2


if __name__ == "__main__":
    sys.exit(main())
