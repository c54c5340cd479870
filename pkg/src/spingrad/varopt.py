"""Variational pipeline: layered dipolar ansatz, joint encoder-decoder
CMA-ES training, layerwise warm starts, and multi-seed grid execution.

Each entangling layer applies, in circuit order,

    exp(-i t1 H)  ->  global R_x(theta2 * pi)  ->  global R_y(-pi/2)
    -> exp(-i t3 H)  ->  global R_y(pi/2)

on top of the |+>^N start produced by a global R_y(pi/2) on |0...0>.

The optimizer works in scaled coordinates: evolution times enter the
search vector in units of the inverse nearest-neighbour coupling 1/V_01
(the dipolar prefactor is absorbable into the trainable times, so this
fixes the landscape scale at order one), and theta2 enters as the fraction
multiplied by pi. Stored AnsatzParams always hold physical times.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass

import numpy as np

from . import analysis, fisher
from .chain import ChainConfig, ParameterPoint, dipolar_hamiltonian
from .cmaes import cma_es_minimize
from .decoders import TIERS, DecoderSpec, apply_decoder, tier_param_count  # noqa: F401
from .qsim import TrotterConfig, apply_global_rotation, make_basis_state

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
STANDARD_SEEDS = (204, 604, 1204, 2004, 3004)


@dataclass(frozen=True)
class AnsatzParams:
    """Per-layer (t1, theta2, t3); times are physical, theta2 a fraction
    of pi. Entries are unconstrained reals."""

    layers: np.ndarray

    def __post_init__(self):
        arr = np.atleast_2d(np.asarray(self.layers, dtype=float))
        if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] < 1:
            raise ValueError("ansatz parameters must have shape (L, 3)")
        object.__setattr__(self, "layers", arr)

    @property
    def num_layers(self) -> int:
        return self.layers.shape[0]

    @staticmethod
    def identity(num_layers: int) -> "AnsatzParams":
        return AnsatzParams(np.zeros((num_layers, 3)))


@dataclass(frozen=True)
class CmaSettings:
    sigma0: float = 0.3
    max_generations: int = 2000
    max_evaluations: int = 20000
    population: int | None = None
    regularizer: float = 1e-6


@dataclass
class RunRecord:
    """Full provenance of one (L, N, tier, seed) optimization cell."""

    n_spins: int
    layers: int
    tier: str
    seed: int
    best_objective: float
    det_f: float
    fim: fisher.FisherMatrix
    params: AnsatzParams
    decoder: DecoderSpec
    evaluations: int
    trajectory: list[float]
    motif: dict
    wall_time_s: float
    chain: ChainConfig
    point: ParameterPoint
    trotter_steps: int
    settings: CmaSettings

    @property
    def cell(self) -> tuple[int, int, str]:
        return (self.layers, self.n_spins, self.tier)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "cell": {"layers": self.layers, "n_spins": self.n_spins,
                     "tier": self.tier},
            "seed": self.seed,
            "config": {
                "chain": {
                    "n_spins": self.chain.n_spins,
                    "spacing": self.chain.spacing,
                    "gamma_e_t": self.chain.gamma_e_t,
                    "j_l": self.chain.j_l,
                    "j_s": self.chain.j_s,
                    "mu0": self.chain.mu0,
                },
                "operating_point": {"b0": self.point.b0, "g": self.point.g},
                "trotter_steps": self.trotter_steps,
                "optimizer": {
                    "sigma0": self.settings.sigma0,
                    "max_generations": self.settings.max_generations,
                    "max_evaluations": self.settings.max_evaluations,
                    "population": self.settings.population,
                    "regularizer": self.settings.regularizer,
                },
            },
            "result": {
                "best_objective": self.best_objective,
                "det_f": self.det_f,
                "fim": {"f_bb": self.fim.f_bb, "f_gg": self.fim.f_gg,
                        "f_bg": self.fim.f_bg},
                "encoder_layers": self.params.layers.tolist(),
                "decoder_angles": self.decoder.angles.tolist(),
                "evaluations": self.evaluations,
                "trajectory": self.trajectory,
                "motif": self.motif,
            },
            "runtime": {"wall_time_s": self.wall_time_s},
        }

    @staticmethod
    def from_json_dict(payload: dict) -> "RunRecord":
        if payload.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(
                f"record schema version {payload.get('schema_version')} "
                f"does not match {SCHEMA_VERSION}")
        cfg = ChainConfig(**payload["config"]["chain"])
        pt = ParameterPoint(**payload["config"]["operating_point"])
        opt = payload["config"]["optimizer"]
        result = payload["result"]
        f = result["fim"]
        return RunRecord(
            n_spins=payload["cell"]["n_spins"],
            layers=payload["cell"]["layers"],
            tier=payload["cell"]["tier"],
            seed=payload["seed"],
            best_objective=result["best_objective"],
            det_f=result["det_f"],
            fim=fisher.FisherMatrix(f_bb=f["f_bb"], f_gg=f["f_gg"], f_bg=f["f_bg"]),
            params=AnsatzParams(np.array(result["encoder_layers"])),
            decoder=DecoderSpec(tier=payload["cell"]["tier"],
                                angles=np.array(result["decoder_angles"])),
            evaluations=result["evaluations"],
            trajectory=list(result["trajectory"]),
            motif=dict(result["motif"]),
            wall_time_s=payload["runtime"]["wall_time_s"],
            chain=cfg,
            point=pt,
            trotter_steps=payload["config"]["trotter_steps"],
            settings=CmaSettings(**opt),
        )


def prepare_probe(cfg: ChainConfig, params: AnsatzParams,
                  trotter: TrotterConfig | None = TrotterConfig()) -> np.ndarray:
    """Probe state of the layered dipolar ansatz.

    trotter=None evolves exactly (eigendecomposition); otherwise each
    evolution block is first-order Trotterized with trotter.steps steps.
    """
    ham = dipolar_hamiltonian(cfg)

    def evolve(state: np.ndarray, t: float) -> np.ndarray:
        if t == 0.0:
            return state
        if trotter is None:
            return ham.exact_unitary(t) @ state
        return ham.trotter_unitary(t, trotter.steps) @ state

    state = make_basis_state(cfg.n_spins, 0)
    state = apply_global_rotation(state, "y", math.pi / 2)
    for t1, theta2, t3 in params.layers:
        state = evolve(state, t1)
        state = apply_global_rotation(state, "x", theta2 * math.pi)
        state = apply_global_rotation(state, "y", -math.pi / 2)
        state = evolve(state, t3)
        state = apply_global_rotation(state, "y", math.pi / 2)
    return state


class CellObjective:
    """Maps flat optimizer vectors to (ansatz, decoder) and fitness.

    Vector layout: 3L encoder coordinates (t1, theta2, t3 per layer, times
    in units of 1/V_01) followed by the tier's decoder angles in radians.
    """

    def __init__(self, cfg: ChainConfig, num_layers: int, tier: str,
                 pt: ParameterPoint, trotter: TrotterConfig,
                 regularizer: float):
        self.cfg = cfg
        self.num_layers = num_layers
        self.tier = tier
        self.pt = pt
        self.trotter = trotter
        self.regularizer = regularizer
        self.time_scale = 1.0 / dipolar_hamiltonian(cfg).nearest_coupling
        self.dim = 3 * num_layers + tier_param_count(tier, cfg.n_spins)

    def decode(self, x: np.ndarray) -> tuple[AnsatzParams, DecoderSpec]:
        enc = np.array(x[: 3 * self.num_layers], dtype=float).reshape(-1, 3)
        enc[:, 0] *= self.time_scale
        enc[:, 2] *= self.time_scale
        return (AnsatzParams(enc),
                DecoderSpec(tier=self.tier, angles=x[3 * self.num_layers:]))

    def encode(self, params: AnsatzParams, decoder: DecoderSpec) -> np.ndarray:
        enc = params.layers.copy()
        enc[:, 0] /= self.time_scale
        enc[:, 2] /= self.time_scale
        return np.concatenate([enc.ravel(), decoder.angles])

    def evaluate(self, params: AnsatzParams,
                 decoder: DecoderSpec) -> tuple[fisher.FisherMatrix, float]:
        probe = prepare_probe(self.cfg, params, self.trotter)
        f = fisher.classical_fim(probe, self.cfg, self.pt, decoder)
        return f, fisher.log_det_objective(f, self.regularizer)

    def __call__(self, x: np.ndarray) -> float:
        """Negated objective for the minimizer; invalid FIMs map to +inf."""
        try:
            _, value = self.evaluate(*self.decode(x))
        except (ValueError, FloatingPointError):
            return math.inf
        return -value


def optimize_cell(cfg: ChainConfig, num_layers: int, tier: str, seed: int,
                  warmstart: AnsatzParams | None = None,
                  warm_decoder: DecoderSpec | None = None,
                  initial_mean: np.ndarray | None = None,
                  pt: ParameterPoint = ParameterPoint(),
                  trotter: TrotterConfig = TrotterConfig(),
                  settings: CmaSettings = CmaSettings()) -> RunRecord:
    """Joint encoder-decoder CMA-ES maximization of log det(F + lambda I).

    Fresh runs start from a broad seed-derived random mean (standard
    normal in scaled coordinates), so the seed set genuinely diversifies
    the explored basins; pass initial_mean explicitly to override. A warm
    start must carry num_layers - 1 layers; the appended layer starts at
    exactly zero, so the start point reproduces the shallower circuit and
    its fitness.
    """
    started = time.perf_counter()
    objective = CellObjective(cfg, num_layers, tier, pt, trotter,
                              settings.regularizer)

    if warmstart is not None:
        if warmstart.num_layers != num_layers - 1:
            raise ValueError("warm start must have exactly one layer fewer")
        prev_scaled = warmstart.layers.copy()
        prev_scaled[:, 0] /= objective.time_scale
        prev_scaled[:, 2] /= objective.time_scale
        dec0 = (warm_decoder.angles if warm_decoder is not None
                else np.zeros(tier_param_count(tier, cfg.n_spins)))
        # exact zero append: the start point reproduces the depth L-1
        # circuit, so the starting fitness equals the warm-start optimum
        x0 = np.concatenate([np.vstack([prev_scaled, np.zeros((1, 3))]).ravel(),
                             dec0])
    elif initial_mean is not None:
        x0 = np.asarray(initial_mean, dtype=float)
        if x0.size != objective.dim:
            raise ValueError("initial mean length does not match cell dimension")
    else:
        init_rng = np.random.default_rng(
            [seed, num_layers, cfg.n_spins, TIERS.index(tier)])
        x0 = init_rng.standard_normal(objective.dim)

    result = cma_es_minimize(
        objective, dim=objective.dim, sigma0=settings.sigma0, seed=seed,
        max_evals=settings.max_evaluations,
        max_generations=settings.max_generations,
        popsize=settings.population, x0=x0)

    best_params, best_decoder = objective.decode(result.x)
    best_fim, best_value = objective.evaluate(best_params, best_decoder)
    probe = prepare_probe(cfg, best_params, trotter)
    motif = analysis.motif_report(probe, cfg).to_json_dict()

    return RunRecord(
        n_spins=cfg.n_spins, layers=num_layers, tier=tier, seed=seed,
        best_objective=best_value, det_f=best_fim.det, fim=best_fim,
        params=best_params, decoder=best_decoder,
        evaluations=result.evaluations,
        trajectory=[-v for v in result.trajectory],
        motif=motif, wall_time_s=time.perf_counter() - started,
        chain=cfg, point=pt, trotter_steps=trotter.steps, settings=settings)


def run_lineage(cfg: ChainConfig, layer_values, tier: str, seed: int,
                pt: ParameterPoint = ParameterPoint(),
                trotter: TrotterConfig = TrotterConfig(),
                settings: CmaSettings = CmaSettings(),
                existing: dict | None = None,
                on_record=None) -> list[RunRecord]:
    """Run one (N, tier, seed) warm-start chain across ascending depths.

    Cells found in `existing` (keyed by (layers, n_spins, tier, seed)) are
    reused as-is, including as warm-start sources. Failed cells are logged
    and skipped; later depths then start fresh.
    """
    records = []
    prev: RunRecord | None = None
    for num_layers in sorted(layer_values):
        key = (num_layers, cfg.n_spins, tier, seed)
        if existing and key in existing:
            rec = existing[key]
        else:
            warm = warm_dec = None
            if prev is not None and prev.layers == num_layers - 1:
                warm, warm_dec = prev.params, prev.decoder
            try:
                rec = optimize_cell(cfg, num_layers, tier, seed,
                                    warmstart=warm, warm_decoder=warm_dec,
                                    pt=pt, trotter=trotter, settings=settings)
            except Exception:
                log.exception("cell L=%d N=%d %s seed=%d failed",
                              num_layers, cfg.n_spins, tier, seed)
                prev = None
                continue
            if on_record is not None:
                on_record(rec)
        records.append(rec)
        prev = rec
    return records


def run_depth_chain(cfg: ChainConfig, layer_values, tier: str, seeds,
                    pt: ParameterPoint = ParameterPoint(),
                    trotter: TrotterConfig = TrotterConfig(),
                    settings: CmaSettings = CmaSettings(),
                    existing: dict | None = None,
                    on_record=None) -> list[RunRecord]:
    """Run one (N, tier) grid column: at each depth every seed runs once,
    warm-started from the best record of the previous depth (depth 1 runs
    start from seed-diversified random means); the best parameters then
    seed the next depth. Cells found in `existing` (keyed by
    (layers, n_spins, tier, seed)) are reused. Failed seeds are logged
    and skipped; a depth with no surviving seeds breaks the warm chain
    and the next depth starts fresh.
    """
    records = []
    prev_best: RunRecord | None = None
    for num_layers in sorted(layer_values):
        depth_records = []
        warm = warm_dec = None
        if prev_best is not None and prev_best.layers == num_layers - 1:
            warm, warm_dec = prev_best.params, prev_best.decoder
        for seed in seeds:
            key = (num_layers, cfg.n_spins, tier, seed)
            if existing and key in existing:
                depth_records.append(existing[key])
                continue
            try:
                rec = optimize_cell(cfg, num_layers, tier, seed,
                                    warmstart=warm, warm_decoder=warm_dec,
                                    pt=pt, trotter=trotter, settings=settings)
            except Exception:
                log.exception("cell L=%d N=%d %s seed=%d failed",
                              num_layers, cfg.n_spins, tier, seed)
                continue
            if on_record is not None:
                on_record(rec)
            depth_records.append(rec)
        records.extend(depth_records)
        prev_best = (max(depth_records, key=lambda r: r.best_objective)
                     if depth_records else None)
    return records


def run_grid(n_values, layer_values, tiers, seeds,
             make_cfg=lambda n: ChainConfig(n_spins=n),
             pt: ParameterPoint = ParameterPoint(),
             trotter: TrotterConfig = TrotterConfig(),
             settings: CmaSettings = CmaSettings(),
             existing: dict | None = None,
             on_record=None) -> list[RunRecord]:
    """Execute every (L, N, tier, seed) cell with best-of-depth warm-start
    chaining per (N, tier) column."""
    records = []
    for tier in tiers:
        for n in n_values:
            records.extend(run_depth_chain(
                make_cfg(n), layer_values, tier, seeds, pt=pt,
                trotter=trotter, settings=settings, existing=existing,
                on_record=on_record))
    records.sort(key=lambda r: (TIERS.index(r.tier), r.n_spins, r.seed, r.layers))
    return records


def best_of_seeds(records) -> dict[tuple[int, int, str], RunRecord]:
    """Max-objective record per (layers, n_spins, tier) cell."""
    best: dict[tuple[int, int, str], RunRecord] = {}
    for rec in records:
        cur = best.get(rec.cell)
        if cur is None or rec.best_objective > cur.best_objective:
            best[rec.cell] = rec
    return best
