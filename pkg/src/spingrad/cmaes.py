"""(mu/mu_w, lambda)-CMA-ES, reference formulation, minimization.

Weighted recombination of the top half, cumulative step-size adaptation,
rank-one plus rank-mu covariance updates. Deterministic given the seed.
The start point is evaluated first and enters the best-so-far bookkeeping,
so a warm-started run can never end below its starting fitness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class CmaResult:
    x: np.ndarray
    fun: float
    trajectory: list[float] = field(default_factory=list)
    evaluations: int = 0
    generations: int = 0


def default_popsize(dim: int) -> int:
    return 4 + int(3 * math.log(dim))


class CmaEs:
    """Ask/tell CMA-ES state machine over R^dim."""

    def __init__(self, x0: np.ndarray, sigma0: float, seed: int,
                 popsize: int | None = None):
        self.dim = x0.size
        self.mean = np.asarray(x0, dtype=float).copy()
        self.sigma = float(sigma0)
        self.rng = np.random.default_rng(seed)

        n = self.dim
        self.lam = popsize if popsize else default_popsize(n)
        self.mu = self.lam // 2
        raw = np.log((self.lam + 1) / 2.0) - np.log(np.arange(1, self.mu + 1))
        self.weights = raw / raw.sum()
        self.mueff = 1.0 / np.sum(self.weights ** 2)

        self.cs = (self.mueff + 2) / (n + self.mueff + 5)
        self.damps = 1 + 2 * max(0.0, math.sqrt((self.mueff - 1) / (n + 1)) - 1) + self.cs
        self.cc = (4 + self.mueff / n) / (n + 4 + 2 * self.mueff / n)
        self.c1 = 2 / ((n + 1.3) ** 2 + self.mueff)
        self.cmu = min(1 - self.c1,
                       2 * (self.mueff - 2 + 1 / self.mueff) / ((n + 2) ** 2 + self.mueff))
        self.chi_n = math.sqrt(n) * (1 - 1 / (4 * n) + 1 / (21 * n ** 2))

        self.pc = np.zeros(n)
        self.ps = np.zeros(n)
        self.cov = np.eye(n)
        self._decompose()
        self.generation = 0

    def _decompose(self):
        self.cov = (self.cov + self.cov.T) / 2.0
        evals, self.eigvecs = np.linalg.eigh(self.cov)
        self.eigvals = np.maximum(evals, 1e-30)
        self.inv_sqrt = (self.eigvecs / np.sqrt(self.eigvals)) @ self.eigvecs.T

    def ask(self) -> np.ndarray:
        z = self.rng.standard_normal((self.lam, self.dim))
        y = z * np.sqrt(self.eigvals) @ self.eigvecs.T
        return self.mean + self.sigma * y

    def tell(self, candidates: np.ndarray, fitness: np.ndarray) -> None:
        n = self.dim
        order = np.argsort(fitness, kind="stable")
        selected = candidates[order[: self.mu]]
        old_mean = self.mean
        self.mean = self.weights @ selected
        y_w = (self.mean - old_mean) / self.sigma

        self.generation += 1
        self.ps = ((1 - self.cs) * self.ps
                   + math.sqrt(self.cs * (2 - self.cs) * self.mueff)
                   * (self.inv_sqrt @ y_w))
        ps_norm = float(np.linalg.norm(self.ps))
        denom = math.sqrt(1 - (1 - self.cs) ** (2 * self.generation))
        hsig = ps_norm / denom / self.chi_n < 1.4 + 2 / (n + 1)
        self.pc = ((1 - self.cc) * self.pc
                   + (math.sqrt(self.cc * (2 - self.cc) * self.mueff) * y_w
                      if hsig else 0.0))

        y_sel = (selected - old_mean) / self.sigma
        rank_mu = (y_sel.T * self.weights) @ y_sel
        c1a = self.c1 * (1 - (0 if hsig else 1) * self.cc * (2 - self.cc))
        self.cov = ((1 - c1a - self.cmu) * self.cov
                    + self.c1 * np.outer(self.pc, self.pc)
                    + self.cmu * rank_mu)
        # capped so a degenerate endgame cannot overflow before should_stop
        self.sigma *= math.exp(min(
            (self.cs / self.damps) * (ps_norm / self.chi_n - 1), 20.0))
        self._decompose()

    def should_stop(self) -> str | None:
        """Numerical-convergence termination (condition / step collapse)."""
        if self.eigvals.max() > 1e14 * max(self.eigvals.min(), 1e-300):
            return "condition"
        if self.sigma * math.sqrt(self.eigvals.max()) < 1e-14:
            return "tolx"
        return None


def cma_es_minimize(objective, dim: int, sigma0: float, seed: int,
                    max_evals: int = 20000, max_generations: int | None = None,
                    popsize: int | None = None,
                    x0: np.ndarray | None = None) -> CmaResult:
    """Minimize objective over R^dim; trajectory records best-so-far per
    generation (entry 0 is the start point's fitness)."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    start = np.zeros(dim) if x0 is None else np.asarray(x0, dtype=float)
    if start.size != dim:
        raise ValueError("x0 length does not match dim")

    def safe(x: np.ndarray) -> float:
        value = float(objective(x))
        return value if math.isfinite(value) or value == math.inf else math.inf

    es = CmaEs(start, sigma0, seed, popsize=popsize)
    best_x = start.copy()
    best_f = safe(start)
    evaluations = 1
    trajectory = [best_f]
    flat_generations = 0

    while evaluations < max_evals:
        if max_generations is not None and es.generation >= max_generations:
            break
        if es.should_stop():
            break
        candidates = es.ask()
        fitness = np.array([safe(x) for x in candidates])
        evaluations += len(candidates)
        es.tell(candidates, fitness)
        gen_best = int(np.argmin(fitness))
        if fitness[gen_best] < best_f:
            best_f = float(fitness[gen_best])
            best_x = candidates[gen_best].copy()
        trajectory.append(best_f)
        # tolfun: a long run of generations with no fitness diversity means
        # the search has collapsed onto a flat optimum
        spread = float(fitness.max() - fitness.min())
        flat_generations = flat_generations + 1 if spread < 1e-12 else 0
        if flat_generations >= 10:
            break

    return CmaResult(x=best_x, fun=best_f, trajectory=trajectory,
                     evaluations=evaluations, generations=es.generation)
