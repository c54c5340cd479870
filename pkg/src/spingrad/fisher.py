"""Classical and quantum Fisher information for the joint (B0, g) problem.

The encoding is diagonal (per-spin R_z phases), so outcome probabilities
depend on the parameters only through the phase vector phi = M x. The
classical Fisher matrix is assembled from parameter-shift derivatives in
phi, chained through the sensing matrix: 2N + 1 probability evaluations
per matrix (one unshifted plus a shifted pair per spin).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import decoders, kernels
from .chain import ChainConfig, ParameterPoint, generator_table, phases_at, sensing_matrix
from .qsim import apply_diagonal_phases

DEFAULT_REGULARIZER = 1e-6


@dataclass(frozen=True)
class FisherMatrix:
    """Symmetric 2x2 information matrix over (B0, g)."""

    f_bb: float
    f_gg: float
    f_bg: float

    @property
    def det(self) -> float:
        return self.f_bb * self.f_gg - self.f_bg ** 2

    def as_array(self) -> np.ndarray:
        return np.array([[self.f_bb, self.f_bg], [self.f_bg, self.f_gg]])

    def is_psd(self, tol: float = 1e-9) -> bool:
        return self.f_bb >= -tol and self.f_gg >= -tol and self.det >= -tol


def _decoder_blocks(probe_size_n: int,
                    decoder: decoders.DecoderSpec | None) -> np.ndarray | None:
    if decoder is None:
        return None
    return decoders.decoder_blocks(decoder, probe_size_n)


def _probs(probe: np.ndarray, n: int, phases: np.ndarray,
           blocks: np.ndarray | None) -> np.ndarray:
    state = apply_diagonal_phases(probe, phases)
    if blocks is not None:
        state = kernels.apply_1q_chain(state, n, blocks)
    return kernels.probabilities(state)


def outcome_probabilities(probe: np.ndarray, cfg: ChainConfig,
                          pt: ParameterPoint,
                          decoder: decoders.DecoderSpec | None) -> np.ndarray:
    """Computational-basis distribution after encoding and decoding.

    decoder=None means no decoder (identity); the encoding is then
    invisible and the distribution equals the probe's |c_k|^2.
    """
    blocks = _decoder_blocks(cfg.n_spins, decoder)
    return _probs(probe, cfg.n_spins, phases_at(cfg, pt), blocks)


def _phase_derivative(probe: np.ndarray, n: int, phases: np.ndarray,
                      blocks: np.ndarray | None, qubit: int) -> np.ndarray:
    plus = phases.copy()
    minus = phases.copy()
    plus[qubit] += math.pi / 2
    minus[qubit] -= math.pi / 2
    return 0.5 * (_probs(probe, n, plus, blocks) - _probs(probe, n, minus, blocks))


def parameter_shift_gradient(probe: np.ndarray, cfg: ChainConfig,
                             pt: ParameterPoint,
                             decoder: decoders.DecoderSpec | None,
                             qubit: int) -> np.ndarray:
    """d p_k / d phi_qubit from one +-pi/2 shifted circuit pair (exact)."""
    blocks = _decoder_blocks(cfg.n_spins, decoder)
    return _phase_derivative(probe, cfg.n_spins, phases_at(cfg, pt), blocks, qubit)


def phase_derivatives(probe: np.ndarray, cfg: ChainConfig, pt: ParameterPoint,
                      decoder: decoders.DecoderSpec | None) -> np.ndarray:
    """(n, 2^n) stack of d p / d phi_i, one shifted pair per spin."""
    blocks = _decoder_blocks(cfg.n_spins, decoder)
    phases = phases_at(cfg, pt)
    return np.stack([
        _phase_derivative(probe, cfg.n_spins, phases, blocks, i)
        for i in range(cfg.n_spins)
    ])


def classical_fim(probe: np.ndarray, cfg: ChainConfig, pt: ParameterPoint,
                  decoder: decoders.DecoderSpec | None) -> FisherMatrix:
    """CFIM of the outcome distribution at the operating point."""
    n = cfg.n_spins
    blocks = _decoder_blocks(n, decoder)
    phases = phases_at(cfg, pt)
    p0 = _probs(probe, n, phases, blocks)
    dphi = np.stack([
        _phase_derivative(probe, n, phases, blocks, i) for i in range(n)
    ])
    m = sensing_matrix(cfg)
    dp_b = m[:, 0] @ dphi
    dp_g = m[:, 1] @ dphi
    f_bb, f_gg, f_bg = kernels.fim_elements(
        p0, np.ascontiguousarray(dp_b), np.ascontiguousarray(dp_g))
    return FisherMatrix(f_bb=f_bb, f_gg=f_gg, f_bg=f_bg)


def qfim_pure(probe: np.ndarray, cfg: ChainConfig) -> FisherMatrix:
    """Pure-state QFIM, 4 Cov(G_a, G_b); generators are diagonal, so this
    depends only on the probe's basis probabilities."""
    return qfim_simplex(kernels.probabilities(probe), cfg)


def qfim_simplex(p: np.ndarray, cfg: ChainConfig) -> FisherMatrix:
    """QFIM of any probe whose basis distribution is p (phases drop out)."""
    p = np.asarray(p, dtype=float)
    if p.shape != (cfg.dim,):
        raise ValueError(f"expected distribution of length {cfg.dim}")
    table = generator_table(cfg)
    q_bb, q_gg, q_bg = kernels.qfim_elements(p, table.lam_b, table.lam_g)
    return FisherMatrix(f_bb=q_bb, f_gg=q_gg, f_bg=q_bg)


def log_det_objective(f: FisherMatrix,
                      regularizer: float = DEFAULT_REGULARIZER) -> float:
    """log det(F + lambda I), the D-optimal design objective."""
    value = (f.f_bb + regularizer) * (f.f_gg + regularizer) - f.f_bg ** 2
    if not value > 0.0:
        raise ValueError(
            f"log-det argument {value} is not positive; FIM is numerically invalid")
    return math.log(value)
