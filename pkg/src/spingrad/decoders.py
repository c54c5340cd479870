"""Pre-measurement decoder tiers.

Four nested families of single-qubit rotations applied before the
computational-basis readout. Each qubit gets the block R_z(alpha) followed
by R_x(beta) (z first, then x: a trailing z-rotation would be invisible to
the Z-basis measurement, so this order is the expressive one). Tiers:

    T1  fixed Ramsey, (alpha, beta) = (0, pi/2) on all qubits, no parameters
    T2  shared (alpha, beta) on all qubits, 2 parameters
    T3  own (alpha, beta) on qubit 0, shared pair on the rest, 4 parameters
    T4  independent (alpha_i, beta_i) per qubit, 2N parameters

T1 = T2 at (0, pi/2); each tier embeds in the next, so achievable Fisher
information is non-decreasing with tier index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels, qsim

TIERS = ("T1", "T2", "T3", "T4")


def tier_param_count(tier: str, n_spins: int) -> int:
    counts = {"T1": 0, "T2": 2, "T3": 4, "T4": 2 * n_spins}
    if tier not in counts:
        raise ValueError(f"unknown decoder tier {tier!r}")
    return counts[tier]


@dataclass(frozen=True)
class DecoderSpec:
    tier: str
    angles: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        object.__setattr__(self, "angles", np.asarray(self.angles, dtype=float))
        if self.tier not in TIERS:
            raise ValueError(f"unknown decoder tier {self.tier!r}")

    def validate(self, n_spins: int) -> None:
        expected = tier_param_count(self.tier, n_spins)
        if self.angles.size != expected:
            raise ValueError(
                f"tier {self.tier} expects {expected} angles for "
                f"{n_spins} qubits, got {self.angles.size}")

    def per_qubit_angles(self, n_spins: int) -> np.ndarray:
        """(n, 2) array of (alpha, beta) per qubit."""
        self.validate(n_spins)
        out = np.empty((n_spins, 2))
        if self.tier == "T1":
            out[:, 0] = 0.0
            out[:, 1] = math.pi / 2
        elif self.tier == "T2":
            out[:] = self.angles
        elif self.tier == "T3":
            out[0] = self.angles[:2]
            out[1:] = self.angles[2:]
        else:
            out[:] = self.angles.reshape(n_spins, 2)
        return out


def ramsey_decoder() -> DecoderSpec:
    return DecoderSpec(tier="T1")


def decoder_matrix(spec: DecoderSpec, n_spins: int) -> np.ndarray:
    """Dense 2^n x 2^n product of the per-qubit decoder blocks."""
    blocks = decoder_blocks(spec, n_spins)
    out = blocks[0]
    for u in blocks[1:]:
        out = np.kron(out, u)
    return out


def decoder_blocks(spec: DecoderSpec, n_spins: int) -> np.ndarray:
    """(n, 2, 2) per-qubit blocks R_x(beta) R_z(alpha)."""
    angles = spec.per_qubit_angles(n_spins)
    blocks = np.empty((n_spins, 2, 2), dtype=complex)
    for qubit, (alpha, beta) in enumerate(angles):
        blocks[qubit] = (qsim.rotation_matrix("x", beta)
                         @ qsim.rotation_matrix("z", alpha))
    return blocks


def apply_decoder(state: np.ndarray, spec: DecoderSpec) -> np.ndarray:
    """Per-qubit R_z(alpha) then R_x(beta) with tier parameter sharing."""
    n = qsim.num_qubits(state)
    return kernels.apply_1q_chain(state, n, decoder_blocks(spec, n))
