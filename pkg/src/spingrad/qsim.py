"""Dense statevector engine.

States are 1-D complex128 arrays of length 2^n, basis index k with qubit 0
as the most significant bit. All operations are pure: they return new
arrays and never mutate their inputs. Rotation convention throughout:
R_a(theta) = exp(-i theta sigma_a / 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .chain import SIGMA_X, SIGMA_Y, SIGMA_Z

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class TrotterConfig:
    steps: int = 400

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("trotter steps must be >= 1")


def num_qubits(state: np.ndarray) -> int:
    n = int(state.size).bit_length() - 1
    if 1 << n != state.size:
        raise ValueError("statevector length is not a power of two")
    return n


def make_basis_state(n_qubits: int, k: int) -> np.ndarray:
    if not 0 <= k < (1 << n_qubits):
        raise IndexError(f"basis index {k} out of range for {n_qubits} qubits")
    state = np.zeros(1 << n_qubits, dtype=complex)
    state[k] = 1.0
    return state


def rotation_matrix(axis: str, angle: float) -> np.ndarray:
    """2x2 matrix of exp(-i angle sigma_axis / 2)."""
    sigma = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}[axis]
    c = math.cos(angle / 2.0)
    s = math.sin(angle / 2.0)
    return c * np.eye(2, dtype=complex) - 1j * s * sigma


def apply_single_qubit_rotation(state: np.ndarray, qubit: int, axis: str,
                                angle: float) -> np.ndarray:
    n = num_qubits(state)
    if not 0 <= qubit < n:
        raise IndexError(f"qubit {qubit} out of range for {n}-qubit state")
    return kernels.apply_1q(state, n, qubit, rotation_matrix(axis, angle))


def apply_global_rotation(state: np.ndarray, axis: str, angle: float) -> np.ndarray:
    """The same single-qubit rotation applied to every qubit."""
    n = num_qubits(state)
    u = rotation_matrix(axis, angle)
    for qubit in range(n):
        state = kernels.apply_1q(state, n, qubit, u)
    return state


def apply_diagonal_phases(state: np.ndarray, phases: np.ndarray) -> np.ndarray:
    """c_k *= exp(-i sum_i phi_i (1 - 2 b_i(k)) / 2); |c_k| unchanged."""
    n = num_qubits(state)
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (n,):
        raise ValueError(f"expected {n} phases, got shape {phases.shape}")
    return kernels.diag_phase(state, n, phases)


def _check_hermitian(h: np.ndarray) -> None:
    scale = max(1.0, float(np.abs(h).max()))
    if np.abs(h - h.conj().T).max() > HERMITICITY_TOL * scale:
        raise ValueError("operator is not Hermitian")


def evolve_exact(state: np.ndarray, hamiltonian: np.ndarray, t: float) -> np.ndarray:
    """exp(-i t H) |psi> by eigendecomposition (oracle for Trotter paths)."""
    if hamiltonian.shape != (state.size, state.size):
        raise ValueError("hamiltonian dimension does not match state")
    _check_hermitian(hamiltonian)
    w, v = np.linalg.eigh(hamiltonian)
    return v @ (np.exp(-1j * t * w) * (v.conj().T @ state))


def trotter_unitary(terms, dim: int, t: float, cfg: TrotterConfig) -> np.ndarray:
    """(prod_j exp(-i t H_j / m))^m for dense Hermitian summands.

    The first summand in `terms` acts on the state first within each step.
    """
    dt = t / cfg.steps
    step = np.eye(dim, dtype=complex)
    for h in terms:
        _check_hermitian(h)
        w, v = np.linalg.eigh(h)
        factor = (v * np.exp(-1j * dt * w)) @ v.conj().T
        step = factor @ step
    return np.linalg.matrix_power(step, cfg.steps)


def evolve_trotter(state: np.ndarray, terms, t: float,
                   cfg: TrotterConfig) -> np.ndarray:
    if not terms:
        raise ValueError("no summands given")
    for h in terms:
        if h.shape != (state.size, state.size):
            raise ValueError("summand dimension does not match state")
    return trotter_unitary(terms, state.size, t, cfg) @ state
