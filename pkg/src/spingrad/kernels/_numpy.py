"""Pure-numpy implementations of the hot kernels.

These are the reference semantics: the numba backend in ``_numba.py`` must
agree with every function here to float precision. Convention throughout:
basis index k has qubit 0 as the most significant bit.
"""
import numpy as np

P_FLOOR = 1e-12
DERIV_FLOOR = 1e-9


def apply_1q(state: np.ndarray, n: int, qubit: int, u: np.ndarray) -> np.ndarray:
    """Apply a 2x2 unitary to one qubit of a dense 2^n statevector."""
    a = state.reshape(1 << qubit, 2, 1 << (n - 1 - qubit))
    out = np.empty_like(a)
    out[:, 0, :] = u[0, 0] * a[:, 0, :] + u[0, 1] * a[:, 1, :]
    out[:, 1, :] = u[1, 0] * a[:, 0, :] + u[1, 1] * a[:, 1, :]
    return out.reshape(-1)


def diag_phase(state: np.ndarray, n: int, phis: np.ndarray) -> np.ndarray:
    """Multiply c_k by exp(-i sum_i phi_i (1 - 2 b_i(k)) / 2)."""
    k = np.arange(state.size)
    exponent = np.zeros(state.size)
    for i in range(n):
        bits = (k >> (n - 1 - i)) & 1
        exponent += phis[i] * (1.0 - 2.0 * bits)
    return state * np.exp(-0.5j * exponent)


def probabilities(state: np.ndarray) -> np.ndarray:
    return np.abs(state) ** 2


def apply_1q_chain(state: np.ndarray, n: int, us: np.ndarray) -> np.ndarray:
    """Apply us[q] (2x2) to qubit q for q = 0..n-1."""
    for qubit in range(n):
        state = apply_1q(state, n, qubit, us[qubit])
    return state


def apply_2q_mat_left(mat: np.ndarray, n: int, qi: int, qj: int,
                      u4: np.ndarray) -> np.ndarray:
    """Left-multiply a (2^n, C) matrix by a two-qubit gate on (qi, qj), qi < qj.

    Row index of u4 is (bit_i << 1) | bit_j.
    """
    cols = mat.shape[1]
    a = 1 << qi
    b = 1 << (qj - qi - 1)
    c = 1 << (n - 1 - qj)
    m6 = mat.reshape(a, 2, b, 2, c * cols)
    u = u4.reshape(2, 2, 2, 2)  # [i', j', i, j]
    out = np.einsum("pqrs,arbsc->apbqc", u, m6, optimize=True)
    return out.reshape(mat.shape)


def compose_2q_product(n: int, qis: np.ndarray, qjs: np.ndarray,
                       u4s: np.ndarray) -> np.ndarray:
    """Product of two-qubit gates applied to the identity; u4s[0] acts first."""
    out = np.eye(1 << n, dtype=complex)
    for p in range(len(qis)):
        out = apply_2q_mat_left(out, n, int(qis[p]), int(qjs[p]), u4s[p])
    return out


def fim_elements(p0: np.ndarray, dp_b: np.ndarray, dp_g: np.ndarray):
    """Fisher matrix elements sum_k dp_a dp_b / p_k with small-p handling.

    Outcomes with p_k < P_FLOOR are dropped when both derivatives are below
    DERIV_FLOOR, otherwise p_k is clamped to P_FLOOR (avoids 0/0 at exact
    zeros of smooth p_k).
    """
    small = p0 < P_FLOOR
    negligible = small & (np.abs(dp_b) < DERIV_FLOOR) & (np.abs(dp_g) < DERIV_FLOOR)
    keep = ~negligible
    p = np.where(small, P_FLOOR, p0)[keep]
    db = dp_b[keep]
    dg = dp_g[keep]
    f_bb = float(np.sum(db * db / p))
    f_gg = float(np.sum(dg * dg / p))
    f_bg = float(np.sum(db * dg / p))
    return f_bb, f_gg, f_bg


def qfim_elements(p: np.ndarray, lam_b: np.ndarray, lam_g: np.ndarray):
    """QFIM elements 4 [ E(la lb) - E(la) E(lb) ] over a basis distribution."""
    eb = float(p @ lam_b)
    eg = float(p @ lam_g)
    q_bb = 4.0 * (float(p @ (lam_b * lam_b)) - eb * eb)
    q_gg = 4.0 * (float(p @ (lam_g * lam_g)) - eg * eg)
    q_bg = 4.0 * (float(p @ (lam_b * lam_g)) - eb * eg)
    return q_bb, q_gg, q_bg


def softmax(z: np.ndarray) -> np.ndarray:
    e = np.exp(z - np.max(z))
    return e / e.sum()


def neg_det_qfim_softmax(z: np.ndarray, lam_b: np.ndarray,
                         lam_g: np.ndarray) -> float:
    """-det Q(softmax(z)); the simplex-benchmark objective, fused for speed."""
    p = softmax(z)
    q_bb, q_gg, q_bg = qfim_elements(p, lam_b, lam_g)
    return -(q_bb * q_gg - q_bg * q_bg)
