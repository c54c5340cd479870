"""Numba @njit implementations of the hot kernels.

Loop forms of everything in ``_numpy.py``; same call signatures, same
results. Imported only when numba is available and not disabled via
SPINGRAD_BACKEND=numpy.
"""
import numpy as np
from numba import njit

from ._numpy import DERIV_FLOOR, P_FLOOR


@njit(cache=True)
def apply_1q(state, n, qubit, u):
    out = np.empty_like(state)
    stride = 1 << (n - 1 - qubit)
    block = stride << 1
    for base in range(0, state.size, block):
        for off in range(stride):
            i0 = base + off
            i1 = i0 + stride
            a0 = state[i0]
            a1 = state[i1]
            out[i0] = u[0, 0] * a0 + u[0, 1] * a1
            out[i1] = u[1, 0] * a0 + u[1, 1] * a1
    return out


@njit(cache=True)
def diag_phase(state, n, phis):
    out = np.empty_like(state)
    for k in range(state.size):
        exponent = 0.0
        for i in range(n):
            bit = (k >> (n - 1 - i)) & 1
            exponent += phis[i] * (1.0 - 2.0 * bit)
        out[k] = state[k] * np.exp(-0.5j * exponent)
    return out


@njit(cache=True)
def probabilities(state):
    out = np.empty(state.size)
    for k in range(state.size):
        out[k] = state[k].real ** 2 + state[k].imag ** 2
    return out


@njit(cache=True)
def apply_1q_chain(state, n, us):
    for qubit in range(n):
        state = apply_1q(state, n, qubit, us[qubit])
    return state


@njit(cache=True)
def apply_2q_mat_left(mat, n, qi, qj, u4):
    out = np.empty_like(mat)
    cols = mat.shape[1]
    si = 1 << (n - 1 - qi)
    sj = 1 << (n - 1 - qj)
    dim = mat.shape[0]
    for r in range(dim):
        if (r & si) != 0 or (r & sj) != 0:
            continue
        r01 = r + sj
        r10 = r + si
        r11 = r + si + sj
        for c in range(cols):
            a00 = mat[r, c]
            a01 = mat[r01, c]
            a10 = mat[r10, c]
            a11 = mat[r11, c]
            out[r, c] = u4[0, 0] * a00 + u4[0, 1] * a01 + u4[0, 2] * a10 + u4[0, 3] * a11
            out[r01, c] = u4[1, 0] * a00 + u4[1, 1] * a01 + u4[1, 2] * a10 + u4[1, 3] * a11
            out[r10, c] = u4[2, 0] * a00 + u4[2, 1] * a01 + u4[2, 2] * a10 + u4[2, 3] * a11
            out[r11, c] = u4[3, 0] * a00 + u4[3, 1] * a01 + u4[3, 2] * a10 + u4[3, 3] * a11
    return out


@njit(cache=True)
def compose_2q_product(n, qis, qjs, u4s):
    out = np.eye(1 << n, dtype=np.complex128)
    for p in range(len(qis)):
        out = apply_2q_mat_left(out, n, qis[p], qjs[p], u4s[p])
    return out


@njit(cache=True)
def fim_elements(p0, dp_b, dp_g):
    f_bb = 0.0
    f_gg = 0.0
    f_bg = 0.0
    for k in range(p0.size):
        p = p0[k]
        db = dp_b[k]
        dg = dp_g[k]
        if p < P_FLOOR:
            if abs(db) < DERIV_FLOOR and abs(dg) < DERIV_FLOOR:
                continue
            p = P_FLOOR
        f_bb += db * db / p
        f_gg += dg * dg / p
        f_bg += db * dg / p
    return f_bb, f_gg, f_bg


@njit(cache=True)
def qfim_elements(p, lam_b, lam_g):
    eb = 0.0
    eg = 0.0
    ebb = 0.0
    egg = 0.0
    ebg = 0.0
    for k in range(p.size):
        pk = p[k]
        lb = lam_b[k]
        lg = lam_g[k]
        eb += pk * lb
        eg += pk * lg
        ebb += pk * lb * lb
        egg += pk * lg * lg
        ebg += pk * lb * lg
    return 4.0 * (ebb - eb * eb), 4.0 * (egg - eg * eg), 4.0 * (ebg - eb * eg)


@njit(cache=True)
def softmax(z):
    zmax = z[0]
    for i in range(1, z.size):
        if z[i] > zmax:
            zmax = z[i]
    e = np.empty(z.size)
    total = 0.0
    for i in range(z.size):
        e[i] = np.exp(z[i] - zmax)
        total += e[i]
    return e / total


@njit(cache=True)
def neg_det_qfim_softmax(z, lam_b, lam_g):
    p = softmax(z)
    q_bb, q_gg, q_bg = qfim_elements(p, lam_b, lam_g)
    return -(q_bb * q_gg - q_bg * q_bg)
