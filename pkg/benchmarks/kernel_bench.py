#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Per-kernel timings run both implementations side by side in one process;
the end-to-end objective evaluation is timed in subprocesses with
SPINGRAD_BACKEND forced, since the backend binds at import.

Usage: python3 benchmarks/kernel_bench.py [--repeat 200]
"""
import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from spingrad.kernels import _numpy

try:
    from spingrad.kernels import _numba
except ImportError:
    _numba = None


def random_state(n, seed=0):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return psi / np.linalg.norm(psi)


def build_cases(n=6):
    rng = np.random.default_rng(1)
    psi = random_state(n)
    u2 = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    us = np.stack([u2] * n)
    phis = rng.normal(size=n)
    mat = np.ascontiguousarray(rng.normal(size=(2 ** n, 2 ** n))
                               + 1j * rng.normal(size=(2 ** n, 2 ** n)))
    u4 = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))[0]
    u4 = np.ascontiguousarray(u4)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    qis = np.array([p[0] for p in pairs], dtype=np.int64)
    qjs = np.array([p[1] for p in pairs], dtype=np.int64)
    u4s = np.ascontiguousarray(np.stack([u4] * len(pairs)))
    p = np.abs(psi) ** 2
    dp = rng.normal(size=2 ** n) * 1e-2
    lam = rng.normal(size=2 ** n)
    z = rng.normal(size=2 ** n)
    return {
        "apply_1q": (psi, n, n // 2, u2),
        "apply_1q_chain": (psi, n, us),
        "diag_phase": (psi, n, phis),
        "probabilities": (psi,),
        "apply_2q_mat_left": (mat, n, 1, 4, u4),
        "compose_2q_product": (n, qis, qjs, u4s),
        "fim_elements": (p, dp, dp),
        "qfim_elements": (p, lam, lam),
        "neg_det_qfim_softmax": (z, lam, lam),
    }


def bench_kernels(repeat):
    cases = build_cases()
    print(f"{'kernel':24s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for name, args in cases.items():
        ref = getattr(_numpy, name)
        t_np = timeit.timeit(lambda: ref(*args), number=repeat) / repeat
        if _numba is None:
            print(f"{name:24s} {t_np * 1e6:9.2f}us {'n/a':>10s}")
            continue
        jitted = getattr(_numba, name)
        jitted(*args)  # compile outside the timed region
        t_nb = timeit.timeit(lambda: jitted(*args), number=repeat) / repeat
        print(f"{name:24s} {t_np * 1e6:9.2f}us {t_nb * 1e6:9.2f}us "
              f"{t_np / t_nb:7.1f}x")


END_TO_END = r"""
import time
import numpy as np
from spingrad import kernels, varopt
from spingrad.chain import ChainConfig, ParameterPoint
from spingrad.qsim import TrotterConfig

obj = varopt.CellObjective(ChainConfig(n_spins=6), 3, "T1", ParameterPoint(),
                           TrotterConfig(), 1e-6)
x = np.random.default_rng(0).normal(0, 0.3, obj.dim)
obj(x)  # warm caches / JIT
t0 = time.perf_counter()
reps = 40
for _ in range(reps):
    obj(x)
print(f"{kernels.ACTIVE_BACKEND}: {(time.perf_counter() - t0) / reps * 1e3:.2f} ms"
      " per objective evaluation (N=6, L=3, T1)")
"""


def bench_end_to_end():
    print("\nend-to-end objective evaluation:")
    for backend in ("numpy", "numba"):
        env = dict(os.environ, SPINGRAD_BACKEND=backend)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env,
                             capture_output=True, text=True)
        if out.returncode:
            print(f"{backend}: failed\n{out.stderr}")
        else:
            print("  " + out.stdout.strip())


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=200)
    parser.add_argument("--skip-end-to-end", action="store_true")
    args = parser.parse_args()
    bench_kernels(args.repeat)
    if not args.skip_end_to_end:
        bench_end_to_end()


if __name__ == "__main__":
    main()
