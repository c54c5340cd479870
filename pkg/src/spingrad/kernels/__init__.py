"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

Backend selection happens once at import:

* ``SPINGRAD_BACKEND=numpy``  forces the pure-numpy path,
* ``SPINGRAD_BACKEND=numba``  requires numba (ImportError if missing),
* unset/anything else         uses numba when importable, numpy otherwise.

``ACTIVE_BACKEND`` reports which one won. Both backends are importable
side by side (see ``benchmarks/kernel_bench.py`` and the parity tests).
"""
import os

from . import _numpy

_requested = os.environ.get("SPINGRAD_BACKEND", "").strip().lower()

if _requested == "numpy":
    _impl = _numpy
    ACTIVE_BACKEND = "numpy"
elif _requested == "numba":
    from . import _numba as _impl  # noqa: F401  (hard requirement)
    ACTIVE_BACKEND = "numba"
else:
    try:
        from . import _numba as _impl
        ACTIVE_BACKEND = "numba"
    except ImportError:
        _impl = _numpy
        ACTIVE_BACKEND = "numpy"

P_FLOOR = _numpy.P_FLOOR
DERIV_FLOOR = _numpy.DERIV_FLOOR

apply_1q = _impl.apply_1q
apply_1q_chain = _impl.apply_1q_chain
diag_phase = _impl.diag_phase
probabilities = _impl.probabilities
apply_2q_mat_left = _impl.apply_2q_mat_left
compose_2q_product = _impl.compose_2q_product
fim_elements = _impl.fim_elements
qfim_elements = _impl.qfim_elements
softmax = _impl.softmax
neg_det_qfim_softmax = _impl.neg_det_qfim_softmax

__all__ = [
    "ACTIVE_BACKEND",
    "P_FLOOR",
    "DERIV_FLOOR",
    "apply_1q",
    "apply_1q_chain",
    "diag_phase",
    "probabilities",
    "apply_2q_mat_left",
    "compose_2q_product",
    "fim_elements",
    "qfim_elements",
    "softmax",
    "neg_det_qfim_softmax",
]
