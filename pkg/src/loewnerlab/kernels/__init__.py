"""Hot numerical kernels with a numba path and a pure-numpy path.

The active implementation is picked once at import from the
``LOEWNERLAB_BACKEND`` environment variable (``numba`` by default). Both
implementations stay importable as :mod:`._numba` and :mod:`._numpy` for
parity tests and benchmarks.
"""
from .._backend import active_backend
from . import _numpy

BACKEND = active_backend()

if BACKEND == "numba":
    from . import _numba as _impl
else:
    _impl = _numpy

drift_sle = _impl.drift_sle
drift_quad = _impl.drift_quad
pole_velocity = _impl.pole_velocity
cauchy = _impl.cauchy
loewner_flow = _impl.loewner_flow
reverse_flow = _impl.reverse_flow

__all__ = [
    "BACKEND",
    "drift_sle",
    "drift_quad",
    "pole_velocity",
    "cauchy",
    "loewner_flow",
    "reverse_flow",
]
