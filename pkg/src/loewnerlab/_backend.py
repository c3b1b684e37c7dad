"""Backend selection for the hot kernels.

Set ``LOEWNERLAB_BACKEND=numpy`` to bypass numba entirely; the default
(``numba``) falls back to numpy when numba cannot be imported.
"""
import os

ENV_FLAG = "LOEWNERLAB_BACKEND"

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None


def requested_backend():
    value = os.environ.get(ENV_FLAG, "numba").strip().lower()
    if value not in ("numba", "numpy"):
        raise ValueError(f"{ENV_FLAG} must be 'numba' or 'numpy', got {value!r}")
    return value


def active_backend():
    if numba is None:
        return "numpy"
    return requested_backend()


def njit(*args, **kwargs):
    """``numba.njit`` with caching on, or a no-op decorator without numba."""
    if numba is None:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    return numba.njit(*args, **kwargs)
