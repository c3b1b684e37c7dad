"""Atomic probability measures on the real line.

The driver measure ``sum_k lam_k delta_{V_k}`` and the empirical measure
``sum_k (1/N) delta_{V_k}`` are both :class:`AtomicMeasure` values. Their
transforms use the convention ``M(z) = int 2/(z - u) dmu(u)``, i.e. twice the
usual Cauchy transform.
"""
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import kernels

MERGE_TOL = 1e-14
MASS_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    """Finitely many weighted point masses, sorted by position.

    Atoms closer than ``1e-14`` are merged. Unless ``total_mass`` is given
    explicitly the weights must sum to one.
    """

    positions: np.ndarray
    weights: np.ndarray
    total_mass: float = 1.0

    def __init__(self, positions, weights, total_mass=None):
        x = np.asarray(positions, dtype=float).ravel()
        w = np.asarray(weights, dtype=float).ravel()
        if x.shape != w.shape:
            raise ValueError("positions and weights must have equal length")
        if x.size == 0:
            raise ValueError("an atomic measure needs at least one atom")
        if np.any(w < 0) or not np.all(np.isfinite(x)):
            raise ValueError("weights must be nonnegative and positions finite")
        order = np.argsort(x, kind="stable")
        x, w = x[order], w[order]
        if x.size > 1 and np.any(np.diff(x) < MERGE_TOL):
            keep = np.concatenate(([True], np.diff(x) >= MERGE_TOL))
            groups = np.cumsum(keep) - 1
            w = np.bincount(groups, weights=w)
            x = x[keep]
        mass = float(w.sum())
        if total_mass is None:
            if abs(mass - 1.0) > MASS_TOL:
                raise ValueError(f"weights sum to {mass!r}, expected 1")
            total_mass = 1.0
        elif abs(mass - total_mass) > MASS_TOL * max(1.0, abs(total_mass)):
            raise ValueError("weights do not sum to the declared total mass")
        x.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "positions", x)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "total_mass", float(total_mass))

    @classmethod
    def uniform(cls, positions):
        x = np.asarray(positions, dtype=float)
        return cls(x, np.full(x.size, 1.0 / x.size))

    @classmethod
    def dirac(cls, x=0.0):
        return cls([x], [1.0])

    def __len__(self):
        return self.positions.size

    def scaled(self, factor):
        """Multiply every weight by ``factor``; the new mass is recorded."""
        return AtomicMeasure(self.positions, self.weights * factor, total_mass=self.total_mass * factor)

    def pushforward(self, fn):
        return AtomicMeasure(fn(self.positions), self.weights, total_mass=self.total_mass)

    def moment(self, fn):
        return np.dot(self.weights, fn(self.positions)).item()


@dataclass(frozen=True, eq=False)
class WeightProfile:
    """Piecewise-linear nondecreasing map of [0, 1] onto [0, 1]."""

    knots_u: np.ndarray
    knots_L: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.knots_u, dtype=float)
        L = np.asarray(self.knots_L, dtype=float)
        if u.shape != L.shape or u.size < 2:
            raise ValueError("need at least two knots")
        if u[0] != 0.0 or u[-1] != 1.0 or np.any(np.diff(u) <= 0):
            raise ValueError("knot abscissae must increase from 0 to 1")
        if abs(L[0]) > MASS_TOL or abs(L[-1] - 1.0) > MASS_TOL or np.any(np.diff(L) < -MASS_TOL):
            raise ValueError("profile must be nondecreasing with L(0)=0, L(1)=1")
        object.__setattr__(self, "knots_u", u)
        object.__setattr__(self, "knots_L", L)

    @classmethod
    def identity(cls):
        return cls(np.array([0.0, 1.0]), np.array([0.0, 1.0]))

    @classmethod
    def from_lambdas(cls, lambdas):
        """L_N with L_N(k/N) = lam_1 + ... + lam_k, linear in between."""
        lam = np.asarray(lambdas, dtype=float)
        n = lam.size
        return cls(np.arange(n + 1) / n, np.concatenate(([0.0], np.cumsum(lam))))

    @classmethod
    def from_function(cls, fn, n_knots):
        u = np.linspace(0.0, 1.0, n_knots + 1)
        return cls(u, np.asarray(fn(u), dtype=float))

    def __call__(self, u):
        return np.interp(u, self.knots_u, self.knots_L)

    def sup_distance(self, fn, n_samples=4001):
        u = np.union1d(self.knots_u, np.linspace(0.0, 1.0, n_samples))
        return float(np.max(np.abs(self(u) - fn(u))))


def cdf(m, x):
    """F(x) = m((-inf, x]), right-continuous; vectorized over ``x``."""
    cum = np.concatenate(([0.0], np.cumsum(m.weights)))
    idx = np.searchsorted(m.positions, x, side="right")
    out = cum[idx]
    return float(out) if np.ndim(out) == 0 else out


def compose_profile(L, m):
    """The measure whose distribution function is ``L(cdf(m, .))``."""
    G = np.cumsum(m.weights)
    G_left = np.concatenate(([0.0], G[:-1]))
    w = L(G) - L(G_left)
    return AtomicMeasure(m.positions, w, total_mass=float(L(G[-1]) - L(0.0)))


def cauchy(m, z):
    """M(z) = sum_k 2 w_k / (z - x_k) for ``z`` in the upper half-plane."""
    zz = np.asarray(z, dtype=complex)
    if np.any(zz.imag <= 0):
        raise ValueError("cauchy transform is evaluated on Im z > 0 only")
    out = kernels.cauchy(m.positions, m.weights, np.atleast_1d(zz).ravel())
    return complex(out[0]) if zz.ndim == 0 else out.reshape(zz.shape)


def stieltjes_invert(M, grid, eps):
    """Density estimate -Im M(x + i eps) / (2 pi) on ``grid``.

    ``M`` is any callable on complex arrays. No eps -> 0 extrapolation is
    attempted; the caller owns that limit.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    x = np.asarray(grid, dtype=float)
    return -np.imag(M(x + 1j * eps)) / (2.0 * np.pi)


def wasserstein1(a, b):
    """Exact W1 distance, the integral of |F_a - F_b| over merged breakpoints."""
    pts = np.union1d(a.positions, b.positions)
    if pts.size < 2:
        return 0.0
    gap = cdf(a, pts[:-1]) - cdf(b, pts[:-1])
    return float(np.sum(np.abs(gap) * np.diff(pts)))


def phi(x):
    """Lyapunov weight for condition (c): sqrt(1 + x^2) >= 1."""
    return np.sqrt(1.0 + np.square(x))


class AssumptionReport(NamedTuple):
    n: int
    c_estimate: float
    c_bound: float
    condition_a: bool
    phi_moment: float


def check_assumptions(lambdas, positions, c_bound=4.0):
    """Empirical constants for the max-weight and moment conditions.

    ``c_estimate`` is ``N * max(lam)``; condition (a) is flagged as holding
    when it stays below ``c_bound``. ``phi_moment`` integrates
    ``sqrt(1 + x^2)`` against the uniform empirical measure. Never raises on
    a violated condition.
    """
    lam = np.asarray(lambdas, dtype=float)
    x = np.asarray(positions, dtype=float)
    if abs(lam.sum() - 1.0) > 1e-9:
        raise ValueError("weights must sum to 1")
    c_est = float(lam.size * lam.max())
    return AssumptionReport(
        n=lam.size,
        c_estimate=c_est,
        c_bound=c_bound,
        condition_a=c_est <= c_bound,
        phi_moment=float(np.mean(phi(x))),
    )


def condition_a_trend(reports):
    """Log-log slope of the C-estimate across a sequence of N.

    A slope near 0 means bounded; the Johnny-type weights give slope 1.
    """
    n = np.array([r.n for r in reports], dtype=float)
    c = np.array([r.c_estimate for r in reports], dtype=float)
    slope = float(np.polyfit(np.log(n), np.log(c), 1)[0])
    return slope, slope < 0.25


class SmoothFunction(NamedTuple):
    """A C^2_b test function together with its first two derivatives."""

    f: Callable
    df: Callable
    d2f: Callable


def loewner_test_function(z):
    """f(x) = 2/(z - x), the test function that produces the Cauchy transform."""
    z = complex(z)
    return SmoothFunction(
        lambda x: 2.0 / (z - x),
        lambda x: 2.0 / (z - x) ** 2,
        lambda x: 4.0 / (z - x) ** 3,
    )


def _difference_quotient_integral(alpha, mu, fn):
    x = alpha.positions[:, None]
    y = mu.positions[None, :]
    diff = x - y
    close = np.abs(diff) < MERGE_TOL
    safe = np.where(close, 1.0, diff)
    kernel = np.where(close, fn.d2f(x + 0 * y), (fn.df(x) - fn.df(y)) / safe)
    return 2.0 * np.sum(alpha.weights[:, None] * mu.weights[None, :] * kernel)


def mckean_residual(times, mu_path, alpha_path, fn, t):
    """Defect of the weak evolution equation for the empirical measure.

    ``|d/dt int f dalpha_t - 2 iint (f'(x)-f'(y))/(x-y) dalpha_t(x) dmu_t(y)|``
    with a centered difference in time (one-sided at the ends of the grid).
    """
    times = np.asarray(times, dtype=float)
    i = int(np.argmin(np.abs(times - t)))
    if abs(times[i] - t) > 1e-9 * max(1.0, abs(t)):
        raise ValueError("t must lie on the time grid")
    lo, hi = max(i - 1, 0), min(i + 1, times.size - 1)
    if lo == hi:
        lhs = 0.0
    else:
        lhs = (alpha_path[hi].moment(fn.f) - alpha_path[lo].moment(fn.f)) / (times[hi] - times[lo])
    rhs = _difference_quotient_integral(alpha_path[i], mu_path[i], fn)
    return float(abs(lhs - rhs))

