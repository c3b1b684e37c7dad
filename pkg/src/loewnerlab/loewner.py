"""Forward chordal Loewner flow driven by an atomic measure path.

The flow ``dg/dt = sum_k 2 lam_k / (g - V_k(t))`` is integrated with RK4.
Drivers are interpolated linearly between the samples of the driver path.
The step is ``min(grid step, eta / L)``, where ``L = sum_k 2 lam_k / |g - V_k|^2``
is the local Lipschitz constant of the field. This keeps each step
well resolved as a probe approaches the real line.
"""
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import kernels

SWALLOW_TOL = 1e-6
ETA = 0.02
EPS_LIFT = 1e-4


class Driving(NamedTuple):
    """Driver samples ``V[i, k]`` at ``times[i]`` with fixed weights."""

    times: np.ndarray
    V: np.ndarray
    lambdas: np.ndarray


def as_driving(driving):
    """Accept a :class:`~loewnerlab.drivers.DriverPath` or a ``Driving`` tuple."""
    if isinstance(driving, Driving):
        return driving
    times = np.ascontiguousarray(driving.times, dtype=float)
    V = np.ascontiguousarray(driving.V, dtype=float)
    lam = np.ascontiguousarray(driving.lambdas, dtype=float)
    if V.ndim != 2 or V.shape != (times.size, lam.size):
        raise ValueError("driver samples must have shape (len(times), len(lambdas))")
    return Driving(times, V, lam)


def constant_driving(positions, lambdas, T, dt):
    """Drivers frozen at ``positions`` on a uniform grid over [0, T]."""
    n = int(round(T / dt))
    times = np.arange(n + 1) * dt
    x = np.asarray(positions, dtype=float)
    return Driving(times, np.tile(x, (n + 1, 1)), np.asarray(lambdas, dtype=float))


def _check_horizon(drv, t):
    if t < 0 or t > drv.times[-1] * (1 + 1e-12):
        raise ValueError(f"t={t} is outside the driving horizon [0, {drv.times[-1]}]")


@dataclass(frozen=True, eq=False)
class FlowProbe:
    """One point followed by the flow."""

    z0: complex
    times: np.ndarray
    trajectory: np.ndarray
    swallow_time: Optional[float]
    g_end: complex

    @property
    def status(self):
        return "alive" if self.swallow_time is None else "swallowed"


@dataclass(frozen=True, eq=False)
class FlowField:
    """Bulk flow of a grid of starting points, shaped like the grid."""

    z0: np.ndarray
    t: float
    g: np.ndarray
    swallow_time: np.ndarray

    @property
    def alive(self):
        return np.isnan(self.swallow_time)


def _run(drv, z0, t, eta, swallow_tol):
    z = np.ascontiguousarray(np.atleast_1d(z0).ravel(), dtype=complex)
    if np.any(z.imag <= 0):
        raise ValueError("starting points must lie in the upper half-plane")
    return kernels.loewner_flow(drv.times, drv.V, drv.lambdas, z, float(t), eta, swallow_tol)


def flow(driving, z0, T, eta=ETA, swallow_tol=SWALLOW_TOL):
    """Follow ``z0`` under the flow up to time ``T``.

    Returns a :class:`FlowProbe`; the trajectory is sampled at the driver
    grid times up to ``T`` and is nan after a swallow.
    """
    drv = as_driving(driving)
    _check_horizon(drv, T)
    traj, g_end, t_sw = _run(drv, complex(z0), T, eta, swallow_tol)
    keep = drv.times <= T * (1 + 1e-12)
    times = drv.times[keep]
    trajectory = traj[0, keep]
    if times[-1] < T:
        times = np.append(times, T)
        trajectory = np.append(trajectory, g_end[0] if np.isnan(t_sw[0]) else np.nan)
    sw = None if np.isnan(t_sw[0]) else float(t_sw[0])
    return FlowProbe(complex(z0), times, trajectory, sw, complex(g_end[0]))


def grid_flow(driving, grid, t, eta=ETA, swallow_tol=SWALLOW_TOL):
    """Elementwise :func:`flow` at time ``t`` over an array of starting points."""
    drv = as_driving(driving)
    _check_horizon(drv, t)
    z = np.asarray(grid, dtype=complex)
    _, g_end, t_sw = _run(drv, z, t, eta, swallow_tol)
    g = np.where(np.isnan(t_sw), g_end, np.nan + 1j * np.nan)
    return FlowField(z, float(t), g.reshape(z.shape), t_sw.reshape(z.shape))


class FlowExpansion(NamedTuple):
    """Fit of ``g_t(z) - z = b/z + c/z^2 + d/z^3`` on large circles."""

    t: float
    b: float
    c: complex
    residual: float


def hcap_fit(driving, t, radii=(100.0, 200.0, 400.0), angles=(np.pi / 4, np.pi / 2, 3 * np.pi / 4)):
    """Half-plane capacity ``b`` of the hull at time ``t``.

    ``b`` is real by construction; complex ``c/z^2`` and ``d/z^3`` terms soak
    up the next orders so that moderate radii already give ``b`` accurately.
    """
    drv = as_driving(driving)
    _check_horizon(drv, t)
    z = (np.asarray(radii, dtype=float)[:, None] * np.exp(1j * np.asarray(angles))[None, :]).ravel()
    if t == 0:
        return FlowExpansion(0.0, 0.0, 0j, 0.0)
    _, g_end, t_sw = _run(drv, z, t, ETA, SWALLOW_TOL)
    if not np.all(np.isnan(t_sw)):
        raise ValueError("fit circle intersects the hull; use larger radii")
    y = g_end - z
    # unknowns: b, Re c, Im c, Re d, Im d; split complex equations into real rows
    cols = [1.0 / z, 1.0 / z ** 2, 1j / z ** 2, 1.0 / z ** 3, 1j / z ** 3]
    A = np.concatenate([np.stack([c.real for c in cols], axis=1), np.stack([c.imag for c in cols], axis=1)])
    rhs = np.concatenate([y.real, y.imag])
    sol, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    res = float(np.max(np.abs(A @ sol - rhs)))
    return FlowExpansion(float(t), float(sol[0]), complex(sol[1], sol[2]), res)


def _tip(drv, k, t, eps, eta):
    V_t = np.array([np.interp(t, drv.times, drv.V[:, j]) for j in range(drv.V.shape[1])])
    h0 = np.array([V_t[k] + 1j * eps])
    h, ok = kernels.reverse_flow(drv.times, drv.V, drv.lambdas, h0, float(t), eta)
    if not ok[0]:
        raise ValueError("reverse flow left the upper half-plane; increase eps_lift")
    return complex(h[0])


def trace(driving, k, t, eps_lift=EPS_LIFT, eta=ETA / 4):
    """Tip of curve ``k`` at time ``t`` from the reverse flow.

    The reverse flow starts at ``V_k(t) + i eps`` and its endpoint has an
    ``O(eps^2)`` offset from the true tip, removed by Richardson
    extrapolation over ``{eps, eps/2}``.
    """
    drv = as_driving(driving)
    _check_horizon(drv, t)
    if not 0 <= k < drv.V.shape[1]:
        raise IndexError(f"driver index {k} out of range")
    if t == 0:
        return complex(drv.V[0, k], eps_lift)
    a = _tip(drv, k, t, eps_lift, eta)
    b = _tip(drv, k, t, eps_lift / 2, eta)
    return (4.0 * b - a) / 3.0
