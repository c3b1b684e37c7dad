"""Complex Burgers equation ``dM/dt = -c_B M dM/dz`` and its solutions.

``c_B = 2`` governs the simultaneous particle system; ``c_B = 1`` is the
variant produced by the quadratic-differential dynamics. Starting from
``M_0(z) = 2/z`` the solution is the transform of a centred semicircle law
of variance ``2 c_B t``.
"""
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .measures import AtomicMeasure, cauchy

NEWTON_TOL = 1e-14
NEWTON_MAXIT = 60


def semicircle_transform(z, t):
    """``4 / (z + sqrt(z^2 - 16 t))`` with ``sqrt(z^2 - 16t) = z sqrt(1 - 16t/z^2)``.

    The principal root of the second factor makes the branch behave like
    ``z`` at infinity and stay continuous on the upper half-plane.
    """
    z = np.asarray(z, dtype=complex)
    root = z * np.sqrt(1.0 - 16.0 * t / (z * z))
    out = 4.0 / (z + root)
    return complex(out) if out.ndim == 0 else out


def semicircle_density(x, t):
    """Density of the semicircle law on ``[-4 sqrt(t), 4 sqrt(t)]``."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(np.clip(16.0 * t - x * x, 0.0, None)) / (8.0 * np.pi * t)


def _characteristic_foot(m, z, s):
    """Solve ``w + s M_0(w) = z`` for ``w`` in the upper half-plane.

    Newton with continuation in ``s``: the foot moves continuously from
    ``w = z`` at ``s = 0``, and the number of continuation stages doubles
    whenever a stage fails to converge or leaves the half-plane.
    """
    x, wts = m.positions, m.weights
    stages = 1
    while stages <= 4096:
        w = complex(z)
        ok = True
        for s_i in s * np.arange(1, stages + 1) / stages:
            for _ in range(NEWTON_MAXIT):
                d = w - x
                F = w + s_i * np.sum(2.0 * wts / d) - z
                dF = 1.0 - s_i * np.sum(2.0 * wts / (d * d))
                w_new = w - F / dF
                if w_new.imag <= 0 or not np.isfinite(w_new):
                    ok = False
                    break
                done = abs(w_new - w) <= NEWTON_TOL * max(1.0, abs(w_new))
                w = w_new
                if done:
                    break
            else:
                ok = False
            if not ok:
                break
        if ok:
            return w
        stages *= 2
    raise ArithmeticError(f"characteristic through z={z} not found")


@dataclass(frozen=True)
class BurgersSolution:
    """An evaluator ``(z, t) -> M_t(z)`` tagged with its Burgers coefficient."""

    kind: str
    c_B: float
    evaluator: Callable

    def __call__(self, z, t):
        return self.evaluator(z, t)

    @classmethod
    def semicircle(cls, c_B=2.0):
        """Exact solution from ``M_0 = 2/z``."""
        return cls("semicircle_exact", c_B, lambda z, t: semicircle_transform(z, 0.5 * c_B * t))

    @classmethod
    def from_initial_measure(cls, m, c_B=2.0):
        """Solution from ``M_0 = cauchy(m)`` by the method of characteristics.

        ``M_t(z) = M_0(w)`` where ``w + c_B t M_0(w) = z``.
        """
        def ev(z, t):
            zz = np.asarray(z, dtype=complex)
            feet = [_characteristic_foot(m, zi, c_B * t) for zi in zz.ravel()]
            out = cauchy(m, np.array(feet))
            return complex(out[0]) if zz.ndim == 0 else out.reshape(zz.shape)
        return cls("characteristics", c_B, ev)

    @classmethod
    def from_path(cls, path, c_B=2.0):
        """Transform of the empirical measure of a simulated driver path.

        Between grid times the driver positions are interpolated linearly.
        """
        def ev(z, t):
            return cauchy(AtomicMeasure.uniform(path.state_at(t)), z)
        return cls("numerical_from_measure", c_B, ev)

    @classmethod
    def frozen(cls, m, c_B=2.0):
        """Time-independent transform of ``m`` (not a solution unless trivial)."""
        return cls("numerical_from_measure", c_B, lambda z, t: cauchy(m, z))


def burgers_residual(M, z, t, h=1e-4, ht=None):
    """``|dM/dt + c_B M dM/dz|`` by centred differences.

    The spatial step is ``h * max(1, |z|)``; the time step ``ht`` defaults to
    ``h`` and falls back to a second-order one-sided stencil near ``t = 0``.
    """
    z = complex(z)
    hz = h * max(1.0, abs(z))
    ht = h if ht is None else ht
    m0 = M(z, t)
    dz = (M(z + hz, t) - M(z - hz, t)) / (2.0 * hz)
    if t - ht >= 0:
        dt = (M(z, t + ht) - M(z, t - ht)) / (2.0 * ht)
    else:
        dt = (-3.0 * m0 + 4.0 * M(z, t + ht) - M(z, t + 2.0 * ht)) / (2.0 * ht)
    return float(abs(dt + M.c_B * m0 * dz))


def inverse_reciprocal(M, z, t, w0=None):
    """Solve ``1/M_t(w) = z`` by Newton from ``w0 = 2z``.

    ``1/M_t(w) ~ w/2`` at height, so ``2z`` is the leading-order inverse.
    """
    z = complex(z)
    w = 2.0 * z if w0 is None else complex(w0)
    for _ in range(NEWTON_MAXIT):
        hw = 1e-6 * max(1.0, abs(w))
        f = 1.0 / M(w, t) - z
        df = (1.0 / M(w + hw, t) - 1.0 / M(w - hw, t)) / (2.0 * hw)
        w_new = w - f / df
        if not np.isfinite(w_new) or w_new.imag <= 0:
            break
        if abs(w_new - w) <= NEWTON_TOL * max(1.0, abs(w_new)):
            return w_new
        w = w_new
    raise ArithmeticError(
        f"Newton for (1/M_t)^-1 at z={z} did not converge; move z higher in the cone (larger beta)")


def voiculescu_conservation(M, z, t1, t2, cone=(1.0, 0.0)):
    """Defect of ``(1/M)^-1`` growing by exactly ``c_B (t2 - t1) / z``.

    ``cone = (alpha, beta)`` restricts ``z`` to ``Im z > beta`` and
    ``Im z > alpha |Re z|``.
    """
    z = complex(z)
    alpha, beta = cone
    if not (z.imag > beta and z.imag > alpha * abs(z.real)):
        raise ValueError(f"z={z} lies outside the cone alpha={alpha}, beta={beta}")
    if t1 == t2:
        return 0.0
    v1 = inverse_reciprocal(M, z, t1)
    v2 = inverse_reciprocal(M, z, t2)
    return float(abs(v2 - v1 - M.c_B * (t2 - t1) / z))


def rescaled(M, c):
    """``G_t(z) = c M_{c^2 t}(c z)``, again a solution when ``M`` is one."""
    return BurgersSolution(M.kind, M.c_B, lambda z, t: c * M(c * np.asarray(z), c * c * t))


def scaling_check(M, c, z, t, h=1e-4):
    """Burgers residual of the rescaled family :func:`rescaled`."""
    if c <= 0:
        raise ValueError("c must be positive")
    return burgers_residual(rescaled(M, c), z, t, h)


def long_time_profile_error(M, c, z, t):
    """``|c M_{c^2 t}(c z) - semicircle_transform(z, t)|`` for ``c_B = 2`` data."""
    return float(abs(c * M(c * complex(z), c * c * t) - semicircle_transform(complex(z), 0.5 * M.c_B * t)))
