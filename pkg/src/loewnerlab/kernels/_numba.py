"""Loop kernels compiled with numba (``@njit``).

These mirror :mod:`loewnerlab.kernels._numpy` one-for-one; the pair is
checked against each other in ``tests/test_kernels.py``.
"""
import numpy as np

from .._backend import njit


@njit
def drift_sle(V, lam):
    n = V.shape[0]
    drift = np.zeros(n)
    row = np.zeros(n)
    for k in range(n):
        for j in range(k + 1, n):
            inv = 1.0 / (V[k] - V[j])
            a = 2.0 * (lam[k] + lam[j])
            drift[k] += a * inv
            drift[j] -= a * inv
            s = a * inv * inv
            row[k] += s
            row[j] += s
    rho = 0.0
    for k in range(n):
        if 2.0 * row[k] > rho:
            rho = 2.0 * row[k]
    return drift, rho


@njit
def drift_quad(V, lam, S, alpha):
    n = V.shape[0]
    m = S.shape[0]
    drift = np.zeros(n)
    row = np.zeros(n)
    for k in range(n):
        for j in range(k + 1, n):
            inv = 1.0 / (V[k] - V[j])
            drift[k] += 2.0 * lam[j] * inv
            drift[j] -= 2.0 * lam[k] * inv
            row[k] += 2.0 * lam[j] * inv * inv
            row[j] += 2.0 * lam[k] * inv * inv
    rho = 0.0
    for k in range(n):
        pole_row = 0.0
        for j in range(m):
            w = 1.0 / (V[k] - S[j])
            drift[k] += 2.0 * alpha[j] * lam[k] * w.real
            pole_row += abs(alpha[j]) * lam[k] * (w.real * w.real + w.imag * w.imag)
        r = 2.0 * row[k] + 4.0 * pole_row
        if r > rho:
            rho = r
    for j in range(m):
        r = 0.0
        for k in range(n):
            w = S[j] - V[k]
            r += 2.0 * lam[k] / (w.real * w.real + w.imag * w.imag)
        if 2.0 * r > rho:
            rho = 2.0 * r
    return drift, rho


@njit
def pole_velocity(S, V, lam):
    m = S.shape[0]
    out = np.zeros(m, dtype=np.complex128)
    for j in range(m):
        acc = 0.0 + 0.0j
        for k in range(V.shape[0]):
            acc += 2.0 * lam[k] / (S[j] - V[k])
        out[j] = acc
    return out


@njit
def cauchy(positions, weights, z):
    out = np.zeros(z.shape[0], dtype=np.complex128)
    for p in range(z.shape[0]):
        acc = 0.0 + 0.0j
        for k in range(positions.shape[0]):
            acc += 2.0 * weights[k] / (z[p] - positions[k])
        out[p] = acc
    return out


@njit
def _field(g, V, lam):
    acc = 0.0 + 0.0j
    lip = 0.0
    for k in range(V.shape[0]):
        w = g - V[k]
        inv = 1.0 / w
        acc += 2.0 * lam[k] * inv
        lip += 2.0 * lam[k] / (w.real * w.real + w.imag * w.imag)
    return acc, lip


@njit
def _interp_row(Va, Vb, frac, out):
    for k in range(Va.shape[0]):
        out[k] = Va[k] + frac * (Vb[k] - Va[k])


@njit
def loewner_flow(times, Vgrid, lam, z0, t_end, eta, swallow_tol):
    """Forward RK4 flow of every probe in ``z0`` up to ``t_end``.

    Returns ``(traj, g_end, t_swallow)``; ``traj[p, i]`` is g at grid time
    ``times[i]`` (nan after swallowing), ``t_swallow`` is nan for survivors.
    """
    n_probe = z0.shape[0]
    n_t = times.shape[0]
    n_drv = Vgrid.shape[1]
    traj = np.full((n_probe, n_t), np.nan + 1j * np.nan)
    g_end = np.zeros(n_probe, dtype=np.complex128)
    t_sw = np.full(n_probe, np.nan)
    Vs = np.empty(n_drv)
    for p in range(n_probe):
        g = z0[p]
        traj[p, 0] = g
        dead = False
        for i in range(n_t - 1):
            ta = times[i]
            if ta >= t_end:
                break
            tb = min(times[i + 1], t_end)
            span = times[i + 1] - ta
            s = ta
            while s < tb and not dead:
                _interp_row(Vgrid[i], Vgrid[i + 1], (s - ta) / span, Vs)
                f1, lip = _field(g, Vs, lam)
                h = tb - s
                if lip * h > eta:
                    h = eta / lip
                while True:
                    _interp_row(Vgrid[i], Vgrid[i + 1], (s + 0.5 * h - ta) / span, Vs)
                    f2, _ = _field(g + 0.5 * h * f1, Vs, lam)
                    f3, _ = _field(g + 0.5 * h * f2, Vs, lam)
                    _interp_row(Vgrid[i], Vgrid[i + 1], (s + h - ta) / span, Vs)
                    f4, _ = _field(g + h * f3, Vs, lam)
                    g_new = g + h / 6.0 * (f1 + 2.0 * f2 + 2.0 * f3 + f4)
                    if g_new.imag > 0.0 or h < 1e-300:
                        break
                    h *= 0.5
                g = g_new
                s = s + h if tb - s > h else tb
                if g.imag < swallow_tol:
                    dead = True
                    t_sw[p] = s
            if dead:
                break
            if tb == times[i + 1]:
                traj[p, i + 1] = g
        g_end[p] = g
    return traj, g_end, t_sw


@njit
def reverse_flow(times, Vgrid, lam, h0, t, eta):
    """Integrate dh/ds = -sum 2 lam_j / (h - V_j(t - s)) for s in [0, t].

    Returns ``(h_end, ok)``; ``ok[p]`` is False if probe p left the
    upper half-plane.
    """
    n_probe = h0.shape[0]
    n_drv = Vgrid.shape[1]
    h_end = np.zeros(n_probe, dtype=np.complex128)
    ok = np.ones(n_probe, dtype=np.bool_)
    Vs = np.empty(n_drv)
    i_top = 0
    while i_top < times.shape[0] - 1 and times[i_top + 1] < t:
        i_top += 1
    for p in range(n_probe):
        h_val = h0[p]
        for i in range(i_top, -1, -1):
            ta = times[i]
            tb = min(times[i + 1], t)
            span = times[i + 1] - ta
            # physical time u runs from tb down to ta
            u = tb
            while u > ta:
                _interp_row(Vgrid[i], Vgrid[i + 1], (u - ta) / span, Vs)
                f1, lip = _field(h_val, Vs, lam)
                step = u - ta
                if lip * step > eta:
                    step = eta / lip
                _interp_row(Vgrid[i], Vgrid[i + 1], (u - 0.5 * step - ta) / span, Vs)
                f2, _ = _field(h_val - 0.5 * step * f1, Vs, lam)
                f3, _ = _field(h_val - 0.5 * step * f2, Vs, lam)
                _interp_row(Vgrid[i], Vgrid[i + 1], (u - step - ta) / span, Vs)
                f4, _ = _field(h_val - step * f3, Vs, lam)
                h_val = h_val - step / 6.0 * (f1 + 2.0 * f2 + 2.0 * f3 + f4)
                u = u - step if u - ta > step else ta
                if h_val.imag <= 0.0:
                    ok[p] = False
                    break
            if not ok[p]:
                break
        h_end[p] = h_val
    return h_end, ok
