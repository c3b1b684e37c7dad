"""Pure-numpy versions of the kernels in :mod:`loewnerlab.kernels._numba`.

Pairwise sums are vectorized over the driver axis; the per-probe ODE loops
stay in Python because each probe chooses its own step sizes.
"""
import numpy as np


def _pair_inverse(V):
    diff = V[:, None] - V[None, :]
    np.fill_diagonal(diff, np.inf)
    return 1.0 / diff


def drift_sle(V, lam):
    inv = _pair_inverse(V)
    a = 2.0 * (lam[:, None] + lam[None, :])
    drift = (a * inv).sum(axis=1)
    rho = 2.0 * (a * inv * inv).sum(axis=1).max(initial=0.0)
    return drift, float(rho)


def drift_quad(V, lam, S, alpha):
    inv = _pair_inverse(V)
    coef = 2.0 * lam[None, :]
    drift = (coef * inv).sum(axis=1)
    row = 2.0 * (coef * inv * inv).sum(axis=1)
    if S.shape[0]:
        w = 1.0 / (V[:, None] - S[None, :])
        drift = drift + 2.0 * lam * (alpha[None, :] * w.real).sum(axis=1)
        row = row + 4.0 * lam * (np.abs(alpha)[None, :] * np.abs(w) ** 2).sum(axis=1)
        srow = 2.0 * (2.0 * lam[None, :] / np.abs(S[:, None] - V[None, :]) ** 2).sum(axis=1)
        rho = max(row.max(initial=0.0), srow.max(initial=0.0))
    else:
        rho = row.max(initial=0.0)
    return drift, float(rho)


def pole_velocity(S, V, lam):
    if not S.shape[0]:
        return np.zeros(0, dtype=np.complex128)
    return (2.0 * lam[None, :] / (S[:, None] - V[None, :])).sum(axis=1)


def cauchy(positions, weights, z, chunk=4096):
    out = np.empty(z.shape[0], dtype=np.complex128)
    for a in range(0, z.shape[0], chunk):
        zz = z[a:a + chunk]
        out[a:a + chunk] = (2.0 * weights[None, :] / (zz[:, None] - positions[None, :])).sum(axis=1)
    return out


def _field(g, V, lam):
    w = g - V
    return complex((2.0 * lam / w).sum()), float((2.0 * lam / (w.real ** 2 + w.imag ** 2)).sum())


def loewner_flow(times, Vgrid, lam, z0, t_end, eta, swallow_tol):
    n_probe = z0.shape[0]
    n_t = times.shape[0]
    traj = np.full((n_probe, n_t), np.nan + 1j * np.nan)
    g_end = np.zeros(n_probe, dtype=np.complex128)
    t_sw = np.full(n_probe, np.nan)
    for p in range(n_probe):
        g = complex(z0[p])
        traj[p, 0] = g
        dead = False
        for i in range(n_t - 1):
            ta = times[i]
            if ta >= t_end:
                break
            tb = min(times[i + 1], t_end)
            span = times[i + 1] - ta
            Va, dV = Vgrid[i], Vgrid[i + 1] - Vgrid[i]
            s = ta
            while s < tb and not dead:
                f1, lip = _field(g, Va + (s - ta) / span * dV, lam)
                h = tb - s
                if lip * h > eta:
                    h = eta / lip
                while True:
                    Vm = Va + (s + 0.5 * h - ta) / span * dV
                    f2, _ = _field(g + 0.5 * h * f1, Vm, lam)
                    f3, _ = _field(g + 0.5 * h * f2, Vm, lam)
                    f4, _ = _field(g + h * f3, Va + (s + h - ta) / span * dV, lam)
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


def reverse_flow(times, Vgrid, lam, h0, t, eta):
    n_probe = h0.shape[0]
    h_end = np.zeros(n_probe, dtype=np.complex128)
    ok = np.ones(n_probe, dtype=bool)
    i_top = 0
    while i_top < times.shape[0] - 1 and times[i_top + 1] < t:
        i_top += 1
    for p in range(n_probe):
        h_val = complex(h0[p])
        for i in range(i_top, -1, -1):
            ta = times[i]
            tb = min(times[i + 1], t)
            span = times[i + 1] - ta
            Va, dV = Vgrid[i], Vgrid[i + 1] - Vgrid[i]
            u = tb
            while u > ta:
                f1, lip = _field(h_val, Va + (u - ta) / span * dV, lam)
                step = u - ta
                if lip * step > eta:
                    step = eta / lip
                Vm = Va + (u - 0.5 * step - ta) / span * dV
                f2, _ = _field(h_val - 0.5 * step * f1, Vm, lam)
                f3, _ = _field(h_val - 0.5 * step * f2, Vm, lam)
                f4, _ = _field(h_val - step * f3, Va + (u - step - ta) / span * dV, lam)
                h_val = h_val - step / 6.0 * (f1 + 2.0 * f2 + 2.0 * f3 + f4)
                u = u - step if u - ta > step else ta
                if h_val.imag <= 0.0:
                    ok[p] = False
                    break
            if not ok[p]:
                break
        h_end[p] = h_val
    return h_end, ok
