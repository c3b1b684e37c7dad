"""Acceptance checks with closed-form oracles.

Every criterion returns a :class:`Outcome`: a list of :class:`Check` rows
(measured value, tolerance, verdict) plus the CSV text of its key numbers.
Criterion 14 re-runs the others and compares those CSV texts byte for byte.
"""
import math
import time
from typing import Callable, Dict, List, NamedTuple
from xml.etree import ElementTree

import numpy as np
from scipy.stats import chisquare

from . import burgers, drivers, dyck, figures, loewner, scenarios
from .io import csv_text
from .measures import cauchy

SEMI_T = 0.25
SEMI_DT = 1e-4


class Check(NamedTuple):
    name: str
    measured: float
    tolerance: str
    passed: bool


class Outcome(NamedTuple):
    checks: List[Check]
    artifacts: Dict[str, str]
    seconds: float = 0.0

    @property
    def passed(self):
        return all(c.passed for c in self.checks)


def _le(name, value, tol):
    return Check(name, float(value), f"<= {tol:g}", bool(value <= tol))


def _ge(name, value, tol):
    return Check(name, float(value), f">= {tol:g}", bool(value >= tol))


def _within(name, value, lo, hi):
    return Check(name, float(value), f"in [{lo:g}, {hi:g}]", bool(lo <= value <= hi))


def _flag(name, ok):
    return Check(name, float(ok), "== 1", bool(ok))


def semicircle_grid():
    x = np.linspace(-2.0, 2.0, 21)
    y = np.linspace(1.0, 2.0, 6)
    return (x[None, :] + 1j * y[:, None]).ravel()


class Context:
    """Caches the expensive shared runs (the semicircle paths)."""

    def __init__(self):
        self._semi = {}

    def semicircle(self, n):
        """Semicircle run reaching two grid steps past t = 0.25 (for time differences)."""
        if n not in self._semi:
            cfg = scenarios.builtin("semicircle", n).with_(T=SEMI_T + 2 * SEMI_DT, dt=SEMI_DT)
            t0 = time.perf_counter()
            path = drivers.simulate(cfg)
            self._semi[n] = (path, time.perf_counter() - t0)
        return self._semi[n]


def _timed(fn):
    def run(ctx):
        t0 = time.perf_counter()
        checks, artifacts = fn(ctx)
        return Outcome(checks, artifacts, time.perf_counter() - t0)
    run.__doc__ = fn.__doc__
    return run


@_timed
def c01_semicircle(ctx):
    """Semicircle limit of the simultaneous system."""
    z = semicircle_grid()
    exact = burgers.semicircle_transform(z, SEMI_T)
    errs, rows, secs = {}, [], 0.0
    for n in (400, 800):
        t0 = time.perf_counter()
        path, sim = ctx.semicircle(n)
        m = cauchy(path.empirical(path.index_of(SEMI_T)), z)
        if n == 400:
            secs = sim + time.perf_counter() - t0
        errs[n] = float(np.max(np.abs(m - exact)))
        rows += [(n, zi.real, zi.imag, mi.real, mi.imag) for zi, mi in zip(z, m)]
    checks = [
        _le("sup error N=400", errs[400], 0.05),
        _le("error ratio N=800/N=400", errs[800] / errs[400], 1.0 - 1e-12),
        _le("runtime N=400 [s]", secs, 30.0),
    ]
    return checks, {"c01_transform.csv": csv_text(("n", "re_z", "im_z", "re_m", "im_m"), rows)}


@_timed
def c02_hcap(ctx):
    """Half-plane capacity equals 2t."""
    t0 = time.perf_counter()
    checks, rows = [], []
    for name in ("semicircle", "prince_charles"):
        path = drivers.simulate(scenarios.builtin(name, 100).with_(T=0.25, dt=1e-4))
        for t in (0.1, 0.25):
            b = loewner.hcap_fit(path, t).b
            checks.append(_le(f"{name} |b-2t| t={t}", abs(b - 2 * t), 1e-3))
            rows.append((name, t, b))
    checks.append(_le("runtime [s]", time.perf_counter() - t0, 10.0))
    return checks, {"c02_hcap.csv": csv_text(("scenario", "t", "b"), rows)}


def single_slit_probes():
    x = np.array([-3.0, -1.0, -0.25, 0.5, 2.0])
    y = np.array([0.2, 0.7, 1.5, 4.0])
    return (x[None, :] + 1j * y[:, None]).ravel()


@_timed
def c03_single_slit(ctx):
    """Single slit against sqrt(z^2 + 4t)."""
    T = 1.0
    drv = loewner.constant_driving([0.0], [1.0], T, 1e-4)
    z = single_slit_probes()
    field = loewner.grid_flow(drv, z, T)
    exact = np.sqrt(z * z + 4 * T)
    exact = np.where(exact.imag < 0, -exact, exact)
    rel = float(np.max(np.abs(field.g - exact) / np.abs(exact)))
    sw = loewner.flow(drv, 1j, T).swallow_time
    sw = float("inf") if sw is None else sw
    rows = [(zi.real, zi.imag, gi.real, gi.imag) for zi, gi in zip(z, field.g)] + [(0.0, 1.0, sw, 0.0)]
    return ([_le("max relative error (20 probes)", rel, 1e-6),
             _le("|T(i) - 0.25|", abs(sw - 0.25), 1e-4)],
            {"c03_slit.csv": csv_text(("re_z", "im_z", "re_g", "im_g"), rows)})


@_timed
def c04_burgers(ctx):
    """Burgers residual of exact and simulated transforms."""
    M = burgers.BurgersSolution.semicircle()
    r1 = burgers.burgers_residual(M, 2j, SEMI_T, 1e-4)
    r2 = burgers.burgers_residual(M, 2j, SEMI_T, 5e-5)
    path, _ = ctx.semicircle(400)
    Mn = burgers.BurgersSolution.from_path(path)
    z = semicircle_grid()
    res = np.array([burgers.burgers_residual(Mn, zi, SEMI_T, 1e-4, ht=SEMI_DT) for zi in z])
    rows = [(zi.real, zi.imag, SEMI_T, r) for zi, r in zip(z, res)]
    return ([_le("exact residual h=1e-4", r1, 1e-6),
             _within("halving ratio (order 2 -> 4)", r1 / r2, 3.0, 5.0),
             _le("numerical N=400 max residual, Im z in [1,2]", res.max(), 0.05)],
            {"c04_residual.csv": csv_text(("re_z", "im_z", "t", "residual"), rows)})


@_timed
def c05_voiculescu(ctx):
    """Voiculescu transform grows by 2t/z."""
    d = burgers.voiculescu_conservation(burgers.BurgersSolution.semicircle(), 20j, 0.0, 1.0)
    return [_le("defect at z=20i, t=1", d, 1e-6)], {"c05_voiculescu.csv": csv_text(("defect",), [(d,)])}


@_timed
def c06_profile(ctx):
    """F = L o G reproduces the driver measure at t = 0."""
    checks, rows = [], []
    for name, ns in (("prince_charles", (10, 100)), ("johnny", (10, 100)), ("molly", (11, 101))):
        for n in ns:
            e = scenarios.profile_reconstruction_error(scenarios.builtin(name, n))
            checks.append(_le(f"{name} N={n}", e, 1e-12))
            rows.append((name, n, e))
    return checks, {"c06_profile.csv": csv_text(("scenario", "n", "max_weight_error"), rows)}


@_timed
def c07_johnny(ctx):
    """Heavy driver escapes like sqrt(N)."""
    t0 = time.perf_counter()
    paths = [drivers.simulate(scenarios.builtin("johnny", n).with_(T=0.5, dt=1e-3)) for n in (25, 51, 101, 201)]
    rep = scenarios.johnny_escape_diagnostic(paths, 0.5)
    rows = list(zip(rep.ns, rep.values))
    return ([_flag("V_N strictly increasing", rep.monotone),
             _ge("log-log exponent", rep.slope, 0.4),
             _le("runtime [s]", time.perf_counter() - t0, 60.0)],
            {"c07_johnny.csv": csv_text(("n", "v_heavy"), rows)})


@_timed
def c08_molly(ctx):
    """Mirror symmetry of the Molly drivers."""
    path = drivers.simulate(scenarios.builtin("molly", 51).with_(T=1.0, dt=1e-3))
    asym, centre = scenarios.molly_asymmetry(path)
    K = (path.n - 1) // 2
    rows = [(t, v) for t, v in zip(path.times[::50], path.V[::50, K])]
    return ([_le("max |V_{2K+2-k} + V_k|", asym, 1e-10), _le("max |V_{K+1}|", centre, 1e-10)],
            {"c08_molly.csv": csv_text(("t", "v_centre"), rows)})


@_timed
def c09_prince_charles(ctx):
    """T_N(0) identities and growth."""
    ns = (2, 3, 5, 10, 50, 100, 200, 500, 1000)
    rows = scenarios.prince_charles_blowup(ns)
    by_n = {r.n: r for r in rows}
    ident = max(abs(r.pair_sum - r.identity) / r.identity for r in rows)
    bound = max(abs(r.pair_sum - r.bound) / r.bound for r in rows)
    checks = [
        _le("pair sum vs sum (lam_k+lam_j)/S_N (rel)", ident, 1e-12),
        _le("pair sum vs (N^2-N)(1/N+1/N^2)/S_N^2 (rel)", bound, 1e-12),
        _within("T_1000 / T_100", by_n[1000].pair_sum / by_n[100].pair_sum, 9.0, 11.0),
        _flag("d/dt int f dmu grows with N", bool(np.all(np.diff([r.derivative for r in rows]) > 0))),
    ]
    return checks, {"c09_blowup.csv": csv_text(("n", "pair_sum", "identity", "bound", "derivative"), rows)}


@_timed
def c10_dyck(ctx):
    """Catalan counts, bijection and uniform sampling."""
    counts_ok = all(len(dyck.enumerate_paths(n)) == dyck.catalan(n) for n in range(1, 11))
    trip_ok = all(dyck.encode(dyck.decode(p)) == p for n in range(1, 9) for p in dyck.enumerate_paths(n))
    batch = dyck.sample_batch(100, 10_000, seed=2024)
    rand_ok = all(np.array_equal(dyck.encode(dyck.decode(s)).slopes, s) for s in batch)
    sample = dyck.sample_batch(4, 100_000, seed=7)
    _, freq = np.unique(sample, axis=0, return_counts=True)
    p = float(chisquare(freq).pvalue) if freq.size == dyck.catalan(4) else 0.0
    checks = [_flag("enumeration = catalan(N), N<=10", counts_ok),
              _flag("round trip, all paths N<=8", trip_ok),
              _flag("round trip, 1e4 random paths N=100", rand_ok),
              _ge("chi2 p-value N=4 (14 paths, 1e5 samples)", p, 0.001)]
    return checks, {"c10_dyck.csv": csv_text(("path", "count"), enumerate(freq))}


@_timed
def c11_excursion(ctx):
    """Mean maximum of normalized Dyck paths."""
    t0 = time.perf_counter()
    maxima = dyck.batch_max(500, 10_000, seed=11, gamma=0.5)
    target = dyck.excursion_mean_max()
    mean = float(maxima.mean())
    exact = dyck.expected_max_height(500) / math.sqrt(1000)
    return ([_within("mean max / sqrt(pi/2)", mean / target, 0.95, 1.05),
             _within("exact finite-N mean / sqrt(pi/2)", exact / target, 0.95, 1.05),
             _le("runtime [s]", time.perf_counter() - t0, 60.0)],
            {"c11_excursion.csv": csv_text(("mean_max", "exact_mean_max", "target"), [(mean, exact, target)])})


@_timed
def c12_characteristics(ctx):
    """Characteristics of the pole-free quadratic-differential system."""
    rows = scenarios.characteristics_check((1, 50, 100, 200), t=0.2)
    e = {r.n: r.defect for r in rows}
    return ([_within("e_50 / e_100", e[50] / e[100], 1.6, 2.4),
             _within("e_100 / e_200", e[100] / e[200], 1.6, 2.4),
             _le("e_1", e[1], 1e-8)],
            {"c12_characteristics.csv": csv_text(("n", "defect"), rows)})


def _svg_polylines(text):
    root = ElementTree.fromstring(text.encode())
    return [el for el in root.iter() if el.tag.endswith("polyline")]


@_timed
def c13_figures(ctx):
    """Figure runs, SVG output and the direction fields."""
    checks, art = [], {}
    for name in ("fig2", "fig3"):
        cfg = scenarios.builtin(name)
        path = drivers.simulate(cfg)
        svg = figures.driver_bundle(path, cfg.highlight_index()).render(timestamp=False)
        lines = _svg_polylines(svg)
        heavy = [el for el in lines if el.get("stroke") == figures.HIGHLIGHT]
        checks.append(_flag(f"{name} SVG: 51 polylines, 1 highlighted", len(lines) == 51 and len(heavy) == 1))
        art[f"c13_{name}_final.csv"] = csv_text(("k", "v"), enumerate(path.V[-1]))
    wins, finals = 0, []
    base = scenarios.builtin("fig2")
    for seed in range(100):
        V = drivers.simulate(base.with_(seed=seed)).V[-1]
        wins += int(V[-1] > V[:-1].max())
        finals.append((seed, V[-1], V[:-1].max()))
    checks.append(_ge("fig2 seeds with heavy driver on top (of 100)", wins, 95))
    art["c13_fig2_seeds.csv"] = csv_text(("seed", "v_heavy", "v_max_other"), finals)
    for name in ("fig7", "fig8"):
        cfg = scenarios.builtin(name)
        canvas, _ = figures.direction_field(cfg)
        ElementTree.fromstring(canvas.render(timestamp=False).encode())
        real = np.linspace(-2.5, 2.5, 201)
        real = real[np.min(np.abs(real[:, None] - np.array(cfg.roots)[None, :]), axis=1) > 1e-6]
        on_axis = scenarios.angle_error(scenarios.quad_field(cfg, real + 0j), 0.0).max()
        vertical = scenarios.angle_error(scenarios.quad_field(cfg, np.array(cfg.roots) + 1e-9j), 0.5 * np.pi).max()
        checks.append(_le(f"{name} theta on real axis", on_axis, 1e-6))
        checks.append(_le(f"{name} angle at double zeros vs vertical", vertical, 1e-6))
        art[f"c13_{name}.csv"] = csv_text(("on_axis", "vertical"), [(on_axis, vertical)])
    return checks, art


CRITERIA: Dict[int, Callable] = {
    1: c01_semicircle, 2: c02_hcap, 3: c03_single_slit, 4: c04_burgers, 5: c05_voiculescu,
    6: c06_profile, 7: c07_johnny, 8: c08_molly, 9: c09_prince_charles, 10: c10_dyck,
    11: c11_excursion, 12: c12_characteristics, 13: c13_figures,
}

TITLES = {
    1: "semicircle limit", 2: "half-plane capacity", 3: "single-slit closed form", 4: "Burgers residual",
    5: "Voiculescu conservation", 6: "F = L o G", 7: "Johnny escape", 8: "Molly symmetry",
    9: "Prince-Charles blowup", 10: "Dyck suite", 11: "excursion scaling", 12: "quad-diff characteristics",
    13: "figure regeneration", 14: "reproducibility",
}

SUITES = {
    "burgers": (1, 4, 5), "loewner": (2, 3), "measures": (6,), "scenarios": (7, 8, 9, 12),
    "dyck": (10, 11), "figures": (13,), "repro": (14,),
}


def reproducibility(first, ctx_factory=Context):
    """Re-run every criterion in ``first`` and compare its CSV artifacts byte for byte."""
    t0 = time.perf_counter()
    ctx = ctx_factory()
    checks = []
    for cid, out in sorted(first.items()):
        again = CRITERIA[cid](ctx)
        same = out.artifacts.keys() == again.artifacts.keys() and all(
            out.artifacts[k] == again.artifacts[k] for k in out.artifacts)
        checks.append(_flag(f"criterion {cid} CSV byte-identical", same))
    return Outcome(checks, {}, time.perf_counter() - t0)


def select(filter_=None):
    """Criterion ids matching a suite name, a number or a comma list of either."""
    if not filter_:
        return list(range(1, 15))
    ids = set()
    for token in filter_.split(","):
        token = token.strip()
        if token.isdigit() and 1 <= int(token) <= 14:
            ids.add(int(token))
        elif token in SUITES:
            ids.update(SUITES[token])
        else:
            raise ValueError(f"unknown suite {token!r}")
    return sorted(ids)


def run(ids, ctx=None):
    """Run the selected criteria; 14 covers whichever others were selected (all if alone)."""
    ctx = ctx or Context()
    results = {cid: CRITERIA[cid](ctx) for cid in ids if cid != 14}
    if 14 in ids:
        base = results or {cid: CRITERIA[cid](ctx) for cid in CRITERIA}
        results[14] = reproducibility(base)
    return results


def format_table(results):
    lines = []
    for cid, out in sorted(results.items()):
        lines.append(f"[{'PASS' if out.passed else 'FAIL'}] criterion {cid}: {TITLES[cid]} ({out.seconds:.1f} s)")
        for c in out.checks:
            lines.append(f"    {'ok  ' if c.passed else 'FAIL'} {c.name}: {c.measured:.6g} (want {c.tolerance})")
    return "\n".join(lines)
