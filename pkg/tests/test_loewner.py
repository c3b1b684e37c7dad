import numpy as np
import pytest

from loewnerlab import drivers, loewner, scenarios
from loewnerlab.loewner import constant_driving, flow, grid_flow, hcap_fit, trace

SLIT = constant_driving([0.0], [1.0], 1.0, 1e-3)


def _exact(z, t):
    r = np.sqrt(z * z + 4 * t)
    return np.where(r.imag < 0, -r, r)


def test_single_slit_flow():
    p = flow(SLIT, 1 + 1j, 0.5)
    assert p.g_end == pytest.approx(complex(_exact(1 + 1j, 0.5)), rel=1e-10)
    assert p.status == "alive" and p.trajectory[0] == 1 + 1j
    assert flow(SLIT, 1 + 1j, 0.0).g_end == 1 + 1j


def test_swallow_time_of_i():
    p = flow(SLIT, 1j, 1.0)
    assert p.status == "swallowed"
    assert p.swallow_time == pytest.approx(0.25, abs=1e-6)
    assert np.isnan(p.trajectory[-1])


def test_swallow_time_monotone_in_height():
    times = [flow(SLIT, 1j * y, 1.0).swallow_time for y in (0.5, 1.0, 1.5, 1.9)]
    assert all(np.diff(times) > 0)


def test_imaginary_part_nonincreasing():
    p = flow(SLIT, 0.3 + 2j, 1.0)
    assert np.all(np.diff(p.trajectory.imag) <= 1e-15)


def test_grid_flow_row():
    z = np.linspace(-3, 3, 13) + 2j
    f = grid_flow(SLIT, z, 0.7)
    assert np.max(np.abs(f.g - _exact(z, 0.7))) <= 1e-8
    same = grid_flow(SLIT, z, 0.0)
    assert np.array_equal(same.g, z)


def test_hcap():
    assert hcap_fit(SLIT, 0.0).b == 0.0
    assert hcap_fit(SLIT, 1.0).b == pytest.approx(2.0, abs=1e-6)
    path = drivers.simulate(scenarios.builtin("johnny", 11).with_(T=0.3, dt=1e-3))
    bs = [hcap_fit(path, t).b for t in (0.1, 0.2, 0.3)]
    assert np.allclose(bs, [0.2, 0.4, 0.6], atol=1e-3)


def test_hydrodynamic_remainder_stable():
    path = drivers.simulate(scenarios.builtin("prince_charles", 10).with_(T=0.2, dt=1e-3))
    consts = []
    for R in (20.0, 40.0, 80.0):
        z = R * np.exp(1j * np.linspace(0.2, np.pi - 0.2, 7))
        g = grid_flow(path, z, 0.2).g
        consts.append(np.max(np.abs(g - z - 0.4 / z)) * R * R)
    assert max(consts) / min(consts) < 1.5


def test_trace_single_slit():
    assert trace(SLIT, 0, 1.0) == pytest.approx(2j, abs=1e-6)
    assert trace(SLIT, 0, 0.0) == pytest.approx(0.0, abs=2e-4)


def test_trace_two_body_mirror():
    cfg = scenarios.ScenarioConfig("pair", "custom", 2, positions=[-1.0, 1.0], weights=[0.5, 0.5], T=0.5, dt=1e-3)
    path = drivers.simulate(cfg)
    a, b = trace(path, 0, 0.5), trace(path, 1, 0.5)
    assert abs(a + b.conjugate()) <= 1e-8
    assert a.imag > 0.5


def test_probes_above_one_survive_noisy_run():
    path = drivers.simulate(scenarios.builtin("fig2").with_(seed=3))
    z = np.linspace(-3, 4, 15)[None, :] + 1j * np.array([1.0, 2.0])[:, None]
    assert np.all(grid_flow(path, z, 1.0).alive)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        flow(SLIT, 1.0 - 1j, 0.5)
    with pytest.raises(ValueError):
        flow(SLIT, 1j, 2.0)
