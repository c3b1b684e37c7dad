import numpy as np
import pytest

from loewnerlab import drivers, scenarios
from loewnerlab.drivers import (
    BrownianStep, DriverSystem, OrderViolation, counter_gaussians, drift_multiple_sle, drift_quad_diff, step,
)


def test_drift_multiple_sle_examples():
    assert np.allclose(drift_multiple_sle([-1, 1], [0.5, 0.5]), [-1, 1])
    assert drift_multiple_sle([0.3], [1.0]).tolist() == [0.0]
    assert np.allclose(drift_multiple_sle([-1, 0, 1], [1 / 3] * 3), [-2, 0, 2])
    with pytest.raises(OrderViolation):
        drift_multiple_sle([0.0, 1e-12], [0.5, 0.5])


def test_drift_quad_examples():
    none = np.zeros(0, dtype=complex)
    assert np.allclose(drift_quad_diff([-1, 1], [0.5, 0.5], none, np.zeros(0)), [-0.5, 0.5])
    assert drift_quad_diff([0.0], [1.0], [1j], [2]) == pytest.approx([0.0])
    assert drift_quad_diff([1.0], [1.0], [1j], [2]) == pytest.approx([2.0])
    with pytest.raises(ValueError):
        drift_quad_diff([0.0], [1.0], [-1j], [2])


def test_step_examples():
    s = DriverSystem("multiple_sle", [0.0], [1.0])
    assert step(s, 0.3).V.tolist() == [0.0]
    two = step(DriverSystem("multiple_sle", [-1.0, 1.0], [0.5, 0.5]), 0.01, scheme="euler")
    assert np.allclose(two.V, [-1.01, 1.01], atol=1e-4)
    q = DriverSystem("quad_diff", [0.0], [1.0], S=[1j], alpha=[0])
    dt = 1e-4
    moved = step(q, dt)
    assert moved.S[0] - 1j == pytest.approx(-2j * dt, rel=1e-3)
    assert moved.t == dt


def test_system_validation():
    with pytest.raises(ValueError):
        DriverSystem("multiple_sle", [1.0, 0.0], [0.5, 0.5])
    with pytest.raises(ValueError):
        DriverSystem("multiple_sle", [0.0, 1.0], [0.5, 0.6])
    with pytest.raises(ValueError):
        DriverSystem("multiple_sle", [0.0], [1.0], kappa=5.0)
    with pytest.raises(ValueError):
        DriverSystem("simultaneous", [0.0, 1.0], [0.3, 0.7])
    assert DriverSystem("quad_diff", [0.0], [1.0], kappa=2.0).kappa == 0.0


def test_counter_gaussians_are_keyed_and_normal():
    a = counter_gaussians(5, 3, 2, 1, 4)
    assert np.array_equal(a, counter_gaussians(5, 3, 2, 1, 4))
    assert not np.array_equal(a, counter_gaussians(6, 3, 2, 1, 4))
    z = counter_gaussians(1, 0, 0, 0, 200_000)
    assert abs(z.mean()) < 0.01 and abs(z.std() - 1) < 0.01


def test_brownian_tree_consistency():
    b = BrownianStep.keyed(0.5, 3, seed=9, step=2)
    # increments over a level-2 partition add up to the root increment
    total = sum(b.increment(i << (drivers.MAX_LEVEL - 2), 2) for i in range(4))
    assert np.allclose(total, b.at(0, 1))
    # the bridge variance at the midpoint is dt/4
    mids = np.array([BrownianStep(1.0, np.zeros(1), seed=s, step=0).at(1, 1)[0] for s in range(4000)])
    assert mids.var() == pytest.approx(0.25, rel=0.1)


def _simulate(**kw):
    cfg = scenarios.ScenarioConfig("t", "custom", len(kw["positions"]), **kw)
    return drivers.simulate(cfg)


def test_two_body_exact():
    p = _simulate(positions=[-1.0, 1.0], weights=[0.5, 0.5], T=1.0, dt=1e-4)
    assert np.max(np.abs(p.V[:, 1] - np.sqrt(1 + 2 * p.times))) <= 1e-6
    assert p.times[0] == 0 and p.V[0].tolist() == [-1.0, 1.0]


def test_single_driver_constant():
    p = _simulate(positions=[0.0], weights=[1.0], T=1.0, dt=1e-2)
    assert np.all(p.V == 0)


def test_scaling_consistency():
    x = np.array([-1.0, -0.2, 0.5, 1.3])
    lam = np.array([0.1, 0.4, 0.3, 0.2])
    c = 2.0
    a = _simulate(positions=x, weights=lam, T=0.5, dt=1e-3)
    b = _simulate(positions=c * x, weights=lam, T=0.5 * c * c, dt=1e-3 * c * c)
    assert np.max(np.abs(b.V - c * a.V)) <= 1e-8


def test_order_and_determinism_with_noise():
    cfg = scenarios.builtin("fig2").with_(T=0.2, seed=4)
    a, b = drivers.simulate(cfg), drivers.simulate(cfg)
    assert np.array_equal(a.V, b.V)
    assert np.all(np.diff(a.V, axis=1) > 0)
    c = drivers.simulate(cfg.with_(seed=5))
    assert not np.array_equal(a.V, c.V)


def test_noise_path_independent_of_scheme_refinement():
    # the same seed gives the same Brownian path, so Euler and RK4 runs stay close
    cfg = scenarios.ScenarioConfig("t", "uniform", 5, kappa=2.0, T=0.1, dt=1e-3, seed=3)
    a = drivers.simulate(cfg)
    b = drivers.simulate(cfg.with_(scheme="euler"))
    assert np.max(np.abs(a.V - b.V)) < 0.05


def test_molly_symmetry_and_centre():
    p = drivers.simulate(scenarios.builtin("molly", 21).with_(T=0.3))
    assert np.max(np.abs(p.V + p.V[:, ::-1])) <= 1e-10
    assert np.max(np.abs(p.V[:, 10])) <= 1e-10


def test_order_violation_surfaces():
    sys_ = DriverSystem("multiple_sle", [0.0, 1e-9 * 1.5], [0.5, 0.5], kappa=4.0)
    with pytest.raises(OrderViolation):
        step(sys_, 1.0, noise=np.array([50.0, -50.0]))


def test_simulate_rejects_misaligned_horizon():
    with pytest.raises(ValueError):
        _simulate(positions=[0.0], weights=[1.0], T=1.0, dt=0.3)


def test_quad_path_keeps_poles_in_upper_half_plane():
    p = drivers.simulate(scenarios.builtin("fig8").with_(T=0.1, dt=1e-3))
    assert p.S.shape == (101, 1)
    assert np.all(p.S.imag > 0)
    assert np.all(np.diff(p.S[:, 0].imag) < 0)


def test_path_helpers():
    p = _simulate(positions=[-1.0, 1.0], weights=[0.25, 0.75], T=0.1, dt=1e-2)
    assert p.measure(3).weights.tolist() == [0.25, 0.75]
    assert p.empirical(3).weights.tolist() == [0.5, 0.5]
    assert np.allclose(p.state_at(0.015), 0.5 * (p.V[1] + p.V[2]))
    with pytest.raises(ValueError):
        p.index_of(0.0151)
