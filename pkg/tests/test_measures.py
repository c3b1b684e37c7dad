import numpy as np
import pytest
from scipy.stats import wasserstein_distance

from loewnerlab.measures import (
    AtomicMeasure, WeightProfile, cauchy, cdf, check_assumptions, compose_profile, condition_a_trend,
    loewner_test_function, mckean_residual, SmoothFunction, stieltjes_invert, wasserstein1,
)
from loewnerlab.burgers import semicircle_transform
from loewnerlab.scenarios import johnny_data, prince_charles_data


def test_cdf_examples():
    d0 = AtomicMeasure.dirac(0.0)
    assert cdf(d0, -1.0) == 0.0
    assert cdf(d0, 0.0) == 1.0
    assert cdf(AtomicMeasure([-1, 1], [0.5, 0.5]), 0.0) == 0.5


def test_atoms_are_sorted_and_merged():
    m = AtomicMeasure([1.0, 0.0, 1.0 + 1e-16], [0.25, 0.5, 0.25])
    assert m.positions.tolist() == [0.0, 1.0]
    assert m.weights.tolist() == [0.5, 0.5]
    with pytest.raises(ValueError):
        AtomicMeasure([0.0, 1.0], [0.5, 0.6])


def test_scaled_records_mass():
    m = AtomicMeasure.dirac().scaled(3.0)
    assert m.total_mass == 3.0


def test_compose_identity_and_square():
    m = AtomicMeasure([0.0, 1.0], [0.5, 0.5])
    assert np.array_equal(compose_profile(WeightProfile.identity(), m).weights, m.weights)
    sq = compose_profile(WeightProfile.from_function(lambda u: u * u, 64), m)
    assert np.allclose(sq.weights, [0.25, 0.75], atol=1e-4)
    exact = compose_profile(WeightProfile(np.array([0, 0.5, 1.0]), np.array([0, 0.25, 1.0])), m)
    assert exact.weights.tolist() == [0.25, 0.75]


def test_compose_reconstructs_prince_charles():
    x, lam = prince_charles_data(20)
    rebuilt = compose_profile(WeightProfile.from_lambdas(lam), AtomicMeasure.uniform(x))
    assert np.max(np.abs(rebuilt.weights - lam)) <= 1e-12


def test_prince_charles_profile_converges():
    L = lambda u: 2.0 / 3.0 * (u + u * u / 2.0)
    for n in (10, 100, 1000):
        _, lam = prince_charles_data(n)
        assert WeightProfile.from_lambdas(lam).sup_distance(L) <= 2.0 / n


def test_cdf_of_composition_is_l_of_cdf():
    rng = np.random.default_rng(0)
    m = AtomicMeasure(np.sort(rng.normal(size=12)), np.full(12, 1 / 12))
    L = WeightProfile.from_function(np.sqrt, 50)
    c = compose_profile(L, m)
    assert np.allclose(cdf(c, m.positions), L(cdf(m, m.positions)), atol=1e-15)


def test_cauchy_examples():
    assert cauchy(AtomicMeasure.dirac(), 1j) == pytest.approx(-2j)
    assert cauchy(AtomicMeasure([-1, 1], [0.5, 0.5]), 2j) == pytest.approx(-0.8j)
    y = 1e6
    assert abs(cauchy(AtomicMeasure.dirac(), 1j * y)) * y == pytest.approx(2.0)
    with pytest.raises(ValueError):
        cauchy(AtomicMeasure.dirac(), 1.0 + 0j)


def test_cauchy_imaginary_part_negative():
    m = AtomicMeasure([-2.0, 0.3, 5.0], [0.2, 0.5, 0.3])
    z = np.array([0.1 + 1e-3j, -4 + 2j, 10 + 0.5j])
    assert np.all(cauchy(m, z).imag < 0)


def test_stieltjes_inversion():
    rho = stieltjes_invert(lambda z: semicircle_transform(z, 1.0), np.array([0.0]), 1e-8)
    assert rho[0] == pytest.approx(1 / (2 * np.pi), rel=1e-6)
    peak = stieltjes_invert(lambda z: cauchy(AtomicMeasure.dirac(), z), np.array([0.0]), 0.1)
    assert peak[0] == pytest.approx(1 / (0.1 * np.pi))
    out = stieltjes_invert(lambda z: semicircle_transform(z, 1.0), np.array([4.5, -5.0]), 1e-8)
    assert np.all(np.abs(out) < 1e-6)


def test_wasserstein_examples_and_scipy():
    assert wasserstein1(AtomicMeasure.dirac(0), AtomicMeasure.dirac(1)) == 1.0
    m = AtomicMeasure([0, 2], [0.5, 0.5])
    assert wasserstein1(m, m) == 0.0
    assert wasserstein1(m, AtomicMeasure.dirac(1)) == 1.0
    rng = np.random.default_rng(3)
    a = AtomicMeasure(rng.normal(size=9), np.full(9, 1 / 9))
    b = AtomicMeasure(rng.normal(size=5), rng.dirichlet(np.ones(5)))
    ref = wasserstein_distance(a.positions, b.positions, a.weights, b.weights)
    assert wasserstein1(a, b) == pytest.approx(ref, abs=1e-12)


def test_check_assumptions():
    r = check_assumptions(np.full(7, 1 / 7), np.linspace(0, 1, 7))
    assert r.c_estimate == pytest.approx(1.0)
    assert r.phi_moment <= np.sqrt(2)
    reports = [check_assumptions(*johnny_data(n)[::-1]) for n in (10, 20, 40, 80)]
    assert reports[0].c_estimate == 5.0
    slope, bounded = condition_a_trend(reports)
    assert slope == pytest.approx(1.0) and not bounded
    pc = [check_assumptions(*prince_charles_data(n)[::-1]) for n in (10, 100, 1000)]
    assert pc[-1].c_estimate == pytest.approx(4 / 3, rel=1e-2)
    assert condition_a_trend(pc)[1]


def test_mckean_constant_paths_and_single_particle():
    mu = [AtomicMeasure([-1.0, 1.0], [0.5, 0.5])] * 3
    fn = loewner_test_function(1j)
    times = np.array([0.0, 0.1, 0.2])
    res = mckean_residual(times, mu, mu, fn, 0.1)
    from loewnerlab.measures import _difference_quotient_integral
    assert res == pytest.approx(abs(_difference_quotient_integral(mu[0], mu[0], fn)))
    single = [AtomicMeasure.dirac(0.0)] * 3
    cube = SmoothFunction(lambda x: np.sin(x) ** 3, lambda x: 3 * np.sin(x) ** 2 * np.cos(x),
                          lambda x: 6 * np.sin(x) * np.cos(x) ** 2 - 3 * np.sin(x) ** 3)
    assert mckean_residual(times, single, single, cube, 0.1) == 0.0
