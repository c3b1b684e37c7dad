"""Randomized invariants."""
import numpy as np
from hypothesis import given, settings, strategies as st

from loewnerlab import dyck, scenarios
from loewnerlab.measures import AtomicMeasure, cauchy, wasserstein1

sizes = st.integers(min_value=1, max_value=40)
seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


@settings(max_examples=50, deadline=None)
@given(sizes, seeds)
def test_sampled_paths_round_trip(n, seed):
    p = dyck.sample_uniform(n, seed)
    assert dyck.encode(dyck.decode(p)) == p


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=8, unique=True), st.floats(0.1, 3), st.floats(-3, 3))
def test_cauchy_maps_to_lower_half_plane(xs, y, x):
    m = AtomicMeasure.uniform(np.sort(xs))
    assert cauchy(m, x + 1j * y).imag < 0


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=2, max_size=8, unique=True), st.floats(-2, 2))
def test_wasserstein_translation(xs, shift):
    m = AtomicMeasure.uniform(np.sort(xs))
    moved = AtomicMeasure.uniform(np.sort(xs) + shift)
    assert abs(wasserstein1(m, moved) - abs(shift)) < 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=20))
def test_field_angle_in_range(n):
    cfg = scenarios.builtin("quad_uniform", n)
    theta = scenarios.quad_field(cfg, scenarios.field_grid(12, 6))
    assert np.all((theta >= 0) & (theta < np.pi))
