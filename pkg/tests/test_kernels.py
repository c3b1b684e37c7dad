"""The numba and numpy kernels must agree."""
import numpy as np
import pytest

from loewnerlab import _backend, kernels
from loewnerlab.kernels import _numba, _numpy

rng = np.random.default_rng(42)
V = np.sort(rng.normal(size=30))
LAM = rng.dirichlet(np.ones(30))
S = rng.normal(size=4) + 1j * rng.uniform(0.2, 2.0, size=4)
ALPHA = np.array([2.0, -3.0, 1.0, 4.0])


def test_drift_sle_parity():
    a, ra = _numba.drift_sle(V, LAM)
    b, rb = _numpy.drift_sle(V, LAM)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12) and ra == pytest.approx(rb, rel=1e-12)


def test_drift_quad_parity():
    a, ra = _numba.drift_quad(V, LAM, S, ALPHA)
    b, rb = _numpy.drift_quad(V, LAM, S, ALPHA)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12) and ra == pytest.approx(rb, rel=1e-12)
    a, ra = _numba.drift_quad(V, LAM, S[:0], ALPHA[:0])
    b, rb = _numpy.drift_quad(V, LAM, S[:0], ALPHA[:0])
    assert np.allclose(a, b) and ra == pytest.approx(rb)


def test_pole_velocity_and_cauchy_parity():
    assert np.allclose(_numba.pole_velocity(S, V, LAM), _numpy.pole_velocity(S, V, LAM))
    z = rng.normal(size=50) + 1j * rng.uniform(0.1, 3, size=50)
    assert np.allclose(_numba.cauchy(V, LAM, z), _numpy.cauchy(V, LAM, z), rtol=1e-13)


def _driving():
    times = np.linspace(0, 0.3, 31)
    Vg = V[None, :5] + np.sqrt(times)[:, None] * np.array([-1, -0.5, 0, 0.5, 1])
    lam = np.full(5, 0.2)
    return times, Vg, lam


def test_flow_parity():
    times, Vg, lam = _driving()
    z = np.array([0.3 + 0.05j, -1 + 1j, 2 + 0.4j, 0.0 + 3j])
    a = _numba.loewner_flow(times, Vg, lam, z, 0.3, 0.02, 1e-6)
    b = _numpy.loewner_flow(times, Vg, lam, z, 0.3, 0.02, 1e-6)
    assert np.allclose(a[1], b[1], rtol=1e-12)
    assert np.array_equal(np.isnan(a[2]), np.isnan(b[2]))
    assert np.allclose(a[0], b[0], equal_nan=True)


def test_reverse_flow_parity():
    times, Vg, lam = _driving()
    h0 = np.array([Vg[-1, 2] + 1e-4j, 0.5 + 1j])
    a = _numba.reverse_flow(times, Vg, lam, h0, 0.3, 0.005)
    b = _numpy.reverse_flow(times, Vg, lam, h0, 0.3, 0.005)
    assert np.allclose(a[0], b[0], rtol=1e-12) and np.array_equal(a[1], b[1])


def test_backend_flag(monkeypatch):
    monkeypatch.setenv(_backend.ENV_FLAG, "numpy")
    assert _backend.requested_backend() == "numpy"
    monkeypatch.setenv(_backend.ENV_FLAG, "fortran")
    with pytest.raises(ValueError):
        _backend.requested_backend()
    assert kernels.BACKEND in ("numba", "numpy")


def test_numpy_backend_end_to_end(monkeypatch):
    import json, os, subprocess, sys
    from loewnerlab import drivers, scenarios

    code = ("import json; from loewnerlab import drivers, scenarios, kernels;"
            "p = drivers.simulate(scenarios.builtin('fig2', 6).with_(T=0.05, seed=4));"
            "print(json.dumps([kernels.BACKEND, p.V[-1].tolist()]))")
    env = dict(os.environ, LOEWNERLAB_BACKEND="numpy")
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, last = json.loads(res.stdout)
    assert backend == "numpy"
    here = drivers.simulate(scenarios.builtin("fig2", 6).with_(T=0.05, seed=4))
    assert np.allclose(last, here.V[-1], rtol=0, atol=1e-10)
