import json

import numpy as np
import pytest

from loewnerlab import drivers, scenarios
from loewnerlab.scenarios import (
    QuadDiffConfig, ScenarioConfig, angle_error, builtin, molly_data, prince_charles_blowup, quad_field,
)


def test_prince_charles_data():
    x, lam = scenarios.prince_charles_data(4)
    assert np.allclose(x, [1 / 16, 2 / 16, 3 / 16, 4 / 16])
    assert lam.sum() == pytest.approx(1.0)
    assert np.all(np.diff(lam) > 0)


def test_johnny_data():
    x, lam = scenarios.johnny_data(5)
    assert x.tolist() == [0.2, 0.4, 0.6, 0.8, 2.0]
    assert lam[-1] == 0.5 and lam.sum() == pytest.approx(1.0)


def test_molly_data_mirror_exact():
    x, lam = molly_data(11)
    assert np.array_equal(x, -x[::-1]) and x[5] == 0.0
    assert lam[5] == 0.5 and lam.sum() == pytest.approx(1.0)
    assert x.min() > -2 and x[4] < -1
    with pytest.raises(ValueError):
        molly_data(10)


def test_builtins_resolve():
    for name in scenarios.BUILTINS:
        cfg = builtin(name, 11 if name in ("prince_charles", "johnny", "molly", "semicircle", "fig2", "fig3",
                                          "quad_uniform") else None)
        lam = cfg.resolve()["lambdas"]
        assert lam.sum() == pytest.approx(1.0)
    with pytest.raises(ValueError):
        builtin("nope")


def test_highlight_indices():
    assert builtin("fig2").highlight_index() == 50
    assert builtin("fig3").highlight_index() == 25


def test_json_round_trip(tmp_path):
    for cfg in (builtin("johnny", 7), builtin("fig7"),
                ScenarioConfig("custom", "custom", 3, positions=[0.0, 1.0, 2.5], weights=[0.2, 0.3, 0.5])):
        f = tmp_path / "cfg.json"
        scenarios.save(cfg, f)
        back = scenarios.load(f)
        assert back == cfg
        assert json.loads(f.read_text())["name"] == cfg.name


def test_config_validation():
    with pytest.raises(ValueError):
        ScenarioConfig("bad", "custom", 2, positions=[1.0, 0.0], weights=[0.5, 0.5]).resolve()
    with pytest.raises(ValueError):
        ScenarioConfig("bad", "custom", 2, positions=[0.0, 1.0], weights=[0.5, 0.6]).resolve()
    with pytest.raises(ValueError):
        scenarios.from_dict({"type": "mystery"})


def test_prince_charles_blowup_identity():
    for row in prince_charles_blowup([10, 100]):
        assert row.pair_sum == pytest.approx(row.identity, rel=1e-10)
        assert row.derivative == pytest.approx(row.pair_sum, rel=1e-10)
        assert row.pair_sum >= row.bound
    rows = prince_charles_blowup([10, 100, 1000])
    assert rows[2].pair_sum > rows[1].pair_sum > rows[0].pair_sum


def test_quad_field_examples():
    cfg = QuadDiffConfig("one", [0.0])
    z = np.array([1j, 1 + 1j, -1 + 1e-9j])
    th = quad_field(cfg, z)
    # Q = (z)^2: theta = -arg z
    assert angle_error(th[0], np.pi / 2) < 1e-12
    assert angle_error(th[1], -np.pi / 4) < 1e-12
    assert angle_error(th[2], 0.0) < 1e-8


def test_quad_field_symmetric_configuration():
    for name in ("fig7", "fig8"):
        cfg = builtin(name)
        above_roots = np.array(cfg.roots) + 1e-9j
        assert np.max(angle_error(quad_field(cfg, above_roots), np.pi / 2)) < 1e-6
        axis = 1j * np.linspace(0.1, 2.4, 30)
        assert np.max(angle_error(quad_field(cfg, axis), 0.0)) < 1e-10


def test_molly_symmetry_small():
    path = drivers.simulate(builtin("molly", 11).with_(T=0.1))
    mirror, centre = scenarios.molly_asymmetry(path)
    assert mirror <= 1e-10 and centre <= 1e-10


def test_johnny_escape_small():
    paths = [drivers.simulate(builtin("johnny", n).with_(T=0.1)) for n in (11, 21, 41)]
    rep = scenarios.johnny_escape_diagnostic(paths, 0.1)
    assert rep.monotone and np.all(rep.values > 2.0)


def test_profile_reconstruction():
    for name in ("prince_charles", "johnny", "molly"):
        assert scenarios.profile_reconstruction_error(builtin(name, 11)) <= 1e-12
