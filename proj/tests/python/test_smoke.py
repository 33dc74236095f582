import math

import pytest

import relhdmr


def test_version_is_string():
    assert isinstance(relhdmr.__version__, str) and relhdmr.__version__


def test_limit_states():
    assert relhdmr.lsf_linear([0.0] * 4) == pytest.approx(7.0)
    x = [0.3, -1.2, 0.7]
    expected = (0.75 * x[1] - 3 * math.sin(x[0]) + 0.2 * x[0] - 0.1 * (x[2] - 3) ** 2
                - 0.005 * x[0] * x[1] + 0.1 * x[1] * x[2] - 0.2)
    assert relhdmr.lsf_example1(x) == pytest.approx(expected, rel=1e-14)
    assert relhdmr.lsf_coupled([1.0, 1.0], 10.0) == pytest.approx(10.0 - 2.0)


def test_to_physical_normal_and_lognormal():
    x = relhdmr.to_physical([1.0, 0.0], [("normal", 3.0, 2.0), ("lognormal", 1.0, 0.1)])
    assert x[0] == pytest.approx(5.0)
    zeta = math.sqrt(math.log(1.0 + 0.01))
    assert x[1] == pytest.approx(math.exp(-0.5 * zeta * zeta))


def test_estimate_pf_tally():
    r = relhdmr.estimate_pf(lambda u: 1.0 - u[0], 1, 5, 20000)
    assert r["n_mc"] == 20000
    assert r["pf"] == r["n_fail"] / 20000
    assert abs(r["pf"] - 0.158655) < 4 * math.sqrt(0.158655 * 0.84 / 20000)


def test_kriging_interpolates():
    xs = [[-2.0], [-1.0], [0.0], [1.5], [3.0]]
    ys = [math.sin(v[0]) for v in xs]
    model = relhdmr.Kriging(xs, ys, seed=1)
    for x, y in zip(xs, ys):
        mean, var = model.predict(x)
        assert mean == pytest.approx(y, abs=1e-8)
        assert var >= 0.0
    assert len(model.theta) == 1


def test_run_example1_small():
    cfg = relhdmr.example_config("example1")
    cfg["mcs"]["n"] = 50000
    cfg["reference"]["direct_mcs"]["n"] = 50000
    report = relhdmr.run(cfg)
    assert report["schema_version"] == 1
    run = report["runs"][0]
    assert run["n_call"] > 0
    assert abs(run["pf"] - report["reference"]["pf"]) < 0.05 * report["reference"]["pf"]
    again = relhdmr.run(cfg)
    assert again["runs"] == report["runs"]


def test_config_errors_raise():
    cfg = relhdmr.example_config("example1")
    cfg["al"]["r_s"] = -1.0
    with pytest.raises(relhdmr.ConfigError, match="al.r_s"):
        relhdmr.run(cfg)
    with pytest.raises(relhdmr.ConfigError):
        relhdmr.example_config("nope")
