"""Smoke tests for the python module: the main operations round-trip
through numpy and reproduce the C++ results at the API level."""

import math

import numpy as np
import pytest

import procalab as pl

TWO_PI = 2.0 * math.pi


@pytest.fixture
def grid():
    return pl.GridSpec(dim=1, points=[64], lengths=[TWO_PI])


def test_version():
    assert pl.__version__


def test_classify_symbol():
    kind, speed = pl.classify_symbol(0.75)
    assert kind == "hyperbolic"
    assert speed == pytest.approx(2.0)
    kind, speed = pl.classify_symbol(1.0)
    assert kind == "elliptic-3d" and speed is None
    kind, _ = pl.classify_symbol(1.5)
    assert kind == "elliptic-4d"


def test_dispersion_values():
    medium = pl.MediumSpec.constant(n=1.0, lam=0.0, mu_p=4.0)
    assert pl.dispersion_transverse([3.0], medium) == pytest.approx(5.0)
    assert pl.dispersion_longitudinal([3.0], medium) == pytest.approx(5.0)
    medium2 = pl.MediumSpec.constant(n=2.0, lam=0.5, mu_p=1.0)
    assert pl.dispersion_transverse([2.0], medium2) == pytest.approx(
        math.sqrt(5.0) / 2.0
    )
    with pytest.raises(ValueError):
        pl.dispersion_longitudinal([1.0], pl.MediumSpec.constant(n=1.0, lam=1.5))


def test_derivative_and_norms(grid):
    x = np.arange(64) * TWO_PI / 64
    f = np.sin(x)
    df = pl.derivative(f, grid, axis=0)
    assert np.max(np.abs(df - np.cos(x))) < (TWO_PI / 64) ** 2 / 6
    assert pl.norm_l2(f, grid) == pytest.approx(math.sqrt(math.pi), rel=1e-10)
    assert pl.norm_linf(f, grid) == pytest.approx(1.0, rel=1e-4)


def test_random_field_determinism(grid):
    a = pl.random_bandlimited(42, 6, grid)
    b = pl.random_bandlimited(42, 6, grid)
    assert np.array_equal(a, b)
    assert abs(a.mean()) < 1e-12


def test_screened_poisson(grid):
    x = np.arange(64) * TWO_PI / 64
    rhs = np.sin(x)
    u = pl.solve_screened_poisson(rhs, 3.0, grid)
    h = TWO_PI / 64
    s1 = (2 - 2 * math.cos(h)) / h**2
    assert np.max(np.abs(u + rhs / (s1 + 3.0))) < 1e-12


def test_flat_engine_evolution(grid):
    medium = pl.MediumSpec.constant(n=1.5, lam=0.5, mu_p=1.0)
    engine = pl.FlatEngine(medium, grid)
    ai = np.stack([pl.random_bandlimited(s, 6, grid) for s in (1, 2, 3)])
    dai = np.stack([pl.random_bandlimited(s, 6, grid) for s in (4, 5, 6)])
    state = engine.init_from_free_data(ai, dai)
    out = engine.evolve(state, t_end=0.25, cfl=0.25, sample_every=4)
    mon = out["monitors"]
    assert mon["t"][-1] == pytest.approx(0.25)
    # constraints start at rounding level and stay small
    assert mon["c1_linf"][0] == 0.0
    assert mon["gauss_l2"][0] < 1e-10
    assert mon["c2_l2"][-1] < 1.0
    assert out["state"].t == pytest.approx(0.25)


def test_flat_engine_rejects_elliptic_lambda(grid):
    with pytest.raises(ValueError, match="elliptic-4d"):
        pl.FlatEngine(pl.MediumSpec.constant(n=1.0, lam=2.0, mu_p=1.0), grid)


def test_gordon_engine_varying_index(grid):
    x = np.arange(64) * TWO_PI / 64
    n = 1.0 + 0.1 * np.sin(x)
    medium = pl.MediumSpec.varying(n, grid, mu_p=1.0)
    engine = pl.GordonEngine(medium, grid)
    atld = np.stack([pl.random_bandlimited(s, 6, grid) for s in (11, 12, 13)])
    pi = np.stack([pl.random_bandlimited(s, 6, grid) for s in (14, 15, 16)])
    state = engine.init_from_free_data(atld, pi)
    mon0 = engine.monitors(state)
    assert mon0["lorenz_linf"][0] < 1e-12
    assert mon0["gauss_l2"][0] < 1e-8
    out = engine.evolve(state, t_end=0.2, cfl=0.25, sample_every=4)
    assert np.all(np.isfinite(out["monitors"]["lorenz_l2"]))


def test_measured_frequency_matches_dispersion(grid):
    medium = pl.MediumSpec.constant(n=2.0, lam=0.0, mu_p=1.0)
    engine = pl.FlatEngine(medium, grid)
    ai, dai, omega = pl.plane_wave_free_data("transverse", [2.0], 1.0, medium, grid)
    state = engine.init_from_free_data(np.stack(ai), np.stack(dai))
    out = engine.evolve(
        state, t_end=80.0, cfl=0.25, probe=lambda s: s.ai[1][0]
    )
    measured = pl.measure_frequency(out["probe"], out["dt"])
    assert measured == pytest.approx(omega, rel=0.01)


def test_run_config_text(tmp_path):
    cfg = f"""
    grid.dim = 1
    grid.points = 64
    grid.lengths = {TWO_PI}
    medium.n = 1.5
    medium.lambda = 0.5
    medium.mu_p = 1
    engine = flat
    init = random
    init.seed = 3
    init.kmax = 4
    evolve.cfl = 0.25
    evolve.t_end = 0.1
    output.dir = {tmp_path / "out"}
    """
    code, log = pl.run_config_text(cfg)
    assert code == 0, log
    assert (tmp_path / "out" / "monitors.csv").exists()
    assert (tmp_path / "out" / "manifest.json").exists()

    bad = cfg.replace("medium.lambda = 0.5", "medium.lambda = 1.5")
    code, log = pl.run_config_text(bad)
    assert code == 2
    assert "elliptic-4d" in log
