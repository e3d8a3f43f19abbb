"""Monte Carlo engine: reproducibility, coupling, concentration checks."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from problab import exact, simulate

SEED = 20240416


def test_round_two_players_always_mutual():
    rng = simulate.make_stream(SEED, 99)
    for _ in range(50):
        s = simulate.simulate_round(2, rng)
        assert s.survivors == 0
        assert s.alive_before == 2


def test_round_rejects_single_player():
    rng = simulate.make_stream(SEED, 99)
    with pytest.raises(ValueError):
        simulate.simulate_round(1, rng)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=200), st.integers(0, 2**32 - 1))
def test_round_sample_invariants(alive, seed):
    rng = simulate.make_stream(seed, 98)
    s = simulate.simulate_round(alive, rng)
    assert 0 <= s.survivors <= alive - 2
    assert abs(s.survivors - s.urn_survivors) <= s.eta
    assert s.targets.shape == (alive,)
    # offsets in {1..alive-1}: nobody shoots themselves in the original game
    assert np.all((s.targets >= 1) & (s.targets <= alive - 1))


def test_round_sample_validation():
    with pytest.raises(ValueError):
        simulate.RoundSample(5, np.ones(5), survivors=4, urn_survivors=4, eta=0)
    with pytest.raises(AssertionError):
        simulate.RoundSample(5, np.ones(5), survivors=3, urn_survivors=0, eta=1)


def test_game_degenerate_sizes():
    rng = simulate.make_stream(SEED, 97)
    assert all(simulate.simulate_game(1, rng) for _ in range(10))
    assert not any(simulate.simulate_game(2, rng) for _ in range(10))
    assert not simulate.simulate_game(0, rng)


def test_estimate_p_degenerate():
    est = simulate.estimate_p(1, 10, SEED)
    assert est.point == 1.0 and est.stderr == 0.0
    est = simulate.estimate_p(2, 10, SEED)
    assert est.point == 0.0
    with pytest.raises(ValueError):
        simulate.estimate_p(5, 0, SEED)


def test_estimate_p_matches_exact_small():
    for n, p in ((3, 0.75), (5, 15 / 32)):
        est = simulate.estimate_p(n, 40_000, SEED)
        assert abs(est.point - p) <= 4 * est.stderr


def test_estimate_p_reproducible():
    a = simulate.estimate_p(17, 5000, SEED)
    b = simulate.estimate_p(17, 5000, SEED)
    c = simulate.estimate_p(17, 5000, SEED + 1)
    assert a == b
    assert a.point != c.point or a.seed != c.seed


def test_streams_disjoint_across_ops_and_n():
    x = simulate.make_stream(SEED, 1, 10).integers(0, 2**62, 8)
    y = simulate.make_stream(SEED, 2, 10).integers(0, 2**62, 8)
    z = simulate.make_stream(SEED, 1, 11).integers(0, 2**62, 8)
    assert not np.array_equal(x, y)
    assert not np.array_equal(x, z)


def test_clt_check_rejects_degenerate_n():
    with pytest.raises(ValueError):
        simulate.clt_check(2, 100, SEED)
    with pytest.raises(ValueError):
        simulate.clt_check(9, 100, SEED)


def test_clt_check_moderate_n():
    std_mean, var_ratio = simulate.clt_check(2000, 4000, SEED)
    assert abs(std_mean) <= 4 / np.sqrt(4000)
    assert 0.9 <= var_ratio <= 1.1


def test_limit_variance_constant():
    assert exact.LIMIT_VARIANCE == pytest.approx(0.0972088747, abs=1e-10)


def test_mcdiarmid_check_rows():
    rows = simulate.mcdiarmid_check(100, 20_000, [0.0, 10.0, 30.0], SEED)
    by_eps = {r["epsilon"]: r for r in rows}
    assert by_eps[0.0]["bound"] == 2.0
    assert by_eps[0.0]["empirical"] <= 1.0
    assert by_eps[30.0]["bound"] == pytest.approx(2 * np.exp(-18.0), rel=1e-12)
    assert not any(r["flagged"] for r in rows)


def test_eta_mean_is_one():
    for n in (2, 10, 100):
        est = simulate.eta_mean(n, 40_000, SEED)
        assert abs(est.point - 1.0) <= 4 * est.stderr
    with pytest.raises(ValueError):
        simulate.eta_mean(1, 10, SEED)


def test_coupling_check_report():
    rep = simulate.coupling_check(50, 30_000, SEED)
    assert rep["violations"] == 0
    assert abs(rep["eta_mean"] - 1.0) <= 4 * rep["eta_stderr"]
    assert abs(rep["urn_mean"] - rep["urn_mean_theory"]) <= 4 * rep["urn_stderr"]
