"""Distance covariance/correlation and the dependent-but-uncorrelated demo."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from problab import energy

SEED = 20240416


def dcov2_triple_sum(xs, ys):
    """Independent O(m^3) oracle: the three-expectation V-statistic."""
    m = len(xs)
    dx = np.abs(xs[:, None] - xs[None, :])
    dy = np.abs(ys[:, None] - ys[None, :])
    t1 = dx.mean() * dy.mean()
    t2 = (dx * dy).mean()
    t3 = (dx @ dy).sum() / m**3  # E|X-X'||Y-Y''| over all (i, j, k)
    return t2 + t1 - 2.0 * t3


def random_sample(rng, m):
    return energy.PairedSample(rng.standard_normal(m),
                               rng.standard_normal(m) ** 2)


def test_dcov2_two_point_hand_value():
    s = energy.PairedSample(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
    assert energy.dcov2_vstat(s) == pytest.approx(0.25, abs=1e-15)


def test_dcov2_constant_marginal_is_zero():
    s = energy.PairedSample(np.zeros(10), np.arange(10.0))
    assert energy.dcov2_vstat(s) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(energy.DegenerateMarginalError):
        energy.dcor(s)


def test_dcov2_matches_triple_sum_oracle():
    rng = np.random.Generator(np.random.Philox(key=[SEED, 2]))
    for _ in range(30):
        m = int(rng.integers(2, 50))
        s = random_sample(rng, m)
        assert energy.dcov2_vstat(s) == pytest.approx(
            dcov2_triple_sum(s.xs, s.ys), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1),
       st.floats(-5, 5, allow_nan=False),
       st.floats(0.1, 4, allow_nan=False))
def test_dcov2_symmetry_shift_scale(seed, shift, scale):
    rng = np.random.Generator(np.random.Philox(key=[seed, 3]))
    s = random_sample(rng, 25)
    v = energy.dcov2_vstat(s)
    assert energy.dcov2_vstat(energy.PairedSample(s.ys, s.xs)) == \
        pytest.approx(v, rel=1e-10)
    shifted = energy.PairedSample(s.xs + shift, s.ys + shift)
    assert energy.dcov2_vstat(shifted) == pytest.approx(v, rel=1e-9, abs=1e-12)
    scaled = energy.PairedSample(scale * s.xs, s.ys)
    assert energy.dcov2_vstat(scaled) == pytest.approx(scale * v,
                                                       rel=1e-9, abs=1e-12)


def test_dcor_affine_invariance_and_reflection():
    rng = np.random.Generator(np.random.Philox(key=[SEED, 4]))
    xs = rng.standard_normal(60)
    for a, b in ((1.0, 0.0), (-1.0, 0.0), (2.5, -7.0)):
        s = energy.PairedSample(xs, a * xs + b)
        assert energy.dcor(s) == pytest.approx(1.0, abs=1e-10)
    base = random_sample(rng, 60)
    r = energy.dcor(base)
    tr = energy.dcor(energy.PairedSample(3.0 * base.xs - 1.0,
                                         -2.0 * base.ys + 5.0))
    assert tr == pytest.approx(r, abs=1e-10)


def test_paired_sample_validation():
    with pytest.raises(ValueError):
        energy.PairedSample(np.arange(3.0), np.arange(4.0))
    with pytest.raises(ValueError):
        energy.PairedSample(np.array([0.0, np.nan]), np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        energy.dcov2_vstat(energy.PairedSample(np.array([1.0]),
                                               np.array([1.0])))


def test_perm_test_maximal_statistic():
    xs = np.arange(100.0)
    s = energy.PairedSample(xs, xs)
    assert energy.perm_test_dcor(s, 999, SEED) == pytest.approx(1 / 1000)
    with pytest.raises(ValueError):
        energy.perm_test_dcor(s, 50, SEED)


def test_perm_test_independent_not_significant():
    rng = np.random.Generator(np.random.Philox(key=[SEED, 5]))
    s = energy.PairedSample(rng.uniform(-1, 1, 400), rng.uniform(-1, 1, 400))
    assert energy.perm_test_dcor(s, 199, SEED) > 0.05


def test_cov_sym_abs_diff_self_is_variance():
    rng = np.random.Generator(np.random.Philox(key=[SEED, 6]))
    xs = rng.standard_normal(300)
    s = energy.PairedSample(xs, xs)
    dx = np.abs(xs[:, None] - xs[None, :])
    assert energy.cov_sym_abs_diff(s) == pytest.approx(
        (dx**2).mean() - dx.mean() ** 2, rel=1e-10)
    assert energy.cov_sym_abs_diff(s) >= 0.0


def test_cov_sym_abs_diff_chunking_consistent():
    rng = np.random.Generator(np.random.Philox(key=[SEED, 7]))
    s = random_sample(rng, 777)
    assert energy.cov_sym_abs_diff(s, chunk=64) == pytest.approx(
        energy.cov_sym_abs_diff(s, chunk=1024), rel=1e-12)


def test_bootstrap_stderr_positive_and_deterministic():
    rng = np.random.Generator(np.random.Philox(key=[SEED, 8]))
    s = random_sample(rng, 200)
    a = energy.bootstrap_cov_stderr(s, B=100, seed=SEED)
    b = energy.bootstrap_cov_stderr(s, B=100, seed=SEED)
    assert a == b > 0


# ---------------------------------------------------------------------------
# the demo density
# ---------------------------------------------------------------------------

def test_q_step_values():
    c = energy.INTRO_C
    assert c == pytest.approx(math.sqrt(2) - 1, abs=1e-15)
    assert energy.q_step(0.1) == 0.5
    assert energy.q_step(-0.5) == -c / 2
    assert energy.q_step(0.9) == 0.0
    # boundary conventions from the half-open interval definitions
    assert energy.q_step(0.0) == -c / 2
    assert energy.q_step(c) == 0.5


def test_intro_density_values_and_positivity():
    assert energy.intro_density(0.9, 0.9) == pytest.approx(0.25)
    assert energy.intro_density(1.5, 0.0) == 0.0
    mass, min_val = energy.intro_density_mass()
    assert mass == pytest.approx(1.0, abs=1e-10)
    assert min_val >= 0.0


def test_intro_cov_quadrature_oracle_is_zero():
    assert abs(energy.intro_cov_quadrature()) < 1e-10
    # the zero is specific to c = sqrt(2)-1: a perturbed c misses zero
    assert abs(energy.intro_cov_quadrature(c=0.3)) > 1e-4


def test_sample_intro_density_deterministic_in_range():
    s1 = energy.sample_intro_density(500, SEED)
    s2 = energy.sample_intro_density(500, SEED)
    assert np.array_equal(s1.xs, s2.xs) and np.array_equal(s1.ys, s2.ys)
    assert np.all(np.abs(s1.xs) <= 1.0) and np.all(np.abs(s1.ys) <= 1.0)


def test_intro_density_zero_cov_but_dependent():
    s = energy.sample_intro_density(4000, SEED)
    cov = energy.cov_sym_abs_diff(s)
    se = energy.bootstrap_cov_stderr(s, B=100, seed=SEED)
    assert abs(cov) <= 4 * se
    sub = energy.PairedSample(s.xs[:1500], s.ys[:1500])
    assert energy.perm_test_dcor(sub, 199, SEED) < 0.05
