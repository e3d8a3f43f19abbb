"""Distance covariance/correlation and the dependent-but-uncorrelated demo.

dCov^2 is the plug-in V-statistic of

    E|X-X'||Y-Y'| + E|X-X'| E|Y-Y'| - 2 E|X-X'||Y-Y''|

computed through double-centered pairwise distance matrices (an algebraic
identity). dCor = 0 characterises independence, which is what makes the demo
density interesting: its plain covariance of |X-X'| and |Y-Y'| vanishes even
though X and Y are dependent.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

DEGENERACY_TOL = 1e-12

# demo density on [-1,1]^2: p(x,y) = 1/4 - q(x) q(y) with the step function q
# below; this constant is the unique positive c making cov(|X-X'|,|Y-Y'|) = 0
INTRO_C = math.sqrt(2.0) - 1.0


@dataclass
class PairedSample:
    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=np.float64)
        self.ys = np.asarray(self.ys, dtype=np.float64)
        if self.xs.shape != self.ys.shape or self.xs.ndim != 1:
            raise ValueError("xs and ys must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(self.xs)) and np.all(np.isfinite(self.ys))):
            raise ValueError("sample contains non-finite values")

    @property
    def m(self) -> int:
        return len(self.xs)


class DegenerateMarginalError(Exception):
    """A marginal distance variance is (numerically) zero."""


def _dist_matrix(v: np.ndarray) -> np.ndarray:
    return np.abs(v[:, None] - v[None, :])


def _double_center(d: np.ndarray) -> np.ndarray:
    row = d.mean(axis=1, keepdims=True)
    col = d.mean(axis=0, keepdims=True)
    return d - row - col + d.mean()


def dcov2_vstat(s: PairedSample) -> float:
    """Squared distance covariance (V-statistic convention)."""
    if s.m < 2:
        raise ValueError("need at least 2 observations")
    a = _double_center(_dist_matrix(s.xs))
    b = _double_center(_dist_matrix(s.ys))
    return float(np.mean(a * b))


def dcor(s: PairedSample) -> float:
    """Distance correlation in [0, 1]; raises on degenerate marginals."""
    vx = dcov2_vstat(PairedSample(s.xs, s.xs))
    vy = dcov2_vstat(PairedSample(s.ys, s.ys))
    if vx <= DEGENERACY_TOL or vy <= DEGENERACY_TOL:
        raise DegenerateMarginalError(
            f"marginal distance variance too small (vx={vx:.3g}, vy={vy:.3g})")
    v = dcov2_vstat(s)
    r2 = v / math.sqrt(vx * vy)
    if r2 < 0.0:
        r2 = 0.0
    r = math.sqrt(r2)
    if r > 1.0:
        warnings.warn(f"dcor {r} clipped to 1", RuntimeWarning)
        r = 1.0
    return r


def perm_test_dcor(s: PairedSample, B: int, seed: int = 0) -> float:
    """Permutation p-value for positive distance correlation.

    Shuffles ys; the statistic is dCov^2, which is equivalent to dCor here
    because the permuted marginals (hence the denominator) are unchanged.
    """
    if B < 99:
        raise ValueError("need at least 99 permutation replicates")
    a = _double_center(_dist_matrix(s.xs))
    b = _double_center(_dist_matrix(s.ys))
    obs = float(np.mean(a * b))
    rng = np.random.Generator(np.random.Philox(key=[seed, 0xD0C]))
    ge = 0
    for _ in range(B):
        perm = rng.permutation(s.m)
        stat = float(np.mean(a * b[np.ix_(perm, perm)]))
        if stat >= obs:
            ge += 1
    return (1 + ge) / (B + 1)


def cov_sym_abs_diff(s: PairedSample, chunk: int = 512) -> float:
    """Plain covariance of |X-X'| and |Y-Y'| over the empirical measure.

    Pairwise plug-in: mean(|xi-xj||yi-yj|) - mean|xi-xj| * mean|yi-yj| over
    all ordered pairs. Chunked so large samples never materialise an m x m
    matrix.
    """
    m = s.m
    if m < 2:
        raise ValueError("need at least 2 observations")
    s_xy = s_x = s_y = 0.0
    for lo in range(0, m, chunk):
        hi = min(lo + chunk, m)
        dx = np.abs(s.xs[lo:hi, None] - s.xs[None, :])
        dy = np.abs(s.ys[lo:hi, None] - s.ys[None, :])
        s_xy += float(np.sum(dx * dy))
        s_x += float(np.sum(dx))
        s_y += float(np.sum(dy))
    m2 = float(m) * m
    return s_xy / m2 - (s_x / m2) * (s_y / m2)


def bootstrap_cov_stderr(s: PairedSample, B: int = 200, seed: int = 0) -> float:
    """Nonparametric bootstrap stderr of cov_sym_abs_diff.

    Resampling with replacement is expressed through multinomial weights, so
    the pairwise distance matrices are built once (float32 to keep the m=10^4
    case within memory) and each replicate costs three matrix-vector products.
    """
    m = s.m
    if m < 2:
        raise ValueError("need at least 2 observations")
    dx = np.abs(s.xs[:, None] - s.xs[None, :]).astype(np.float32)
    dy = np.abs(s.ys[:, None] - s.ys[None, :]).astype(np.float32)
    pxy = dx * dy
    rng = np.random.Generator(np.random.Philox(key=[seed, 0xB00]))
    vals = np.empty(B)
    m2 = float(m) * m
    for i in range(B):
        u = rng.multinomial(m, np.full(m, 1.0 / m)).astype(np.float32)
        exy = float(u @ (pxy @ u)) / m2
        ex = float(u @ (dx @ u)) / m2
        ey = float(u @ (dy @ u)) / m2
        vals[i] = exy - ex * ey
    return float(np.std(vals, ddof=1))


# ---------------------------------------------------------------------------
# demo density: p(x,y) = 1/4 - q(x)q(y) on [-1,1]^2
# ---------------------------------------------------------------------------

def q_step(x, c: float = INTRO_C):
    """Step function -c/2 on [-1,0], 1/2 on (0,c], 0 elsewhere.

    Boundary values q(0) = -c/2 and q(c) = 1/2 follow the defining half-open
    intervals; measure zero, but fixed for determinism.
    """
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    out[(x >= -1.0) & (x <= 0.0)] = -c / 2.0
    out[(x > 0.0) & (x <= c)] = 0.5
    return out


def intro_density(x, y, c: float = INTRO_C):
    """Joint density 1/4 - q(x)q(y) on [-1,1]^2, 0 outside."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    inside = (np.abs(x) <= 1.0) & (np.abs(y) <= 1.0)
    return np.where(inside, 0.25 - q_step(x, c) * q_step(y, c), 0.0)


def sample_intro_density(m: int, seed: int = 0) -> PairedSample:
    """Exact rejection sampling from the demo density.

    Envelope constant is the density maximum 1/4 + c/4 (attained where
    q(x)q(y) = -c/4); acceptance rate is 1/(1+c).
    """
    if m < 1:
        raise ValueError("need m >= 1")
    rng = np.random.Generator(np.random.Philox(key=[seed, 0x1D0]))
    envelope = 0.25 + INTRO_C / 4.0
    xs = np.empty(m)
    ys = np.empty(m)
    have = 0
    while have < m:
        b = max(64, int((m - have) * 1.6))
        x = rng.uniform(-1.0, 1.0, b)
        y = rng.uniform(-1.0, 1.0, b)
        u = rng.uniform(0.0, envelope, b)
        acc = u <= intro_density(x, y)
        k = min(int(acc.sum()), m - have)
        xs[have: have + k] = x[acc][:k]
        ys[have: have + k] = y[acc][:k]
        have += k
    return PairedSample(xs, ys)


def _kernel_integral(a, b, c: float = INTRO_C) -> float:
    """I(a,b) = integral of |x - x'| a(x) b(x') over [-1,1]^2 by quadrature.

    Splits both axes at the steps of q and the inner integral handles the
    |x - x'| kink adaptively.
    """
    breaks = [-1.0, 0.0, c, 1.0]
    total = 0.0
    for s0, s1 in zip(breaks, breaks[1:]):
        for t0, t1 in zip(breaks, breaks[1:]):
            val, _ = integrate.quad(
                lambda x: a(x) * integrate.quad(
                    lambda xp: abs(x - xp) * b(xp), t0, t1,
                    points=[x] if t0 < x < t1 else None, limit=200)[0],
                s0, s1, limit=200)
            total += val
    return total


def intro_cov_quadrature(c: float = INTRO_C) -> float:
    """Numerical-integration oracle for cov(|X-X'|, |Y-Y'|) under the demo.

    Writing p(x,y) = u(x)u(y) - q(x)q(y) with u = 1/2 factorises the 4-d
    integral into products of 2-d kernel integrals:

        cov = K_qq^2 - 2 K_uq^2,

    with K_ab = integral |x-x'| a(x) b(x'). The uniform-marginal term K_uu^2
    cancels against E|X-X'| E|Y-Y'|.
    """
    u = lambda x: 0.5
    q = lambda x: float(q_step(np.array([x]), c)[0])
    k_uq = _kernel_integral(u, q, c)
    k_qq = _kernel_integral(q, q, c)
    return k_qq**2 - 2.0 * k_uq**2


def intro_density_mass(grid_pts: int = 2001, c: float = INTRO_C):
    """(total mass by exact piecewise integration, min density on a fine grid).

    q integrates to zero on each axis, so the cross term drops out of the
    mass: it is exactly 1. The numerical value here re-derives that from the
    density function itself.
    """
    # piecewise-constant density: integrate exactly over the 3x3 cells
    breaks = np.array([-1.0, 0.0, c, 1.0])
    mids = (breaks[:-1] + breaks[1:]) / 2.0
    widths = np.diff(breaks)
    mass = 0.0
    for i, (mx, wx) in enumerate(zip(mids, widths)):
        for j, (my, wy) in enumerate(zip(mids, widths)):
            mass += float(intro_density(mx, my, c)) * wx * wy
    g = np.linspace(-1.0, 1.0, grid_pts)
    vals = intro_density(g[:, None], g[None, :], c)
    return mass, float(vals.min())
