"""Exact and certified high-precision analysis of the shootout survival game.

Everything in here is deterministic. The first-round survivor count of an
n-player round (each player shoots a uniformly random *other* player,
simultaneously, all shots fatal) has an exact distribution on {0, ..., n-2}
obtained by inclusion-exclusion over the exchangeable survival indicators.
The one-winner probability p_n then follows the recurrence

    p_n = sum_k p_k * P(survivors of an n-round = k),   p_0=0, p_1=1, p_2=0.

All exact arithmetic runs on gmpy2 integers; the "certified" mode returns
floating values carrying a rigorous error radius (outward-rounded interval
arithmetic plus a concentration bound for truncated pmf tails).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Optional

import gmpy2
import mpmath
import numpy as np
from gmpy2 import bincoef, mpz

DEFAULT_EXACT_CEILING = 600
DEFAULT_CERTIFIED_CEILING = 5000
DEFAULT_PRECISION_BITS = 128

# limit variance constant of the scaled survivor fraction: 1/e - 2/e^2
LIMIT_MEAN = 1.0 / math.e
LIMIT_VARIANCE = 1.0 / math.e - 2.0 / math.e**2


class ExactModeLimitError(Exception):
    """Requested n is above the configured exact-arithmetic ceiling."""


def mixed_moment(n: int, l: int) -> Fraction:
    """Mixed moment E(Y_{i1}...Y_{il}) of l distinct survival indicators.

    Equals ((n-l)/(n-1))^l * ((n-l-1)/(n-1))^(n-l), exactly.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if not 1 <= l <= n - 1:
        raise ValueError(f"need 1 <= l <= n-1, got l={l} for n={n}")
    num = mpz(n - l) ** l * mpz(n - l - 1) ** (n - l)
    den = mpz(n - 1) ** n
    return Fraction(int(num), int(den))


@dataclass
class SurvivorPMF:
    """Exact distribution of first-round survivors over support {0..n-2}.

    ``weights[k]`` is an exact nonnegative integer; probabilities are
    weights[k] / denominator with denominator = (n-1)^n.
    """

    n: int
    weights: list
    denominator: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("SurvivorPMF needs n >= 2")
        if len(self.weights) != self.n - 1:
            raise ValueError("support must be exactly {0..n-2}")
        if any(w < 0 for w in self.weights):
            raise ValueError("negative pmf weight")
        if sum(self.weights) != self.denominator:
            raise ValueError("pmf weights do not sum to the denominator")

    def probability(self, k: int) -> Fraction:
        if not 0 <= k <= self.n - 2:
            return Fraction(0)
        return Fraction(int(self.weights[k]), int(self.denominator))

    def mean(self) -> Fraction:
        s = sum(mpz(k) * w for k, w in enumerate(self.weights))
        return Fraction(int(s), int(self.denominator))

    def second_factorial_moment(self) -> Fraction:
        """E(xi * (xi - 1)), exactly."""
        s = sum(mpz(k) * (k - 1) * w for k, w in enumerate(self.weights))
        return Fraction(int(s), int(self.denominator))

    def variance(self) -> Fraction:
        m = self.mean()
        return self.second_factorial_moment() + m - m * m

    def probabilities_float(self) -> np.ndarray:
        den = gmpy2.mpfr(self.denominator, 113)
        return np.array([float(gmpy2.mpfr(w, 113) / den) for w in self.weights])


def _waring_terms(n: int) -> list:
    """U_l = C(n,l) (n-l)^l (n-l-1)^(n-l) for l = 0..n-2 (exact integers)."""
    return [
        bincoef(n, l) * mpz(n - l) ** l * mpz(n - l - 1) ** (n - l)
        for l in range(n - 1)
    ]


def _weights_from_terms(U: list) -> list:
    """All pmf weights at once via Horner on sum_l U_l (z-1)^l.

    The alternating inclusion-exclusion sums collapse into repeated
    multiply-by-(z-1) passes, so no binomial C(l,k) products are needed and
    everything stays in exact integers (no cancellation error possible).
    """
    m = len(U)
    coeff = [U[m - 1]]
    for l in range(m - 2, -1, -1):
        coeff.append(coeff[-1])
        for i in range(len(coeff) - 2, 0, -1):
            coeff[i] = coeff[i - 1] - coeff[i]
        coeff[0] = U[l] - coeff[0]
    return coeff


def survivor_pmf(n: int, exact_ceiling: int = DEFAULT_EXACT_CEILING) -> SurvivorPMF:
    """Exact pmf of the first-round survivor count for n players."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if n > exact_ceiling:
        raise ExactModeLimitError(
            f"n={n} exceeds the exact-mode ceiling {exact_ceiling}; "
            "raise exact_ceiling explicitly if you really want this"
        )
    if n == 2:
        return SurvivorPMF(2, [mpz(1)], 1)
    weights = _weights_from_terms(_waring_terms(n))
    return SurvivorPMF(n, weights, int(mpz(n - 1) ** n))


def waring_weight(n: int, k: int) -> int:
    """Single pmf weight by the direct alternating sum (exact integers)."""
    if n < 2 or not 0 <= k <= n - 2:
        raise ValueError(f"invalid (n={n}, k={k})")
    if n == 2:
        return 1
    acc = mpz(0)
    sign = 1
    for l in range(k, n - 1):
        acc += sign * bincoef(l, k) * bincoef(n, l) \
            * mpz(n - l) ** l * mpz(n - l - 1) ** (n - l)
        sign = -sign
    return int(acc)


def brute_force_pmf(n: int) -> SurvivorPMF:
    """Independent oracle: enumerate all (n-1)^n equiprobable target profiles.

    Each profile is a tuple of offsets x_i in {1..n-1}; player i shoots
    (i + x_i) mod n. Counts untargeted players per profile. Only n <= 8.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if n > 8:
        raise ValueError(f"brute force enumeration capped at n=8, got {n}")
    total = (n - 1) ** n
    counts = np.zeros(n - 1, dtype=np.int64)
    idx = np.arange(n, dtype=np.int64)
    chunk = max(1, int(2e6) // n)
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        codes = np.arange(start, stop, dtype=np.int64)
        b = len(codes)
        hit = np.zeros((b, n), dtype=bool)
        for i in range(n):
            offs = codes % (n - 1) + 1
            codes = codes // (n - 1)
            hit[np.arange(b), (i + offs) % n] = True
        surv = n - hit.sum(axis=1)
        counts += np.bincount(surv, minlength=n - 1)[: n - 1]
    return SurvivorPMF(n, [mpz(int(c)) for c in counts], total)


def exact_moments(n: int) -> tuple[Fraction, Fraction]:
    """Closed-form (E(xi_n/n), Var(xi_n/n)) as exact rationals, n >= 3."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    mean = Fraction(n - 2, n - 1) ** (n - 1)
    var = (
        Fraction(1, n) * Fraction(n - 2, n - 1) ** (n - 1)
        + Fraction(n - 1, n)
        * Fraction(n - 2, n - 1) ** 2
        * Fraction(n - 3, n - 1) ** (n - 2)
        - Fraction(n - 2, n - 1) ** (2 * n - 2)
    )
    return mean, var


def expected_survivors(n: int) -> float:
    """E(xi_n) = n ((n-2)/(n-1))^(n-1), as a float."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if n == 2:
        return 0.0
    return n * math.exp((n - 1) * (math.log(n - 2) - math.log(n - 1)))


def asymptotic_residual(n: int, a: float, b: float, c: float) -> float:
    """((n-a)/(n-b))^(n-c) minus its two-term large-n expansion.

    The expansion is e^(b-a) * (1 - (a-b)(a+b-2c)/(2n)); the residual decays
    like n^-2, which callers verify on a doubling ladder.
    """
    if n <= max(a, b):
        raise ValueError(f"need n > max(a, b), got n={n}")
    with mpmath.workdps(60):
        nn = mpmath.mpf(n)
        lhs = ((nn - a) / (nn - b)) ** (nn - c)
        rhs = mpmath.e ** (b - a) * (1 - (a - b) * (a + b - 2 * c) / (2 * nn))
        return float(lhs - rhs)


# ---------------------------------------------------------------------------
# p-series
# ---------------------------------------------------------------------------

Provenance = Literal["exact", "certified", "mc"]


@dataclass
class SeriesEntry:
    """One (n, p_n) entry with provenance.

    For exact entries ``num``/``den`` hold the exact (possibly unreduced)
    rational; ``value`` is always a float rendering and ``err`` the certified
    error radius (0 for exact, Monte Carlo standard error for 'mc').
    """

    n: int
    value: float
    err: float
    provenance: str
    num: Optional[int] = None
    den: Optional[int] = None
    flagged: bool = False

    def __post_init__(self):
        if not (-self.err - 1e-15 <= self.value <= 1 + self.err + 1e-15):
            raise ValueError(f"p_{self.n}={self.value} outside [0,1] beyond err")

    def as_fraction(self) -> Fraction:
        if self.num is None:
            raise ValueError(f"entry n={self.n} ({self.provenance}) is not exact")
        return Fraction(self.num, self.den)


@dataclass
class PSeries:
    entries: list = field(default_factory=list)

    def __post_init__(self):
        for e in self.entries:
            if e.n == 0 and e.value != 0.0:
                raise ValueError("p_0 must be exactly 0")
            if e.n == 1 and e.value != 1.0:
                raise ValueError("p_1 must be exactly 1")
            if e.n == 2 and e.value != 0.0:
                raise ValueError("p_2 must be exactly 0")

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def value(self, n: int) -> float:
        for e in self.entries:
            if e.n == n:
                return e.value
        raise KeyError(n)

    def arrays(self, min_n: int = 0):
        """(n, value, err) arrays for entries with n >= min_n, sorted by n."""
        es = sorted((e for e in self.entries if e.n >= min_n), key=lambda e: e.n)
        return (
            np.array([e.n for e in es], dtype=np.int64),
            np.array([e.value for e in es]),
            np.array([e.err for e in es]),
        )


@dataclass
class TruncationCertificate:
    """Certified bound on pmf mass outside a recurrence truncation window.

    tail_bound = 2 exp(-2 eps^2 / n) with eps the distance from E(xi_n) to
    the nearer window edge (bounded-differences concentration), or an exact
    tail sum when one was computed instead.
    """

    n: int
    window: tuple[int, int]
    tail_bound: float

    def __post_init__(self):
        if self.tail_bound < 0:
            raise ValueError("tail_bound must be nonnegative")


def mcdiarmid_bound(n: int, eps: float) -> float:
    """Two-sided bounded-differences tail bound 2 exp(-2 eps^2 / n)."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return 2.0 * math.exp(-2.0 * eps * eps / n)


def truncation_window(
    n: int, halfwidth_factor: float = 3.0
) -> tuple[int, int, TruncationCertificate]:
    """Default window k in n/e +- ceil(factor*sqrt(n ln n)), clipped to support."""
    center = n / math.e
    half = math.ceil(halfwidth_factor * math.sqrt(n * math.log(n)))
    k_lo = max(0, int(math.floor(center)) - half)
    k_hi = min(n - 2, int(math.ceil(center)) + half)
    if k_lo == 0 and k_hi == n - 2:
        tail = 0.0
    else:
        mu = expected_survivors(n)
        eps = max(0.0, min(mu - k_lo, k_hi - mu))
        tail = min(1.0, mcdiarmid_bound(n, eps))
    return k_lo, k_hi, TruncationCertificate(n, (k_lo, k_hi), tail)


def _exact_entry(n, num, den) -> SeriesEntry:
    val = float(gmpy2.mpfr(num, 113) / gmpy2.mpfr(den, 113))
    return SeriesEntry(n=n, value=val, err=0.0, provenance="exact",
                       num=int(num), den=int(den))


def _p_series_exact(N: int) -> PSeries:
    """Exact recurrence over integers P_n = p_n * E_n, E_n = prod (m-1)^m.

    Keeping an unreduced shared denominator chain avoids per-step gcd work;
    the telescoped Horner sum below brings every earlier P_k to the current
    denominator on the fly.
    """
    entries = [
        SeriesEntry(0, 0.0, 0.0, "exact", 0, 1),
        SeriesEntry(1, 1.0, 0.0, "exact", 1, 1),
        SeriesEntry(2, 0.0, 0.0, "exact", 0, 1),
    ]
    P = [mpz(0), mpz(1), mpz(0)]
    f = [mpz(1), mpz(1), mpz(1)]  # f[m] = (m-1)^m for m >= 3
    E = mpz(1)
    for n in range(3, N + 1):
        f.append(mpz(n - 1) ** n)
        w = _weights_from_terms(_waring_terms(n))
        # P_n = f_{n-1} * sum_k w_k P_k prod_{m=k+1}^{n-2} f_m  (then * f_n/f_n)
        R = mpz(0)
        for k in range(n - 1):
            R = R * f[k] + w[k] * P[k]
        P.append(R * f[n - 1])
        E *= f[n]
        entries.append(_exact_entry(n, P[n], E))
    return PSeries(entries[: N + 1])


def _p_series_certified(
    N: int,
    precision_bits: int,
    window_halfwidth_factor: float,
    err_threshold: float,
) -> tuple[PSeries, list[TruncationCertificate]]:
    """Interval-arithmetic recurrence with windowed pmfs and certified tails.

    pmf weights are computed in exact integer arithmetic (zero rounding
    error); the interval propagation accounts for float rounding of p_k and
    the concentration-bound mass omitted outside each truncation window.
    """
    iv = mpmath.iv
    old_prec = iv.prec
    iv.prec = max(64, precision_bits)
    try:
        certs: list[TruncationCertificate] = []
        p = [iv.mpf(0), iv.mpf(1), iv.mpf(0)]
        entries = [
            SeriesEntry(0, 0.0, 0.0, "certified", 0, 1),
            SeriesEntry(1, 1.0, 0.0, "certified", 1, 1),
            SeriesEntry(2, 0.0, 0.0, "certified", 0, 1),
        ]
        for n in range(3, N + 1):
            k_lo, k_hi, cert = truncation_window(n, window_halfwidth_factor)
            den = mpz(n - 1) ** n
            # the full Horner pass is cheaper than per-k alternating sums even
            # for a narrow window; truncation still pays off in the interval
            # accumulation below and is what the certificate accounts for
            weights = _weights_from_terms(_waring_terms(n))[k_lo: k_hi + 1]
            if cert.tail_bound != 0.0:
                certs.append(cert)
            acc = iv.mpf(0)
            for k, w in zip(range(k_lo, k_hi + 1), weights):
                if w:
                    acc += p[k] * (iv.mpf(int(w)) / iv.mpf(int(den)))
            # omitted mass contributes in [0, tail_bound] since 0 <= p_k <= 1
            acc += iv.mpf([0, cert.tail_bound])
            p.append(acc)
            mid = float(acc.mid)
            # the interval radius plus the float64 rounding of the midpoint
            # (the high-precision interval is usually far tighter than a ulp)
            rad = float(acc.delta) / 2.0 + math.ulp(mid)
            flagged = rad > err_threshold
            if flagged:
                warnings.warn(
                    f"certified error radius {rad:.3g} at n={n} exceeds "
                    f"threshold {err_threshold:.3g}", RuntimeWarning)
            entries.append(SeriesEntry(n=n, value=mid, err=rad,
                                       provenance="certified", flagged=flagged))
        return PSeries(entries[: N + 1]), certs
    finally:
        iv.prec = old_prec


def p_recurrence(
    N: int,
    mode: str = "exact",
    exact_ceiling: int = DEFAULT_EXACT_CEILING,
    certified_ceiling: int = DEFAULT_CERTIFIED_CEILING,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    window_halfwidth_factor: float = 3.0,
    err_threshold: float = 1e-9,
    return_certificates: bool = False,
):
    """One-winner probabilities p_0..p_N with per-entry provenance."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if mode == "exact":
        if N > exact_ceiling:
            raise ExactModeLimitError(
                f"N={N} exceeds the exact-mode ceiling {exact_ceiling}")
        series = _p_series_exact(N)
        return (series, []) if return_certificates else series
    if mode == "certified-float" or mode == "certified":
        if N > certified_ceiling:
            raise ExactModeLimitError(
                f"N={N} exceeds the certified-mode ceiling {certified_ceiling}")
        series, certs = _p_series_certified(
            N, precision_bits, window_halfwidth_factor, err_threshold)
        return (series, certs) if return_certificates else series
    raise ValueError(f"unknown mode {mode!r}")
