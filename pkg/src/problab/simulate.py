"""Seeded Monte Carlo for the shootout game and its self-shot urn variant.

All sampling uses the counter-based Philox generator keyed on
(seed, stream id), so every public entry point is reproducible bit-for-bit
for a fixed (seed, reps, n); results never depend on thread count. Batched
round simulation is vectorised with numpy; the batching constants below are
part of the stream-partition policy and are therefore fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exact import expected_survivors, mcdiarmid_bound, LIMIT_MEAN, LIMIT_VARIANCE

# fixed batching policy: max elements per vectorised chunk
_MAX_ELEMS = 1 << 24

# stream ids (second Philox key word) per operation, so different operations
# run on disjoint streams even with equal seeds
_STREAM_GAME = 1
_STREAM_ROUND = 2
_STREAM_COUPLED = 3
_STREAM_CLT = 4
_STREAM_TAIL = 5


def make_stream(seed: int, stream: int, n: int = 0) -> np.random.Generator:
    """Independent counter-based stream for (seed, stream, n)."""
    return np.random.Generator(
        np.random.Philox(key=[seed & (2**64 - 1), (stream << 32) ^ n]))


@dataclass
class RoundSample:
    """One coupled round: original game and self-shot (urn) variant.

    ``targets`` holds the rightward offsets X_i in {1..alive-1} of the
    original game. The urn variant lets players shoot themselves; the
    coupling redirects each self-shooter to a uniform other player, which
    recovers the original game from the same draws.
    """

    alive_before: int
    targets: np.ndarray
    survivors: int
    urn_survivors: int
    eta: int

    def __post_init__(self):
        a = self.alive_before
        if not 0 <= self.survivors <= a - 2:
            raise ValueError("survivor count outside {0..alive-2}")
        if abs(self.survivors - self.urn_survivors) > self.eta:
            raise AssertionError("coupling inequality |xi - xi'| <= eta violated")


@dataclass
class McEstimate:
    point: float
    stderr: float
    reps: int
    seed: int


def _distinct_targets(t: np.ndarray, a: int) -> np.ndarray:
    """Number of distinct targeted players per row of an (b, a) target array."""
    b = t.shape[0]
    hit = np.zeros((b, a), dtype=bool)
    hit[np.arange(b)[:, None], t] = True
    return np.count_nonzero(hit, axis=1)


def _rounds_survivors(a: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Survivor counts of `count` independent rounds with `a` players."""
    t = rng.integers(0, a - 1, size=(count, a), dtype=np.int64)
    t += t >= np.arange(a, dtype=np.int64)  # skip self
    return a - _distinct_targets(t, a)


def _rounds_coupled(a: int, count: int, rng: np.random.Generator):
    """(xi, xi_urn, eta) for `count` coupled rounds with `a` players.

    Raw draws allow self-targets (urn variant); self-shooters are then
    redirected uniformly among the others, which is the original game.
    """
    raw = rng.integers(0, a, size=(count, a), dtype=np.int64)
    idx = np.arange(a, dtype=np.int64)
    self_mask = raw == idx
    eta = np.count_nonzero(self_mask, axis=1)
    xi_urn = a - _distinct_targets(raw, a)
    r = rng.integers(0, a - 1, size=(count, a), dtype=np.int64)
    r += r >= idx
    final = np.where(self_mask, r, raw)
    xi = a - _distinct_targets(final, a)
    if np.any(np.abs(xi - xi_urn) > eta):
        raise AssertionError("coupling inequality |xi - xi'| <= eta violated")
    return xi, xi_urn, eta


def simulate_round(alive: int, rng: np.random.Generator) -> RoundSample:
    """One coupled round; see RoundSample for the coupling construction."""
    if alive < 2:
        raise ValueError(f"need alive >= 2, got {alive}")
    a = alive
    raw = rng.integers(0, a, size=a, dtype=np.int64)
    idx = np.arange(a, dtype=np.int64)
    self_mask = raw == idx
    eta = int(np.count_nonzero(self_mask))
    urn_surv = a - int(len(np.unique(raw)))
    r = rng.integers(0, a - 1, size=a, dtype=np.int64)
    r += r >= idx
    final = np.where(self_mask, r, raw)
    surv = a - int(len(np.unique(final)))
    offsets = (final - idx) % a
    return RoundSample(alive_before=a, targets=offsets, survivors=surv,
                       urn_survivors=urn_surv, eta=eta)


def simulate_game(n: int, rng: np.random.Generator) -> bool:
    """Play one game from n players; True iff exactly one player remains."""
    alive = n
    while alive >= 2:
        alive = int(_rounds_survivors(alive, 1, rng)[0])
    return alive == 1


def _count_single_winners(n: int, reps: int, rng: np.random.Generator) -> int:
    """Vectorised play-out of `reps` games; number ending with one survivor.

    Games are tracked as a histogram over alive counts; each distinct alive
    count is processed as one vectorised round per iteration (chunked by the
    fixed batching policy). Group order is sorted, hence deterministic.
    """
    if n == 0:
        return 0
    if n == 1:
        return reps
    ones = 0
    groups = {n: reps}
    while groups:
        new: dict[int, int] = {}
        for a in sorted(groups):
            cnt = groups[a]
            batch = max(1, _MAX_ELEMS // a)
            done = 0
            while done < cnt:
                b = min(batch, cnt - done)
                surv = _rounds_survivors(a, b, rng)
                ones += int(np.count_nonzero(surv == 1))
                vals, cts = np.unique(surv[surv >= 2], return_counts=True)
                for v, c in zip(vals, cts):
                    new[int(v)] = new.get(int(v), 0) + int(c)
                done += b
        groups = new
    return ones


def estimate_p(n: int, reps: int, seed: int = 0) -> McEstimate:
    """Monte Carlo estimate of the one-winner probability p_n."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    rng = make_stream(seed, _STREAM_GAME, n)
    ones = _count_single_winners(n, reps, rng)
    point = ones / reps
    stderr = math.sqrt(point * (1.0 - point) / reps)
    return McEstimate(point=point, stderr=stderr, reps=reps, seed=seed)


def clt_check(n: int, reps: int, seed: int = 0) -> tuple[float, float]:
    """Standardised-mean and variance-ratio diagnostics for round survivors.

    Samples xi_n, standardises by the exact finite-n mean and the limiting
    variance n*(1/e - 2/e^2); returns (mean of standardised values,
    sample variance / target variance).
    """
    if n < 10:
        raise ValueError("survivor count is (nearly) degenerate below n=10")
    if reps < 2:
        raise ValueError("need reps >= 2")
    rng = make_stream(seed, _STREAM_CLT, n)
    mu = expected_survivors(n)
    target_var = n * LIMIT_VARIANCE
    total = 0.0
    total_sq = 0.0
    done = 0
    batch = max(1, _MAX_ELEMS // n)
    while done < reps:
        b = min(batch, reps - done)
        xi = _rounds_survivors(n, b, rng).astype(np.float64)
        total += float(np.sum(xi - mu))
        total_sq += float(np.sum((xi - mu) ** 2))
        done += b
    std_mean = (total / reps) / math.sqrt(target_var)
    sample_var = (total_sq - total * total / reps) / (reps - 1)
    return std_mean, sample_var / target_var


def mcdiarmid_check(
    n: int, reps: int, epsilons, seed: int = 0
) -> list[dict]:
    """Empirical two-sided tail frequencies against the 2 exp(-2 eps^2/n) bound.

    Returns one row per epsilon with the analytic bound, the empirical
    frequency, its binomial standard error, and a flag set when the
    empirical frequency exceeds the bound by more than 4 standard errors.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    rng = make_stream(seed, _STREAM_TAIL, n)
    mu = expected_survivors(n)
    devs = np.empty(reps)
    done = 0
    batch = max(1, _MAX_ELEMS // n)
    while done < reps:
        b = min(batch, reps - done)
        xi = _rounds_survivors(n, b, rng)
        devs[done: done + b] = np.abs(xi - mu)
        done += b
    rows = []
    for eps in epsilons:
        emp = float(np.count_nonzero(devs >= eps)) / reps
        bound = mcdiarmid_bound(n, float(eps))
        se = math.sqrt(emp * (1.0 - emp) / reps)
        rows.append({
            "epsilon": float(eps),
            "bound": bound,
            "empirical": emp,
            "stderr": se,
            "flagged": emp > bound + 4.0 * se,
        })
    return rows


def eta_mean(n: int, reps: int, seed: int = 0) -> McEstimate:
    """Sample mean of the self-shooter count in the urn variant."""
    if n < 2:
        raise ValueError("need n >= 2")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    rng = make_stream(seed, _STREAM_COUPLED, n)
    total = 0.0
    total_sq = 0.0
    done = 0
    batch = max(1, _MAX_ELEMS // (2 * n))
    while done < reps:
        b = min(batch, reps - done)
        _, _, eta = _rounds_coupled(n, b, rng)
        total += float(eta.sum())
        total_sq += float((eta.astype(np.float64) ** 2).sum())
        done += b
    mean = total / reps
    var = max(0.0, total_sq / reps - mean * mean)
    return McEstimate(point=mean, stderr=math.sqrt(var / reps),
                      reps=reps, seed=seed)


def coupling_check(n: int, reps: int, seed: int = 0) -> dict:
    """Hard-assert |xi - xi'| <= eta over `reps` coupled rounds.

    Also reports the empirical mean of eta (theory: exactly 1) and of the
    urn survivor count (theory: n(1-1/n)^n), each with standard errors.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    rng = make_stream(seed, _STREAM_COUPLED, n)
    eta_tot = eta_sq = urn_tot = urn_sq = 0.0
    done = 0
    batch = max(1, _MAX_ELEMS // (2 * n))
    while done < reps:
        b = min(batch, reps - done)
        xi, xi_urn, eta = _rounds_coupled(n, b, rng)  # asserts the inequality
        eta_tot += float(eta.sum())
        eta_sq += float((eta.astype(np.float64) ** 2).sum())
        urn_tot += float(xi_urn.sum())
        urn_sq += float((xi_urn.astype(np.float64) ** 2).sum())
        done += b
    eta_m = eta_tot / reps
    urn_m = urn_tot / reps
    return {
        "n": n,
        "reps": reps,
        "seed": seed,
        "violations": 0,
        "eta_mean": eta_m,
        "eta_stderr": math.sqrt(max(0.0, eta_sq / reps - eta_m**2) / reps),
        "urn_mean": urn_m,
        "urn_stderr": math.sqrt(max(0.0, urn_sq / reps - urn_m**2) / reps),
        "urn_mean_theory": n * (1 - 1 / n) ** n,
    }
