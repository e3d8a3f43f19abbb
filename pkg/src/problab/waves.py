"""Oscillation analysis of the one-winner probability series on the log-n axis.

The series looks sine-like in log n with period about 1 and slowly decaying
amplitude. This module estimates the center level, extrema positions and
amplitudes, successive peak spacings, and fits the damped-wave model
h(M+1) = h(M) (1 - kappa' e^{-M}). Whether the oscillation persists
asymptotically is an open question: every output here is an estimate with
an uncertainty, never a convergence verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import exact, simulate
from .exact import PSeries, SeriesEntry


class InsufficientOscillationError(Exception):
    """Fewer than two peaks found: series too short or genuinely flat."""


class TooFewPointsError(Exception):
    """Fewer than three entries matched the subsequence selection."""


class WaveDecayModelError(Exception):
    """Successive peak amplitude ratios are not all positive."""


@dataclass
class Extremum:
    position: float          # log n
    amplitude: float         # smoothed p minus center level c
    kind: str                # "peak" | "trough"
    position_err: float = 0.0
    amplitude_err: float = 0.0


@dataclass
class WaveModel:
    c: float
    extrema: list = field(default_factory=list)
    period_estimates: list = field(default_factory=list)
    kappa_prime: float = 0.0

    def __post_init__(self):
        kinds = [e.kind for e in sorted(self.extrema, key=lambda e: e.position)]
        for a, b in zip(kinds, kinds[1:]):
            if a == b:
                raise ValueError("peaks and troughs must alternate")
        if any(p <= 0 for p in self.period_estimates):
            raise ValueError("period estimates must be positive")

    def peaks(self):
        return [e for e in self.extrema if e.kind == "peak"]


@dataclass
class SubseqProbe:
    phi: float
    tolerance: float
    points: list = field(default_factory=list)   # (n, p, err)
    dispersion: float = 0.0


def build_series(
    exact_to: int,
    mc_grid,
    reps: int = 10**5,
    seed: int = 0,
    mode: str = "exact",
) -> PSeries:
    """Exact/certified values to `exact_to` plus MC estimates on `mc_grid`."""
    mc_grid = list(mc_grid)
    if any(b <= a for a, b in zip(mc_grid, mc_grid[1:])):
        raise ValueError("mc_grid must be strictly increasing")
    if mc_grid and exact_to >= mc_grid[0]:
        raise ValueError("mc_grid must start above exact_to")
    entries: list[SeriesEntry] = []
    if exact_to >= 0:
        entries.extend(exact.p_recurrence(exact_to, mode=mode).entries)
    for n in mc_grid:
        est = simulate.estimate_p(n, reps, seed)
        entries.append(SeriesEntry(n=n, value=est.point, err=est.stderr,
                                   provenance="mc"))
    return PSeries(entries)


def _uniform_resample(x, y, pts_per_unit=200):
    npts = max(16, int((x[-1] - x[0]) * pts_per_unit))
    g = np.linspace(x[0], x[-1], npts)
    return g, np.interp(g, x, y)


def _moving_average(y, window_pts):
    w = max(1, int(window_pts))
    if w % 2 == 0:
        w += 1
    if w == 1:
        return y.copy()
    kernel = np.ones(w) / w
    pad = w // 2
    yp = np.pad(y, pad, mode="edge")
    return np.convolve(yp, kernel, mode="valid")


def _initial_period(x, y) -> float:
    """Median spacing of same-direction zero crossings of the centered series."""
    yc = y - np.mean(y)
    sign = np.sign(yc)
    up = np.where((sign[:-1] <= 0) & (sign[1:] > 0))[0]
    if len(up) >= 2:
        return float(np.median(np.diff(x[up])))
    return 1.0


def _local_extrema(x, y):
    d = np.diff(y)
    ext = []
    for i in range(1, len(d)):
        if d[i - 1] > 0 and d[i] <= 0:
            ext.append((float(x[i]), float(y[i]), "peak"))
        elif d[i - 1] < 0 and d[i] >= 0:
            ext.append((float(x[i]), float(y[i]), "trough"))
    # merge plateau duplicates: keep the first of equal-kind neighbors
    cleaned = []
    for e in ext:
        if cleaned and cleaned[-1][2] == e[2]:
            continue
        cleaned.append(e)
    return cleaned


def _trim_sparse_support(ext, x_src, radius, min_pts=4):
    """Drop extrema at either end whose neighbourhood holds < min_pts samples.

    Near the start of an integer-n series the log axis is sampled so coarsely
    that interpolation clips the wave there; trimming only from the ends
    preserves peak/trough alternation.
    """
    x_src = np.asarray(x_src)
    out = list(ext)

    def support(pos):
        return int(np.count_nonzero(np.abs(x_src - pos) <= radius))

    while out and support(out[0][0]) < min_pts:
        out.pop(0)
    while out and support(out[-1][0]) < min_pts:
        out.pop()
    return out


def _detect_once(x, y, x_src, smoothing_window=None):
    period0 = _initial_period(x, y)
    dx = x[1] - x[0]
    if smoothing_window is None:
        smoothing_window = (period0 / 8.0) / dx
    ys = _moving_average(y, smoothing_window)
    ext = _trim_sparse_support(_local_extrema(x, ys), x_src, period0 / 4.0)
    peaks = [e for e in ext if e[2] == "peak"]
    if len(peaks) < 2:
        raise InsufficientOscillationError(
            f"found {len(peaks)} peak(s); need at least 2")
    # center level: mean over a whole number of periods between first/last peak
    lo, hi = peaks[0][0], peaks[-1][0]
    mask = (x >= lo) & (x <= hi)
    c = float(np.trapezoid(ys[mask], x[mask]) / (hi - lo)) if hi > lo else float(
        np.mean(ys))
    periods = [float(b[0] - a[0]) for a, b in zip(peaks, peaks[1:])]
    return c, ext, periods, ys


def detect_waves(series: PSeries, smoothing_window: int | None = None,
                 bootstrap: int = 0, seed: int = 0) -> WaveModel:
    """Locate peaks/troughs of the series against log n and estimate the period.

    Entries with n < 3 are dropped (the seed values are not part of the
    wave). With `bootstrap` > 0, Monte Carlo errors are propagated into the
    extrema by resampling each MC point from Normal(point, stderr).
    """
    ns, vals, errs = series.arrays(min_n=3)
    if len(ns) < 8:
        raise InsufficientOscillationError("series too short")
    x = np.log(ns.astype(np.float64))
    g, y = _uniform_resample(x, vals)
    yc = y - np.mean(y)
    crossings = np.count_nonzero(np.diff(np.sign(yc)) != 0)
    if crossings < 3:
        raise InsufficientOscillationError(
            f"only {crossings} sign changes after centering")
    c, ext, periods, _ = _detect_once(g, y, x, smoothing_window)

    pos_err = {}
    amp_err = {}
    if bootstrap > 0 and np.any(errs > 0):
        rng = np.random.Generator(np.random.Philox(key=[seed, 0xB007]))
        boot_pos: dict[int, list] = {}
        boot_amp: dict[int, list] = {}
        for _ in range(bootstrap):
            vb = vals + rng.standard_normal(len(vals)) * errs
            _, yb = _uniform_resample(x, vb)
            try:
                cb, extb, _, _ = _detect_once(g, yb, x, smoothing_window)
            except InsufficientOscillationError:
                continue
            for i, e in enumerate(ext):
                # match replica extremum nearest in position, same kind
                cand = [eb for eb in extb if eb[2] == e[2]]
                if not cand:
                    continue
                nearest = min(cand, key=lambda eb: abs(eb[0] - e[0]))
                boot_pos.setdefault(i, []).append(nearest[0])
                boot_amp.setdefault(i, []).append(nearest[1] - cb)
        for i in boot_pos:
            if len(boot_pos[i]) >= 2:
                pos_err[i] = float(np.std(boot_pos[i], ddof=1))
                amp_err[i] = float(np.std(boot_amp[i], ddof=1))

    extrema = [
        Extremum(position=p, amplitude=v - c, kind=k,
                 position_err=pos_err.get(i, 0.0),
                 amplitude_err=amp_err.get(i, 0.0))
        for i, (p, v, k) in enumerate(ext)
    ]
    return WaveModel(c=c, extrema=extrema, period_estimates=periods)


def fit_wave_decay(model: WaveModel) -> tuple[float, float]:
    """Fit kappa' in h(M+1) = h(M)(1 - kappa' e^{-M}) from successive peaks.

    Returns (kappa_prime, product_limit) where product_limit extrapolates
    prod_i (1 - kappa' e^{-M_0 - i}); it is positive iff kappa' e^{-M_0} < 1.
    """
    peaks = model.peaks()
    if len(peaks) < 3:
        raise ValueError(f"need >= 3 peaks, got {len(peaks)}")
    M = np.array([p.position for p in peaks])
    h = np.array([p.amplitude for p in peaks])
    ratios = h[1:] / h[:-1]
    if np.any(ratios <= 0):
        bad = [float(M[i]) for i in range(len(ratios)) if ratios[i] <= 0]
        raise WaveDecayModelError(
            f"non-positive amplitude ratio at peak position(s) {bad}")
    e = np.exp(-M[:-1])
    kappa = float(np.sum(e * (1.0 - ratios)) / np.sum(e * e))
    model.kappa_prime = kappa
    M0 = float(M[0])
    if kappa * math.exp(-M0) >= 1.0:
        return kappa, 0.0
    log_prod = 0.0
    i = 0
    while True:
        t = kappa * math.exp(-M0 - i)
        if abs(t) < 1e-18:
            break
        log_prod += math.log1p(-t)
        i += 1
    return kappa, math.exp(log_prod)


def subsequence_probe(series: PSeries, phi: float, tolerance: float) -> SubseqProbe:
    """Entries whose fractional part of log n is within `tolerance` of phi.

    Along such subsequences the series is conjectured to converge; the probe
    only reports the selected points and their weighted dispersion.
    """
    if not 0.0 <= phi < 1.0:
        raise ValueError("phi must lie in [0, 1)")
    ns, vals, errs = series.arrays(min_n=1)
    if len(ns) == 0 or ns.max() / max(1, ns.min()) < 1000:
        raise ValueError("series must span at least 3 decades of n")
    frac = np.log(ns.astype(np.float64)) % 1.0
    dist = np.abs(frac - phi)
    dist = np.minimum(dist, 1.0 - dist)   # circular distance on [0, 1)
    sel = dist <= tolerance
    if np.count_nonzero(sel) < 3:
        raise TooFewPointsError(
            f"only {int(np.count_nonzero(sel))} entries matched phi={phi}")
    pts = [(int(n), float(v), float(e))
           for n, v, e in zip(ns[sel], vals[sel], errs[sel])]
    w = 1.0 / (errs[sel] ** 2 + 1e-12)
    mean = float(np.sum(w * vals[sel]) / np.sum(w))
    disp = float(math.sqrt(np.sum(w * (vals[sel] - mean) ** 2) / np.sum(w)))
    return SubseqProbe(phi=phi, tolerance=tolerance, points=pts, dispersion=disp)
