"""Deterministic CSV/JSON emission for series, pmfs and reports.

All writes are atomic (temp file in the target directory, then rename), so a
failed run never leaves a partial file behind. Exact integers are rendered
as decimal strings in JSON; in CSV the numerator/denominator columns are
filled only while they stay below a digit cap (the exact rationals grow to
hundreds of thousands of digits for large n, which no spreadsheet wants).
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

SCHEMA_VERSION = 1
SERIES_HEADER = "n,k,numerator,denominator,value_decimal,err_radius,provenance"
DIGIT_CAP = 400


def atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dec(v: float) -> str:
    return f"{v:.17g}"


def _int_field(x, cap: int = DIGIT_CAP) -> str:
    if x is None:
        return ""
    s = str(x)
    return s if len(s) <= cap else ""


def pseries_csv(series) -> str:
    lines = [f"# problab series schema v{SCHEMA_VERSION}", SERIES_HEADER]
    for e in sorted(series.entries, key=lambda e: e.n):
        lines.append(",".join([
            str(e.n), "", _int_field(e.num), _int_field(e.den),
            _dec(e.value), _dec(e.err), e.provenance,
        ]))
    return "\n".join(lines) + "\n"


def pseries_json(series) -> str:
    rows = [{
        "n": e.n,
        "numerator": None if e.num is None else str(e.num),
        "denominator": None if e.den is None else str(e.den),
        "value": e.value,
        "err_radius": e.err,
        "provenance": e.provenance,
        "flagged": e.flagged,
    } for e in sorted(series.entries, key=lambda e: e.n)]
    return json.dumps({"schema": SCHEMA_VERSION, "kind": "pseries",
                       "entries": rows}, indent=1, sort_keys=True) + "\n"


def pmf_csv(pmf) -> str:
    lines = [f"# problab series schema v{SCHEMA_VERSION}", SERIES_HEADER]
    den = gmpy_float = None
    import gmpy2
    den = gmpy2.mpfr(pmf.denominator, 113)
    for k, w in enumerate(pmf.weights):
        val = float(gmpy2.mpfr(w, 113) / den)
        lines.append(",".join([
            str(pmf.n), str(k), _int_field(int(w)), _int_field(pmf.denominator),
            _dec(val), "0", "exact",
        ]))
    return "\n".join(lines) + "\n"


def pmf_json(pmf) -> str:
    rows = [{"k": k, "weight": str(int(w))} for k, w in enumerate(pmf.weights)]
    return json.dumps({
        "schema": SCHEMA_VERSION, "kind": "survivor_pmf", "n": pmf.n,
        "denominator": str(pmf.denominator), "weights": rows,
    }, indent=1, sort_keys=True) + "\n"


def report_json(kind: str, payload: dict) -> str:
    return json.dumps({"schema": SCHEMA_VERSION, "kind": kind, **payload},
                      indent=1, sort_keys=True, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serialisable: {type(obj)}")


def wave_csv(series, model) -> str:
    """Plot-ready CSV: log_n, p, err, smoothed placeholder, center level."""
    lines = [f"# problab wave schema v{SCHEMA_VERSION}", "log_n,p,err,c"]
    for e in sorted(series.entries, key=lambda e: e.n):
        if e.n < 1:
            continue
        lines.append(",".join([
            _dec(float(np.log(e.n))), _dec(e.value), _dec(e.err), _dec(model.c),
        ]))
    return "\n".join(lines) + "\n"


def wave_json(model) -> str:
    return json.dumps({
        "schema": SCHEMA_VERSION, "kind": "wave_model",
        "c": model.c,
        "kappa_prime": model.kappa_prime,
        "period_estimates": list(model.period_estimates),
        "extrema": [{
            "position": e.position, "amplitude": e.amplitude, "kind": e.kind,
            "position_err": e.position_err, "amplitude_err": e.amplitude_err,
        } for e in model.extrema],
    }, indent=1, sort_keys=True) + "\n"


def paired_sample_csv(sample) -> str:
    lines = ["x,y"]
    for x, y in zip(sample.xs, sample.ys):
        lines.append(f"{x:.17g},{y:.17g}")
    return "\n".join(lines) + "\n"


def read_paired_sample(path: str):
    from .energy import PairedSample
    xs, ys = [], []
    with open(path) as fh:
        for i, line in enumerate(fh):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            a, b = line.split(",")
            if i == 0 and not _is_float(a):
                continue  # header
            xs.append(float(a))
            ys.append(float(b))
    return PairedSample(np.array(xs), np.array(ys))


def _is_float(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False
