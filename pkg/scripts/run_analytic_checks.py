#!/usr/bin/env python3
"""Run every analytic verification and print a one-line verdict per check.

Covers the functional-equation models (two solutions, two non-solutions),
the exponent probe, the characteristic-function counterexample (modulus
factorization, Polya-type criteria, inverse-Fourier nonnegativity, the
Cauchy identity) and the dependent-but-uncorrelated density demo.

Runtime is about a minute at the defaults; exits nonzero if any check
fails.
"""

import argparse
import sys
import time

import numpy as np

from problab import analytic, energy


def line(name: str, ok: bool, detail: str) -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=20240416)
    ap.add_argument("--demo-m", type=int, default=4000)
    args = ap.parse_args()
    ok = True
    t0 = time.time()

    u = np.linspace(-6.0, 6.0, 121)
    for name in ("exponential", "normal_half_var"):
        m = analytic.density_model(name)
        r = analytic.feq_residual_grid(m, u, u)
        ok &= line(f"feq/{name}", r < 1e-10, f"max residual {r:.3g}")
    lap = analytic.density_model("laplace")
    r = analytic.feq_residual(lap, 0.0, 2.0)
    ok &= line("feq/laplace", r > 1e-2, f"residual at (0,2) = {r:.6f}")
    lhs, rhs = analytic.half_normal_violation(0.5, 1.0)
    ok &= line("feq/half_normal", lhs == 0.0 and rhs > 0.0,
               f"lhs {lhs:.3g} vs rhs {rhs:.3g} at (0.5,1)")

    ug = np.linspace(2.0, 101.0, 100)
    s1 = analytic.alpha_probe(1.0, 1.0, -1.0, 1.0, ug)
    s2 = analytic.alpha_probe(2.0, 1.0 / np.sqrt(2.0), 0.0, 1.0, ug)
    s15 = analytic.alpha_probe(1.5, 1.0, -1.0, 1.0, ug)
    ok &= line("alpha probe", s1 < 1e-10 and s2 < 1e-10 and s15 > 0.1,
               f"spreads a=1:{s1:.2g} a=2:{s2:.2g} a=1.5:{s15:.2g}")

    rng = np.random.Generator(np.random.Philox(key=[args.seed, 0xCF]))
    pts = rng.uniform(-10, 10, (10_000, 2))
    dev = max(analytic.cf_modulus_identity(float(t), float(s)) for t, s in pts)
    ok &= line("cf modulus identity", dev < 1e-14, f"max deviation {dev:.3g}")

    grid = np.arange(0.0, 20.0 + 1e-9, 1e-3)
    for y in (0.1, 1.0, 10.0):
        rep = analytic.polya_check(y, grid)
        ok &= line(f"polya y={y}", rep["passed"],
                   f"first failure {rep['first_failure']}")

    x = np.linspace(-20.0, 20.0, 401)
    for y in (-1.0, 0.1, 1.0, 10.0):
        gf = analytic.inverse_fourier_nonneg(y, x)
        ok &= line(f"inverse Fourier y={y}",
                   gf.meta["min_value"] >= -1e-8,
                   f"min {gf.meta['min_value']:.3g}, "
                   f"certified error {gf.meta['error_bound']:.3g}")

    for w in (0.0, 1.0, 2.0):
        e = analytic.cauchy_cf_identity(w)
        ok &= line(f"cauchy identity w={w}", e < 1e-6, f"error {e:.3g}")

    s = energy.sample_intro_density(args.demo_m, args.seed)
    cov = energy.cov_sym_abs_diff(s)
    se = energy.bootstrap_cov_stderr(s, seed=args.seed)
    oracle = energy.intro_cov_quadrature()
    sub = energy.PairedSample(s.xs[:1500], s.ys[:1500])
    p = energy.perm_test_dcor(sub, 499, args.seed)
    ok &= line("demo density", abs(cov) <= 4 * se and p < 0.05,
               f"cov {cov:.2g} +- {se:.2g} (oracle {oracle:.2g}), "
               f"dependence p = {p:.3f}")

    print(f"total {time.time() - t0:.1f}s")
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
