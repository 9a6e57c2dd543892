"""Acceptance criteria 1-10.

Each criterion is a function returning ``(passed, detail)``; the pytest
wrappers print one PASS/FAIL line per criterion and then assert.  Also
runnable directly:

    python3 tests/test_acceptance.py
"""

from __future__ import annotations

import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import (  # noqa: E402
    GOLDEN_LAMBDA,
    X5_ROOTS,
    X6_ROOTS,
    direction_ordering,
    random_curve,
    random_moebius,
    random_siegel,
)
from hyplambda.discriminant import context, log_petersson_norm  # noqa: E402
from hyplambda.hyperelliptic import curve_from_roots, moebius, period_matrix_full  # noqa: E402
from hyplambda.invariants import (  # noqa: E402
    ReductionData,
    lambda_arch,
    lambda_na,
    lambda_na_closed,
    psi_na,
    zhang_bound_rhs,
)
from hyplambda.pipeline import curve_report  # noqa: E402
from hyplambda.selftest import random_reduction  # noqa: E402
from hyplambda.siegel import cholesky_im, random_level2, symplectic_act, validate_siegel  # noqa: E402
from hyplambda.sweep import SweepSpec, run_sweep, summarize  # noqa: E402
from hyplambda.theta import (  # noqa: E402
    ThetaCharacteristic,
    all_characteristics,
    even_characteristics,
    parity,
    theta_constant,
)

SEED = 20240611


# --- criteria ----------------------------------------------------------------


def c1_rational_identity():
    rng = random.Random(SEED)
    bad = 0
    for g in range(2, 11):
        for _ in range(200):
            d = random_reduction(g, rng, top=100)
            bad += lambda_na(d) != lambda_na_closed(d)
    return bad == 0, f"{bad} mismatches in 9 x 200 instances"


def c2_spot_values():
    d_xi = ReductionData(2, 1, (), (0,))
    d_delta = ReductionData(2, 0, (), (1,))
    checks = {
        "lambda(xi0=1) = 1/10": lambda_na(d_xi) == Fraction(1, 10),
        "psi(delta1=1) = 7/5": psi_na(d_delta) == Fraction(7, 5),
        "lambda(delta1=1) = 1/5": lambda_na(d_delta) == Fraction(1, 5),
        "bound(delta0=1) = 1/12": zhang_bound_rhs(1, [0], 2, elementary=True) == Fraction(1, 12),
    }
    failed = [k for k, ok in checks.items() if not ok]
    return not failed, "all exact" if not failed else f"failed: {failed}"


def c3_theta():
    one = complex(theta_constant(ThetaCharacteristic.zero(1), validate_siegel(1, [[1j]])))
    diag = 0.0
    for g in (2, 3, 4):
        val = complex(theta_constant(ThetaCharacteristic.zero(g), validate_siegel(g, 1j * np.eye(g))))
        diag = max(diag, abs(val - one**g) / abs(one**g))
    rng = np.random.default_rng(SEED)
    odd_nonzero = 0
    shift = 0.0
    for g in (1, 2, 3, 4):
        for _ in range(5):
            tau = random_siegel(g, rng)
            for eta in all_characteristics(g):
                if parity(eta) == "odd":
                    odd_nonzero += theta_constant(eta, tau) != 0
        tau = random_siegel(g, rng)
        for eta in even_characteristics(g)[:12]:
            m1 = rng.integers(-3, 4, g)
            m2 = rng.integers(-3, 4, g)
            moved = ThetaCharacteristic(
                tuple(x + int(k) for x, k in zip(eta.top, m1)), tuple(x + int(k) for x, k in zip(eta.bottom, m2))
            )
            a = complex(theta_constant(eta, tau)) ** 8
            b = complex(theta_constant(moved, tau)) ** 8
            shift = max(shift, abs(a - b) / abs(a))
    ok = diag <= 1e-10 and odd_nonzero == 0 and shift <= 1e-8
    return ok, f"diagonal rel {diag:.1e}, odd nonzero {odd_nonzero}, shift rel {shift:.1e}"


def c4_characteristics():
    chars = context(2).characteristics
    full = len(set(chars)) == 10 and set(chars) == set(even_characteristics(2))
    odd = sum(parity(e) != "even" for g in range(2, 6) for e in context(g).characteristics)
    return full and odd == 0, f"g=2 full even set: {full}; odd entries for g<=5: {odd}"


def c5_level2_invariance():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for g in (2, 3):
        for k in range(20):
            tau = random_siegel(g, rng)
            gamma = random_level2(g, seed=SEED + 100 * g + k, steps=3)
            a = log_petersson_norm(tau, prec="auto")
            b = log_petersson_norm(symplectic_act(gamma, tau), prec="auto")
            worst = max(worst, abs(math.expm1(b - a)))
    return worst <= 1e-6, f"max relative difference {worst:.1e} over 40 pairs"


def c6_period_contract():
    rng = np.random.default_rng(SEED)
    sym = doubling = 0.0
    pd = True
    for g, count in ((2, 50), (3, 20)):
        for i in range(count):
            c = random_curve(g, rng, with_infinity=i % 3 == 0)
            a = period_matrix_full(c)
            sym = max(sym, a.diagnostics["symmetry_residual"])
            pd &= cholesky_im(a.tau)[1] > 0
            b = period_matrix_full(c, min_nodes=2 * a.diagnostics["quadrature_nodes"])
            for P, Q in ((a.A, b.A), (a.B, b.B)):
                doubling = max(doubling, float(np.max(np.abs(P - Q)) / np.max(np.abs(Q))))
    ok = sym < 1e-9 and pd and doubling < 1e-9
    return ok, f"symmetry {sym:.1e}, Im tau > 0: {pd}, doubling {doubling:.1e}"


def c7_moduli_invariance():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for i, g in enumerate((2, 2, 2, 3, 3)):
        c = random_curve(g, rng, with_infinity=i % 2 == 1)
        ref = curve_report(c).lambda_
        for _ in range(20):
            lam = curve_report(moebius(c, *random_moebius(rng))).lambda_
            worst = max(worst, abs(lam - ref) / abs(ref))
        for angle in rng.uniform(0, 2 * math.pi, 5):
            lam = curve_report(c.with_ordering(direction_ordering(c, angle))).lambda_
            worst = max(worst, abs(lam - ref) / abs(ref))
    return worst <= 1e-6, f"max relative spread {worst:.1e} (5 curves x (20 maps + 5 orderings))"


def c8_golden():
    diffs = {}
    for name, roots in (("x6-1", X6_ROOTS), ("x5-x", X5_ROOTS)):
        diffs[name] = abs(curve_report(curve_from_roots(roots)).lambda_ - GOLDEN_LAMBDA[name])
    return max(diffs.values()) <= 1e-8, ", ".join(f"{k}: |diff| {v:.1e}" for k, v in diffs.items())


SWEEP_A = (-1.3 + 0.2j, -0.4 - 0.5j, 0.1 + 0.7j, 0.9 - 0.2j, 1.6 + 0.4j, 2.2 - 0.6j)
SWEEP_B = (-2.0 - 0.3j, -0.9 + 0.8j, -0.2 - 0.9j, 0.6 + 0.3j, 1.1 - 1.1j, 1.9 + 0.9j)
FAMILIES = {
    "pair-A": (SWEEP_A, ((2, 3),), "pair"),
    "pair-B": (SWEEP_B, ((0, 1),), "pair"),
    "split-A": (SWEEP_A, ((0, 1, 2),), "split"),
    "split-B": (SWEEP_B, ((3, 4, 5),), "split"),
}


def c9_sweeps():
    summaries = {}
    for name, (base, clusters, _) in FAMILIES.items():
        spec = SweepSpec(base, clusters, precision="extended", label=name)
        summaries[name] = summarize(spec, run_sweep(spec))
    if any(s["status"] != "ok" or s["failed_points"] for s in summaries.values()):
        return False, "sweep points failed"
    slope = {k: s["slope"] for k, s in summaries.items()}
    a = max(s["half_relative_difference"] for s in summaries.values())
    rel = lambda x, y: abs(x - y) / max(abs(x), abs(y))  # noqa: E731
    b = max(rel(slope["pair-A"], slope["pair-B"]), rel(slope["split-A"], slope["split-B"]))
    c = max(s["nearest_rational_relative_distance"] for s in summaries.values())
    pair = (slope["pair-A"] + slope["pair-B"]) / 2
    split = (slope["split-A"] + slope["split-B"]) / 2
    d = rel(pair, split)
    ok = a <= 0.02 and b <= 0.02 and c <= 0.02 and d > 0.04
    rationals = {k: s["nearest_rational"] for k, s in summaries.items()}
    detail = (
        f"slopes pair {pair:.6f} split {split:.6f}; (a) halves {a:.1e} (b) families {b:.1e} "
        f"(c) rational {c:.1e} {sorted(set(rationals.values()))} (d) type gap {d:.2f}"
    )
    return ok, detail


def c10_report_invariant():
    rng = np.random.default_rng(SEED)
    curves = [curve_from_roots(X6_ROOTS), curve_from_roots(X5_ROOTS)]
    curves += [random_curve(g, rng, with_infinity=i % 2 == 0) for i, g in enumerate([2] * 10 + [3] * 6 + [4] * 4)]
    spec = SweepSpec(SWEEP_A, ((2, 3),))
    curves += [curve_from_roots(spec.roots_at(t)) for t in spec.schedule[::3]]
    worst = 0.0
    for c in curves:
        rep = curve_report(c)
        worst = max(worst, abs(lambda_arch(rep.log_petersson, rep.g) - rep.lambda_), rep.consistency_residual())
    return worst <= 1e-14, f"max |lambda - lambda(log||Delta||)| = {worst:.1e} over {len(curves)} reports"


# number, function, runtime budget in seconds
CRITERIA = [
    (1, c1_rational_identity, 1.0),
    (2, c2_spot_values, None),
    (3, c3_theta, 10.0),
    (4, c4_characteristics, 5.0),
    (5, c5_level2_invariance, 60.0),
    (6, c6_period_contract, 300.0),
    (7, c7_moduli_invariance, 300.0),
    (8, c8_golden, None),
    (9, c9_sweeps, 900.0),
    (10, c10_report_invariant, None),
]


def evaluate(number, fn, budget):
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    in_time = budget is None or elapsed < budget
    limit = f" < {budget:g}s" if budget else ""
    line = f"{'PASS' if ok and in_time else 'FAIL'} criterion {number:2d}: {detail} [{elapsed:.2f}s{limit}]"
    return ok and in_time, line


@pytest.mark.parametrize("number,fn,budget", CRITERIA, ids=[f"criterion{n}" for n, _, _ in CRITERIA])
def test_criterion(number, fn, budget, capsys):
    ok, line = evaluate(number, fn, budget)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
