"""Quick invariant suites, run by ``hyplambda selftest``.

Each check returns ``(passed, detail)``.  Sizes are small so the whole run
takes a few seconds; the test suite runs the full-size versions.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np

from .discriminant import context, log_petersson_norm
from .hyperelliptic import curve_from_roots, period_matrix_full
from .invariants import ReductionData, lambda_arch, lambda_na, lambda_na_closed, psi_na
from .pipeline import curve_report
from .siegel import random_level2, symplectic_act, validate_siegel
from .theta import ThetaCharacteristic, all_characteristics, parity, theta_constant


def random_reduction(g: int, rng: random.Random, top: int = 5) -> ReductionData:
    return ReductionData(
        g,
        rng.randint(0, top),
        tuple(rng.randint(0, top) for _ in range((g - 1) // 2)),
        tuple(rng.randint(0, top) for _ in range(g // 2)),
    )


def random_siegel(g: int, rng: np.random.Generator):
    x = rng.uniform(-0.5, 0.5, (g, g))
    m = rng.normal(size=(g, g))
    y = m @ m.T / g + 0.6 * np.eye(g)
    return validate_siegel(g, (x + x.T) / 2 + 1j * y)


def random_roots(n: int, rng: np.random.Generator, min_sep: float = 1e-2) -> list[complex]:
    while True:
        z = rng.uniform(-2, 2, n) + 1j * rng.uniform(-2, 2, n)
        d = np.abs(z[:, None] - z[None, :]) + np.eye(n) * 10
        if d.min() > min_sep:
            return list(z)


def check_rational_identity(seed: int, count: int = 20) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = 0
    for g in range(2, 11):
        for _ in range(count):
            d = random_reduction(g, rng)
            bad += lambda_na(d) != lambda_na_closed(d)
    spot = (
        lambda_na(ReductionData(2, 1, (), (0,))) == Fraction(1, 10)
        and psi_na(ReductionData(2, 0, (), (1,))) == Fraction(7, 5)
    )
    return bad == 0 and spot, f"{bad} mismatches over g=2..10"


def check_theta(seed: int) -> tuple[bool, str]:
    one = complex(theta_constant(ThetaCharacteristic.zero(1), validate_siegel(1, [[1j]])))
    worst = 0.0
    for g in (2, 3):
        val = complex(theta_constant(ThetaCharacteristic.zero(g), validate_siegel(g, 1j * np.eye(g))))
        worst = max(worst, abs(val - one**g) / abs(one**g))
    tau = random_siegel(2, np.random.default_rng(seed))
    odd_zero = all(theta_constant(e, tau) == 0 for e in all_characteristics(2) if parity(e) == "odd")
    return worst < 1e-10 and odd_zero, f"diagonal rel err {worst:.2e}"


def check_characteristics() -> tuple[bool, str]:
    ctx = context(2)
    distinct = len({str(c) for c in ctx.characteristics}) == 10
    even = all(parity(c) == "even" for g in range(2, 6) for c in context(g).characteristics)
    return distinct and even, "g=2 distinct even set, g<=5 all even"


def check_level2_invariance(seed: int, count: int = 3) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(count):
        tau = random_siegel(2, rng)
        gamma = random_level2(2, seed + k, 2)
        a = log_petersson_norm(tau)
        b = log_petersson_norm(symplectic_act(gamma, tau))
        worst = max(worst, abs(math.expm1(b - a)))
    return worst < 1e-6, f"max rel diff {worst:.2e}"


def check_periods(seed: int, count: int = 3) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        res = period_matrix_full(curve_from_roots(random_roots(6, rng)))
        worst = max(worst, res.diagnostics["symmetry_residual"])
    return worst < 1e-9, f"max symmetry residual {worst:.2e}"


def check_report(seed: int) -> tuple[bool, str]:
    rep = curve_report(curve_from_roots(random_roots(6, np.random.default_rng(seed))))
    res = abs(lambda_arch(rep.log_petersson, rep.g) - rep.lambda_)
    return res <= 1e-14, f"residual {res:.1e}"


def run_selftest(seed: int = 0) -> dict:
    checks = {
        "rational_identity": lambda: check_rational_identity(seed),
        "theta": lambda: check_theta(seed),
        "characteristics": check_characteristics,
        "level2_invariance": lambda: check_level2_invariance(seed),
        "period_contract": lambda: check_periods(seed),
        "report_consistency": lambda: check_report(seed),
    }
    out = {}
    for name, fn in checks.items():
        ok, detail = fn()
        out[name] = {"passed": bool(ok), "detail": detail}
    return out
