"""Boundary-degeneration sweeps: lambda along one-parameter families X_t."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import hyperelliptic as hyp
from .errors import DegenerateFit, HypLambdaError, InputError
from .hyperelliptic import curve_from_roots
from .invariants import lambda_slope
from .pipeline import curve_report
from .siegel import log_det_im
from .theta import DEFAULT_EPS

DEFAULT_T0 = 0.1
DEFAULT_Q = 10 ** -0.5
DEFAULT_K = 12
DEFAULT_FIT_POINTS = 6


@dataclass(frozen=True)
class SweepSpec:
    """Family of branch-point configurations degenerating as t -> 0.

    Each cluster of root indices is contracted towards its centroid:
    a_i(t) = c + t (a_i - c).  ``t`` runs through t0 q^k, k = 0..K.
    """

    base_roots: tuple
    clusters: tuple
    t0: float = DEFAULT_T0
    q: float = DEFAULT_Q
    K: int = DEFAULT_K
    fit_points: int = DEFAULT_FIT_POINTS
    precision: str = "double"
    label: str = ""

    def __post_init__(self):
        if not (0 < self.t0 < 1 and 0 < self.q < 1):
            raise InputError("need 0 < t0 < 1 and 0 < q < 1 for a decreasing schedule in (0, 1)")
        if self.K + 1 < 6:
            raise InputError("the schedule needs at least 6 values of t")
        if not 4 <= self.fit_points <= self.K + 1:
            raise InputError("fit_points must lie between 4 and the schedule length")
        if self.precision not in ("double", "extended"):
            raise InputError(f"unknown precision profile {self.precision!r}")
        n = len(self.base_roots)
        seen = set()
        for cl in self.clusters:
            if len(cl) < 2:
                raise InputError("each moving cluster needs at least two roots")
            for i in cl:
                if not 0 <= i < n or i in seen:
                    raise InputError(f"bad or repeated cluster index {i}")
                if hyp._is_inf(self.base_roots[i]):
                    raise InputError("infinity cannot be part of a moving cluster")
                seen.add(i)

    @property
    def schedule(self) -> list[float]:
        return [self.t0 * self.q**k for k in range(self.K + 1)]

    def roots_at(self, t: float) -> list:
        roots = list(self.base_roots)
        for cl in self.clusters:
            c = sum(complex(roots[i]) for i in cl) / len(cl)
            for i in cl:
                roots[i] = c + t * (complex(self.base_roots[i]) - c)
        return roots


def fit_log_slope(series: Sequence[tuple[float, float]], loglog: bool = False) -> tuple[float, float]:
    """Least-squares slope of value against -log t, and r^2.

    With ``loglog`` a log(-log t) column is added to the design; the returned
    slope is still the coefficient of -log t.
    """
    if len(series) < 4:
        raise InputError("need at least 4 points for a slope fit")
    t = np.array([p[0] for p in series], dtype=float)
    y = np.array([p[1] for p in series], dtype=float)
    if np.any(t <= 0):
        raise InputError("t values must be positive")
    if np.ptp(t) == 0:
        raise DegenerateFit("all t values are equal")
    if np.any(np.diff(t) >= 0):
        raise InputError("t values must be strictly decreasing")
    L = -np.log(t)
    cols = [L, np.ones_like(L)]
    if loglog:
        if np.any(L <= 0):
            raise InputError("log(-log t) needs t < 1")
        cols.insert(1, np.log(L))
    X = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(resid @ resid) / ss_tot
    return float(coef[0]), r2


def nearest_rational(x: float, max_den: int) -> tuple[Fraction, float]:
    frac = Fraction(x).limit_denominator(max_den)
    rel = abs(x - float(frac)) / abs(x) if x else abs(float(frac))
    return frac, rel


@dataclass
class SweepRow:
    k: int
    t: float
    log_petersson: float | None = None
    lambda_: float | None = None
    log_det_im: float | None = None
    diagnostics: dict = field(default_factory=dict)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def lambda_theta(self) -> float | None:
        """lambda with the (det Im tau)^{2r} contribution removed."""
        if self.lambda_ is None:
            return None
        g = self.diagnostics["genus"]
        r = math.comb(2 * g + 1, g + 1)
        return self.lambda_ - lambda_slope(g) * 2 * r * self.log_det_im


def _evaluate(spec: SweepSpec, k: int, t: float, eps: float) -> SweepRow:
    curve = curve_from_roots(spec.roots_at(t))
    prec = spec.precision
    for attempt in range(2):
        try:
            if attempt:
                # escalation: higher quadrature cap and extended theta sums
                rep = curve_report(curve, eps, "extended", max_nodes=16 * hyp.MAX_NODES)
            else:
                rep = curve_report(curve, eps, prec)
            d = rep.diagnostics
            return SweepRow(
                k,
                t,
                rep.log_petersson,
                rep.lambda_,
                log_det_im(rep.tau),
                {
                    "genus": curve.g,
                    "quadrature_nodes": d["quadrature_nodes"],
                    "symmetry_residual": d["symmetry_residual"],
                    "min_eigenvalue_im_tau": d["min_eigenvalue_im_tau"],
                    "truncation_radius": d["truncation_radius"],
                    "min_abs_theta": d["min_abs_theta"],
                    "escalated": bool(attempt),
                },
            )
        except HypLambdaError as exc:
            if not exc.numerical or attempt:
                return SweepRow(k, t, diagnostics={"genus": curve.g}, error=f"{exc.kind}: {exc}")
    raise AssertionError("unreachable")


def run_sweep(spec: SweepSpec, eps: float = DEFAULT_EPS, jobs: int = 1) -> list[SweepRow]:
    """Evaluate every t of the schedule; rows come back in schedule order."""
    sched = spec.schedule
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            futures = [pool.submit(_evaluate, spec, k, t, eps) for k, t in enumerate(sched)]
            return [f.result() for f in futures]
    return [_evaluate(spec, k, t, eps) for k, t in enumerate(sched)]


def summarize(spec: SweepSpec, rows: Sequence[SweepRow]) -> dict:
    """Slope fits of lambda against -log t over the last ``fit_points`` values.

    Near a non-separating node log det Im(tau) grows like log(-log t), which
    makes a straight-line fit of lambda drift like 1/log t.  That term is
    known exactly, so ``slope`` fits lambda with it removed (same limit
    slope).  ``slope_linear`` is the plain fit of lambda and ``slope_loglog``
    a fit with a log(-log t) column.
    """
    good = [r for r in rows if r.ok]
    out: dict = {
        "label": spec.label,
        "points": len(rows),
        "failed_points": [r.k for r in rows if not r.ok],
    }
    if len(good) < spec.fit_points:
        out["status"] = "insufficient points"
        return out
    g = good[0].diagnostics["genus"]
    tail = good[-spec.fit_points :]
    slope, r2 = fit_log_slope([(r.t, r.lambda_theta) for r in tail])
    slope_lin, _ = fit_log_slope([(r.t, r.lambda_) for r in tail])
    slope_ll, _ = fit_log_slope([(r.t, r.lambda_) for r in tail], loglog=True)
    mid = len(good) // 2
    halves = [_theta_fit(good[:mid]), _theta_fit(good[mid:])]
    frac, rel = nearest_rational(slope, 8 * g + 4)
    out.update(
        status="ok",
        genus=g,
        fit_window=[tail[0].t, tail[-1].t],
        slope=slope,
        r2=r2,
        slope_linear=slope_lin,
        slope_loglog=slope_ll,
        slope_first_half=halves[0],
        slope_second_half=halves[1],
        half_relative_difference=(
            abs(halves[0] - halves[1]) / max(abs(halves[0]), abs(halves[1])) if None not in halves else None
        ),
        nearest_rational=f"{frac.numerator}/{frac.denominator}",
        nearest_rational_relative_distance=rel,
        monotone_below_t=_monotone_threshold(good),
    )
    return out


def _theta_fit(rows: Sequence[SweepRow]) -> float | None:
    if len(rows) < 4:
        return None
    return fit_log_slope([(r.t, r.lambda_theta) for r in rows])[0]


def _monotone_threshold(rows: Sequence[SweepRow]) -> float | None:
    """Largest t of the final stretch on which lambda increases as t decreases."""
    lam = [r.lambda_ for r in rows]
    start = len(lam) - 1
    while start > 0 and lam[start - 1] < lam[start]:
        start -= 1
    return rows[start].t if start < len(lam) - 1 else None
