"""Curve -> period matrix -> ||Delta_g|| -> lambda."""

from __future__ import annotations

from . import hyperelliptic as hyp
from . import theta as th
from .discriminant import context, discriminant
from .errors import PrecisionExhausted
from .hyperelliptic import HyperellipticCurve, period_matrix_full
from .invariants import InvariantReport, lambda_arch, phi_from_lambda
from .siegel import cholesky_im, log_det_im


def tolerance_settings(eps: float, prec: str) -> dict:
    """Every numerical knob that influences a report, for the reproducibility header."""
    return {
        "theta_eps": eps,
        "precision": prec,
        "extended_dps": th.EXTENDED_DPS,
        "quadrature_rtol": hyp.QUAD_RTOL,
        "quadrature_min_nodes": hyp.MIN_NODES,
        "quadrature_max_nodes": hyp.MAX_NODES,
        "max_a_period_condition": hyp.MAX_A_COND,
        "lambda_constant_offset": 0.0,
    }


def curve_report(
    curve: HyperellipticCurve,
    eps: float = th.DEFAULT_EPS,
    prec: str = "double",
    delta_F: float | None = None,
    offset: float = 0.0,
    max_nodes: int | None = None,
) -> InvariantReport:
    periods = period_matrix_full(curve, max_nodes=max_nodes or hyp.MAX_NODES)
    tau = periods.tau
    used_prec = prec
    try:
        disc = discriminant(tau, eps, prec)
    except PrecisionExhausted:
        if prec != "double":
            raise
        used_prec = "extended"
        disc = discriminant(tau, eps, used_prec)
    r = context(curve.g).r
    log_norm = 2 * r * log_det_im(tau) + disc.log_abs
    lam = lambda_arch(log_norm, curve.g, offset)
    _, lam_min = cholesky_im(tau)
    diagnostics = dict(periods.diagnostics)
    diagnostics.update(
        truncation_radius=th.truncation_radius(tau, eps),
        min_eigenvalue_im_tau=lam_min,
        min_abs_theta=disc.min_abs_theta,
        delta_in_log_space=disc.used_log_space,
        theta_precision_used=used_prec,
        # each theta carries at most eps absolute error; the product of |T| 8th powers
        # inherits at most 8 |T| eps / min|theta| relative error
        delta_relative_error_bound=8 * r * eps / disc.min_abs_theta if disc.min_abs_theta else None,
        settings=tolerance_settings(eps, prec),
    )
    settings = diagnostics["settings"]
    settings["lambda_constant_offset"] = offset
    report = InvariantReport(curve.g, lam, log_norm, tau, diagnostics, offset=offset)
    if delta_F is not None:
        report.phi = phi_from_lambda(lam, delta_F, curve.g)
        report.delta_F = delta_F
    return report
