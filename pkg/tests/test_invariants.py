import math
import random
from fractions import Fraction

import pytest

from hyplambda.errors import InputError, MissingConstant
from hyplambda.hyperelliptic import curve_from_roots, moebius
from hyplambda.invariants import (
    LOG_2PI,
    ReductionData,
    height_decomposition,
    lambda_arch,
    lambda_from_phi,
    lambda_na,
    lambda_na_closed,
    lambda_slope,
    phi_from_lambda,
    phi_hyperelliptic,
    psi_na,
    zhang_bound_rhs,
)
from hyplambda.pipeline import curve_report
from hyplambda.selftest import random_reduction

from conftest import GOLDEN_LAMBDA, X5_ROOTS, X6_ROOTS, direction_ordering, random_curve, random_moebius


def red(g, xi0=0, xi=None, delta=None):
    return ReductionData(g, xi0, tuple(xi or [0] * ((g - 1) // 2)), tuple(delta or [0] * (g // 2)))


class TestArchimedean:
    def test_unit_norm(self):
        assert lambda_arch(0.0, 2) == pytest.approx(-2 * LOG_2PI)
        assert lambda_arch(0.0, 2) == pytest.approx(-3.675754132818691)

    def test_genus_two_formula(self):
        x = -37.5
        assert lambda_arch(x, 2) == pytest.approx(-2 * LOG_2PI - 2 * x / 80, abs=1e-15)

    def test_slope(self):
        for g in range(2, 8):
            assert lambda_arch(1.0, g) - lambda_arch(0.0, g) == pytest.approx(lambda_slope(g), abs=1e-14)

    def test_offset(self):
        assert lambda_arch(-3.0, 3, offset=0.25) == pytest.approx(lambda_arch(-3.0, 3) + 0.25)

    def test_phi_zero(self):
        delta_F = 7.3
        assert phi_from_lambda((delta_F - 4 * 2 * LOG_2PI) / 12, delta_F, 2) == pytest.approx(0, abs=1e-14)

    def test_phi_prefactor_genus_two(self):
        assert phi_from_lambda(1.0, 4 * 2 * LOG_2PI, 2) == pytest.approx(30.0)

    def test_phi_round_trip(self):
        rng = random.Random(3)
        for _ in range(100):
            g = rng.randint(2, 9)
            phi, dF = rng.uniform(-50, 50), rng.uniform(-50, 50)
            assert phi_from_lambda(lambda_from_phi(phi, dF, g), dF, g) == pytest.approx(phi, abs=1e-12)

    def test_phi_hyperelliptic_agrees(self):
        for g in (2, 3, 5):
            for logn, dF in ((-40.0, 3.0), (-100.0, -8.5)):
                lam = lambda_arch(logn, g)
                assert phi_hyperelliptic(logn, dF, g) == pytest.approx(phi_from_lambda(lam, dF, g), rel=1e-12)


class TestNonArchimedean:
    def test_zero(self):
        d = red(4)
        assert psi_na(d) == lambda_na(d) == lambda_na_closed(d) == 0

    def test_genus_two_xi0(self):
        d = red(2, xi0=1)
        assert psi_na(d) == Fraction(1, 5)
        assert lambda_na(d) == Fraction(1, 10) == lambda_na_closed(d)

    def test_genus_two_delta1(self):
        d = red(2, delta=[1])
        assert psi_na(d) == Fraction(7, 5)
        assert lambda_na(d) == Fraction(1, 5)

    def test_genus_three_delta1(self):
        d = red(3, delta=[1])
        assert psi_na(d) == Fraction(17, 7)
        assert lambda_na(d) == Fraction(2, 7) == lambda_na_closed(d)

    def test_genus_four_xi1(self):
        assert lambda_na_closed(red(4, xi=[1])) == Fraction(1, 3)

    def test_total_delta(self):
        assert red(5, xi0=2, xi=[1, 3], delta=[1, 1]).total_delta == 2 + 8 + 2

    @pytest.mark.parametrize("g", range(2, 11))
    def test_closed_form_identity(self, g):
        rng = random.Random(1000 + g)
        for _ in range(200):
            d = random_reduction(g, rng, top=50)
            assert lambda_na(d) == lambda_na_closed(d)

    @pytest.mark.parametrize(
        "args",
        [(2, -1, (), (0,)), (2, 0, (1,), (0,)), (3, 0, (), (0,)), (2, 0, (), (1.5,)), (1, 0, (), ())],
    )
    def test_validation(self, args):
        with pytest.raises(InputError):
            ReductionData(*args)


class TestBounds:
    def test_elementary_constant(self):
        assert zhang_bound_rhs(1, [0], 2) == Fraction(1, 12)

    def test_separating_term(self):
        assert zhang_bound_rhs(0, [1], 2) == 1

    def test_zero(self):
        assert zhang_bound_rhs(0, [0, 0], 5) == 0

    def test_missing_constant(self):
        with pytest.raises(MissingConstant):
            zhang_bound_rhs(1, [0], 2, elementary=False)
        assert zhang_bound_rhs(2, [0], 2, elementary=False, c=Fraction(1, 7)) == Fraction(2, 7)

    def test_height(self):
        assert height_decomposition(0.0, [], 2) == 0
        assert height_decomposition(0.0, [(0.1, math.log(2))], 2) == pytest.approx(0.0693147180559945)
        assert height_decomposition(30.0, [], 2) == pytest.approx(1.0)
        with pytest.raises(InputError):
            height_decomposition(0.0, [(0.1, 0.0)], 2)


class TestReports:
    @pytest.mark.parametrize("name,roots", [("x6-1", X6_ROOTS), ("x5-x", X5_ROOTS)])
    def test_golden(self, name, roots):
        assert curve_report(curve_from_roots(roots)).lambda_ == pytest.approx(GOLDEN_LAMBDA[name], abs=1e-8)

    def test_consistency_and_diagnostics(self, rng):
        rep = curve_report(random_curve(3, rng), delta_F=2.0)
        assert rep.consistency_residual() <= 1e-14
        for key in ("truncation_radius", "symmetry_residual", "min_eigenvalue_im_tau", "settings"):
            assert key in rep.diagnostics
        assert rep.phi == pytest.approx(phi_from_lambda(rep.lambda_, 2.0, 3))

    def test_moebius_and_reordering(self, rng):
        c = random_curve(2, rng, with_infinity=True)
        ref = curve_report(c).lambda_
        for _ in range(3):
            assert curve_report(moebius(c, *random_moebius(rng))).lambda_ == pytest.approx(ref, rel=1e-6)
        for angle in (0.3, 1.9, 4.0):
            assert curve_report(c.with_ordering(direction_ordering(c, angle))).lambda_ == pytest.approx(ref, rel=1e-6)
