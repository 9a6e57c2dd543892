from fractions import Fraction

import mpmath
import numpy as np
import pytest

from hyplambda.errors import InputError, PrecisionExhausted
from hyplambda.siegel import validate_siegel
from hyplambda.theta import (
    ThetaCharacteristic,
    all_characteristics,
    even_characteristics,
    lattice_points,
    parity,
    tail_bound,
    theta_constant,
    theta_constants,
    truncation_radius,
)

from conftest import random_siegel

H = Fraction(1, 2)


def mp_theta_1d(tau, a=0, b=0, N=30):
    """Direct sum over |n| <= N at 30 digits."""
    with mpmath.workdps(30):
        tau = mpmath.mpc(tau)
        return sum(
            mpmath.exp(mpmath.pi * 1j * (tau * (n + a) ** 2 + 2 * (n + a) * b)) for n in range(-N, N + 1)
        )


class TestCharacteristics:
    def test_zero_even(self):
        assert parity(ThetaCharacteristic.zero(3)) == "even"

    def test_genus_one_odd(self):
        assert parity(ThetaCharacteristic((H,), (H,))) == "odd"

    def test_genus_two_all_halves_even(self):
        assert parity(ThetaCharacteristic((H, H), (H, H))) == "even"

    @pytest.mark.parametrize("g,even", [(1, 3), (2, 10), (3, 36), (4, 136)])
    def test_even_counts(self, g, even):
        assert len(all_characteristics(g)) == 4**g
        assert len(even_characteristics(g)) == even

    def test_rejects_non_half_integers(self):
        with pytest.raises(InputError):
            ThetaCharacteristic((Fraction(1, 3),), (0,))

    def test_sum_reduces(self):
        a = ThetaCharacteristic((H, 0), (H, H))
        assert a + a == ThetaCharacteristic.zero(2)
        assert str(ThetaCharacteristic((H, 0), (0, H))) == "[10/01]"


class TestTruncation:
    def test_radius_tight(self):
        tau = validate_siegel(1, [[1j]])
        R = truncation_radius(tau, 1e-15)
        assert 3.5 < R < 5.0
        eta = ThetaCharacteristic.zero(1)
        v1 = complex(theta_constants([eta], tau, 1e-12, radius=R)[0])
        v2 = complex(theta_constants([eta], tau, 1e-12, radius=2 * R)[0])
        assert abs(v1 - v2) < 1e-15

    def test_radius_diagonal_matches_genus_one(self):
        R1 = truncation_radius(validate_siegel(1, [[1j]]), 1e-15)
        R3 = truncation_radius(validate_siegel(3, 1j * np.eye(3)), 1e-15)
        assert R1 <= R3 < R1 + 1.0

    def test_loose_tolerance(self):
        tau = validate_siegel(1, [[1j]])
        R = truncation_radius(tau, 0.5)
        assert R < 2 and tail_bound(R, 1.0, 1) <= 0.5

    def test_bound_dominates_actual_tail(self, rng):
        tau = random_siegel(2, rng)
        eps = 1e-6
        R = truncation_radius(tau, eps)
        full = complex(theta_constants([ThetaCharacteristic.zero(2)], tau, 1e-12, radius=2 * R)[0])
        cut = complex(theta_constants([ThetaCharacteristic.zero(2)], tau, 1e-12, radius=R)[0])
        assert abs(full - cut) <= eps

    def test_lattice_points_inside_ellipsoid(self, rng):
        tau = random_siegel(3, rng)
        R = 2.5
        v = lattice_points(tau, [0.5, 0, 0.5], R)
        L = np.linalg.cholesky(tau.imag)
        q = np.einsum("ij,nj->ni", L.T, v)
        assert np.all(np.linalg.norm(q, axis=1) <= R + 1e-12)
        # all integer points in a generous cube that lie inside are enumerated
        grid = np.stack(np.meshgrid(*[np.arange(-8, 9)] * 3, indexing="ij"), -1).reshape(-1, 3) + [0.5, 0, 0.5]
        inside = np.linalg.norm(grid @ L, axis=1) <= R
        assert inside.sum() == len(v)


class TestValues:
    def test_genus_one_oracle(self):
        val = complex(theta_constant(ThetaCharacteristic.zero(1), validate_siegel(1, [[1j]])))
        ref = complex(mp_theta_1d(1j))
        assert abs(val - ref) < 1e-14
        closed = mpmath.pi ** 0.25 / mpmath.gamma(0.75)
        assert abs(val - float(closed)) < 1e-14

    @pytest.mark.parametrize("a,b", [(0, H), (H, 0)])
    def test_genus_one_characteristics(self, a, b):
        tau = 0.3 + 0.8j
        val = complex(theta_constant(ThetaCharacteristic((a,), (b,)), validate_siegel(1, [[tau]])))
        assert abs(val - complex(mp_theta_1d(tau, float(a), float(b)))) < 1e-13

    @pytest.mark.parametrize("g", [2, 3, 4])
    def test_diagonal_factorizes(self, g):
        taus = [1j, 0.2 + 1.3j, -0.4 + 0.8j, 0.1 + 2.0j][:g]
        val = complex(theta_constant(ThetaCharacteristic.zero(g), validate_siegel(g, np.diag(taus))))
        ref = np.prod([complex(mp_theta_1d(t)) for t in taus])
        assert abs(val - ref) / abs(ref) < 1e-10

    def test_odd_vanish_exactly(self, rng):
        for g in (1, 2, 3):
            tau = random_siegel(g, rng)
            for eta in all_characteristics(g):
                if parity(eta) == "odd":
                    assert theta_constant(eta, tau) == 0

    def test_integer_shift_eighth_power(self, rng):
        tau = random_siegel(2, rng)
        for eta in even_characteristics(2):
            shifted = ThetaCharacteristic(
                tuple(x + m for x, m in zip(eta.top, (1, -2))), tuple(x + m for x, m in zip(eta.bottom, (3, 1)))
            )
            a = complex(theta_constant(eta, tau)) ** 8
            b = complex(theta_constant(shifted, tau)) ** 8
            assert abs(a - b) <= 1e-8 * abs(a)

    def test_eps_refinement(self, rng):
        tau = random_siegel(3, rng)
        eta = ThetaCharacteristic((H, 0, H), (0, H, H))
        for eps in (1e-6, 1e-9):
            a = complex(theta_constant(eta, tau, eps))
            b = complex(theta_constant(eta, tau, eps / 100))
            assert abs(a - b) <= 2 * eps

    def test_extended_matches_double(self, rng):
        tau = random_siegel(2, rng)
        eta = ThetaCharacteristic((H, 0), (0, 0))
        a = complex(theta_constant(eta, tau))
        b = theta_constant(eta, tau, prec="extended")
        assert isinstance(b, mpmath.mpc)
        assert abs(a - complex(b)) < 1e-12

    def test_precision_exhausted(self):
        # a very small imaginary part makes the double-precision floor exceed eps
        tau = validate_siegel(1, [[0.5 + 1e-3j]])
        with pytest.raises(PrecisionExhausted):
            theta_constant(ThetaCharacteristic.zero(1), tau, 1e-14)

    def test_tolerance_bounds(self):
        with pytest.raises(InputError):
            theta_constant(ThetaCharacteristic.zero(1), validate_siegel(1, [[1j]]), 0.5)
