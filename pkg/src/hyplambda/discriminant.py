"""The discriminant modular form Delta_g and its Petersson norm.

Delta_g(tau) = 2^{-(4g+4)n} prod_{T} theta[eta_{T o U}](0, tau)^8, the product
running over the (g+1)-subsets T of {1, ..., 2g+1}, U = {1, 3, ..., 2g+1} and
``o`` the symmetric difference.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import IndexOutOfRange, InputError, PrecisionExhausted
from .siegel import SiegelPoint, log_det_im
from .theta import DEFAULT_EPS, ThetaCharacteristic, parity, theta_constants

_H = Fraction(1, 2)
_Z = Fraction(0)
# below this modulus a theta factor is accumulated in log space only
LOG_SPACE_THRESHOLD = 1e-8


def eta_base(g: int, k: int) -> ThetaCharacteristic:
    """Characteristic eta_k attached to the k-th branch point, 1 <= k <= 2g+2.

    eta_{2m-1} = [e_m/2 ; (1/2)^{m-1} 0...], eta_{2m} = [e_m/2 ; (1/2)^m 0...]
    for m <= g, eta_{2g+1} = [0 ; (1/2,...,1/2)] and eta_{2g+2} = 0.
    """
    if g < 1:
        raise InputError("genus must be positive")
    if not 1 <= k <= 2 * g + 2:
        raise IndexOutOfRange(f"branch index {k} outside 1..{2 * g + 2}")
    if k == 2 * g + 2:
        return ThetaCharacteristic.zero(g)
    if k == 2 * g + 1:
        return ThetaCharacteristic((_Z,) * g, (_H,) * g)
    m, odd = (k + 1) // 2, k % 2 == 1
    halves = m - 1 if odd else m
    top = tuple(_H if i == m - 1 else _Z for i in range(g))
    bottom = tuple(_H if i < halves else _Z for i in range(g))
    return ThetaCharacteristic(top, bottom)


def eta_subset(g: int, S: Iterable[int]) -> ThetaCharacteristic:
    """eta_S = sum of eta_k over k in S, reduced mod 1."""
    S = list(S)
    if len(set(S)) != len(S):
        raise InputError(f"index set {S} has repeated entries")
    acc = ThetaCharacteristic.zero(g)
    for k in S:
        acc = acc + eta_base(g, k)
    return acc


@dataclass(frozen=True)
class DiscriminantContext:
    g: int
    n: int = field(init=False)
    r: int = field(init=False)
    U: frozenset = field(init=False)
    T_list: tuple = field(init=False, repr=False)
    characteristics: tuple = field(init=False, repr=False)

    def __post_init__(self):
        g = self.g
        if g < 2:
            raise InputError("the discriminant form needs genus >= 2")
        U = frozenset(range(1, 2 * g + 2, 2))
        T_list = tuple(frozenset(T) for T in combinations(range(1, 2 * g + 2), g + 1))
        chars = tuple(eta_subset(g, sorted(T ^ U)) for T in T_list)
        object.__setattr__(self, "n", math.comb(2 * g, g + 1))
        object.__setattr__(self, "r", math.comb(2 * g + 1, g + 1))
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "T_list", T_list)
        object.__setattr__(self, "characteristics", chars)

    @property
    def log_prefactor(self) -> float:
        """log of 2^{-(4g+4)n}."""
        return -(4 * self.g + 4) * self.n * math.log(2.0)


@lru_cache(maxsize=None)
def context(g: int) -> DiscriminantContext:
    ctx = DiscriminantContext(g)
    bad = [str(eta) for eta in ctx.characteristics if parity(eta) != "even"]
    if bad:
        raise AssertionError(f"odd characteristics in the genus-{g} product: {bad}")
    return ctx


@dataclass(frozen=True)
class DiscriminantValue:
    """Delta_g(tau) kept in log form: Delta = exp(log_abs + i arg)."""

    g: int
    log_abs: float
    arg: float
    thetas: tuple
    min_abs_theta: float
    used_log_space: bool

    @property
    def value(self) -> complex:
        return cmath.rect(math.exp(self.log_abs), self.arg) if self.log_abs > -745 else 0j


def discriminant(tau: SiegelPoint, eps: float = DEFAULT_EPS, prec: str = "double") -> DiscriminantValue:
    """Delta_g(tau) in log form.  ``prec='auto'`` retries in extended precision
    when double precision cannot reach ``eps``."""
    if prec == "auto":
        try:
            return discriminant(tau, eps, "double")
        except PrecisionExhausted:
            return discriminant(tau, eps, "extended")
    ctx = context(tau.g)
    thetas = theta_constants(ctx.characteristics, tau, eps, prec)
    mods = [abs(complex(t)) for t in thetas]
    min_abs = min(mods)
    if min_abs == 0.0:
        return DiscriminantValue(tau.g, -math.inf, 0.0, tuple(thetas), 0.0, True)
    log_abs = ctx.log_prefactor + 8 * sum(math.log(m) for m in mods)
    arg = math.remainder(8 * sum(cmath.phase(complex(t)) for t in thetas), 2 * math.pi)
    return DiscriminantValue(tau.g, log_abs, arg, tuple(thetas), min_abs, min_abs < LOG_SPACE_THRESHOLD)


def discriminant_form(tau: SiegelPoint, eps: float = DEFAULT_EPS, prec: str = "double") -> complex:
    """Delta_g(tau); underflows to 0 near the boundary, use :func:`discriminant` there."""
    ctx = context(tau.g)
    d = discriminant(tau, eps, prec)
    if d.used_log_space:
        return d.value
    thetas = np.array([complex(t) for t in d.thetas])
    return complex(np.exp(ctx.log_prefactor) * np.prod(thetas**8))


def log_petersson_norm(tau: SiegelPoint, eps: float = DEFAULT_EPS, prec: str = "double") -> float:
    """log ||Delta_g||(tau) = 2r log det Im(tau) + log |Delta_g(tau)|."""
    ctx = context(tau.g)
    return 2 * ctx.r * log_det_im(tau) + discriminant(tau, eps, prec).log_abs


def petersson_norm(tau: SiegelPoint, eps: float = DEFAULT_EPS, prec: str = "double") -> float:
    return math.exp(log_petersson_norm(tau, eps, prec))
