"""Theta constants with half-integer characteristics.

theta[eta](0, tau) = sum_n exp(pi i (n+a)^T tau (n+a) + 2 pi i (n+a)^T b),
with eta = [a; b].  The sum runs over the lattice points inside an ellipsoid
whose radius carries a rigorous tail bound.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import mpmath
import numpy as np
from scipy.special import gammaincc, gammaln

from .errors import InputError, PrecisionExhausted
from .siegel import SiegelPoint, cholesky_im

DEFAULT_EPS = 1e-12
EXTENDED_DPS = 40
_HALF = Fraction(1, 2)


def _half_integer(x) -> Fraction:
    f = Fraction(x).limit_denominator(2) if isinstance(x, float) else Fraction(x)
    if (2 * f).denominator != 1:
        raise InputError(f"characteristic entry {x!r} is not a half-integer")
    return f


@dataclass(frozen=True)
class ThetaCharacteristic:
    """Pair (top, bottom) of half-integer vectors.

    Entries are kept as given (exact ``Fraction``); :meth:`reduced` maps them
    into {0, 1/2}.  Shifting by integers changes theta only by a root of unity.
    """

    top: tuple[Fraction, ...]
    bottom: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.top) != len(self.bottom):
            raise InputError("top and bottom rows must have equal length")
        object.__setattr__(self, "top", tuple(_half_integer(x) for x in self.top))
        object.__setattr__(self, "bottom", tuple(_half_integer(x) for x in self.bottom))

    @classmethod
    def from_bits(cls, top_bits: Sequence[int], bottom_bits: Sequence[int]) -> ThetaCharacteristic:
        return cls(tuple(Fraction(b, 2) for b in top_bits), tuple(Fraction(b, 2) for b in bottom_bits))

    @classmethod
    def zero(cls, g: int) -> ThetaCharacteristic:
        return cls((Fraction(0),) * g, (Fraction(0),) * g)

    @property
    def g(self) -> int:
        return len(self.top)

    def reduced(self) -> ThetaCharacteristic:
        return ThetaCharacteristic(tuple(x % 1 for x in self.top), tuple(x % 1 for x in self.bottom))

    def bits(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        r = self.reduced()
        return tuple(int(2 * x) for x in r.top), tuple(int(2 * x) for x in r.bottom)

    def __add__(self, other: ThetaCharacteristic) -> ThetaCharacteristic:
        """Sum reduced mod 1."""
        top = tuple((x + y) % 1 for x, y in zip(self.top, other.top))
        bottom = tuple((x + y) % 1 for x, y in zip(self.bottom, other.bottom))
        return ThetaCharacteristic(top, bottom)

    def __str__(self) -> str:
        t, b = self.bits()
        return "[" + "".join(map(str, t)) + "/" + "".join(map(str, b)) + "]"


def parity(eta: ThetaCharacteristic) -> str:
    """'even' or 'odd' according to the sign (-1)^(4 a.b)."""
    s = 4 * sum((x * y for x, y in zip(eta.top, eta.bottom)), Fraction(0))
    return "even" if s.numerator % 2 == 0 else "odd"


def all_characteristics(g: int) -> list[ThetaCharacteristic]:
    bits = list(product((0, 1), repeat=g))
    return [ThetaCharacteristic.from_bits(t, b) for t in bits for b in bits]


def even_characteristics(g: int) -> list[ThetaCharacteristic]:
    return [eta for eta in all_characteristics(g) if parity(eta) == "even"]


# --- truncation ------------------------------------------------------------


def tail_bound(radius: float, rho: float, g: int) -> float:
    """Upper bound for sum over |x| > radius of exp(-pi |x|^2), x in a shifted lattice.

    ``rho`` is a lower bound for the minimal distance between lattice points.
    Balls of radius rho/2 around the points are disjoint, so the sum is
    dominated by g (2/rho)^g * int_{R-rho}^inf (s + rho/2)^(g-1) exp(-pi s^2) ds.
    """
    if radius < rho:
        return math.inf
    b = radius - rho
    a = rho / 2
    total = 0.0
    for k in range(g):
        # int_b^inf s^k e^{-pi s^2} ds = Gamma((k+1)/2, pi b^2) / (2 pi^((k+1)/2))
        s = (k + 1) / 2
        moment = math.exp(gammaln(s) - s * math.log(math.pi)) * gammaincc(s, math.pi * b * b) / 2
        total += math.comb(g - 1, k) * a ** (g - 1 - k) * moment
    return g * (2 / rho) ** g * total


def truncation_radius(tau: SiegelPoint, eps: float) -> float:
    """Radius R (in the metric x -> |L^T x|) whose neglected tail is provably <= eps."""
    if not 0 < eps < 1:
        raise InputError("eps must lie in (0, 1)")
    _, lam_min = cholesky_im(tau)
    rho = math.sqrt(lam_min)
    radius = max(math.sqrt(-math.log(eps) / math.pi), rho)
    step = 0.02 * max(1.0, radius)
    while tail_bound(radius, rho, tau.g) > eps:
        radius += step
    return radius


def lattice_points(tau: SiegelPoint, shift: Sequence[float], radius: float) -> np.ndarray:
    """All v in Z^g + shift with v^T Im(tau) v <= radius^2, as an (N, g) float array."""
    g = tau.g
    L, _ = cholesky_im(tau)
    U = L.T  # v^T Y v = |U v|^2, U upper triangular
    shift = np.asarray(shift, dtype=float)
    r2 = radius * radius
    # rows: partially fixed coordinates i..g-1, processed from the last one down
    pts = np.zeros((1, 0))
    budget = np.array([r2])
    for i in range(g - 1, -1, -1):
        u_ii = U[i, i]
        offset = pts @ U[i, i + 1 :] if pts.shape[1] else np.zeros(len(pts))
        centre = -offset / u_ii
        half = np.sqrt(np.maximum(budget, 0.0)) / u_ii
        lo = np.ceil(centre - half - shift[i]).astype(np.int64)
        hi = np.floor(centre + half - shift[i]).astype(np.int64)
        counts = np.maximum(hi - lo + 1, 0)
        rep = np.repeat(np.arange(len(pts)), counts)
        starts = np.repeat(lo, counts)
        within = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
        vi = (starts + within).astype(float) + shift[i]
        partial = u_ii * vi + offset[rep]
        budget = budget[rep] - partial * partial
        keep = budget >= -1e-12 * r2
        pts = np.column_stack([vi[keep], pts[rep][keep]])
        budget = budget[keep]
    return pts


# --- evaluation -------------------------------------------------------------


def _sum_double(v: np.ndarray, tau: SiegelPoint, bottoms: np.ndarray) -> tuple[np.ndarray, float]:
    L, _ = cholesky_im(tau)
    w = v @ L  # |L^T v|^2 = |v @ L|^2
    quad = np.einsum("ij,ij->i", w, w)
    phase = np.einsum("ij,jk,ik->i", v, tau.real, v)
    base = np.exp(-math.pi * quad + 1j * math.pi * phase)
    char_phase = np.exp(2j * math.pi * (v @ bottoms.T))
    return base @ char_phase, float(np.exp(-math.pi * quad).sum())


def _exact_entries(values) -> tuple[list[int], int]:
    """Doubles as integers over a common power-of-two denominator."""
    fr = [Fraction(float(x)) for x in values]
    den = max(f.denominator for f in fr)
    return [f.numerator * (den // f.denominator) for f in fr], den


def _sum_extended(v: np.ndarray, tau: SiegelPoint, bottoms: np.ndarray) -> tuple[list, float]:
    g = tau.g
    m = np.rint(2 * v).astype(np.int64)  # v lies in (1/2) Z^g
    pairs = [(a, b) for a in range(g) for b in range(a, g)]
    # 4 v^T tau v = sum over a <= b of coef * tau_ab, coefficients exact integers
    coef = np.stack([m[:, a] * m[:, b] * (1 if a == b else 2) for a, b in pairs], axis=1).astype(object)
    re_int, re_den = _exact_entries(tau.real[a, b] for a, b in pairs)
    im_int, im_den = _exact_entries(tau.imag[a, b] for a, b in pairs)
    q_re = coef @ np.array(re_int, dtype=object)
    q_im = coef @ np.array(im_int, dtype=object)
    # exp(2 pi i v.b) = i^(m.beta) with beta = 2b in {0, 1}^g
    quarter = (m @ np.rint(2 * bottoms).astype(np.int64).T) % 4
    with mpmath.workdps(EXTENDED_DPS):
        re_scale, im_scale = mpmath.mpf(4 * re_den), mpmath.mpf(4 * im_den)
        terms = [
            mpmath.exp(-mpmath.pi * (mpmath.mpf(qi) / im_scale)) * mpmath.expjpi(mpmath.mpf(qr) / re_scale)
            for qr, qi in zip(q_re, q_im)
        ]
        units = (mpmath.mpc(1), mpmath.mpc(0, 1), mpmath.mpc(-1), mpmath.mpc(0, -1))
        out = []
        for k in range(len(bottoms)):
            buckets = [[] for _ in range(4)]
            for t, r in zip(terms, quarter[:, k]):
                buckets[r].append(t)
            out.append(mpmath.fsum(units[r] * mpmath.fsum(b) for r, b in enumerate(buckets) if b))
        total_abs = float(np.exp(-math.pi * np.einsum("ij,jk,ik->i", v, tau.imag, v)).sum())
    return out, total_abs


def theta_constants(
    etas: Iterable[ThetaCharacteristic],
    tau: SiegelPoint,
    eps: float = DEFAULT_EPS,
    prec: str = "double",
    radius: float | None = None,
) -> list:
    """Evaluate theta[eta](0, tau) for many characteristics at once.

    Odd characteristics are returned as exact ``0``.  Characteristics sharing a
    top row share one lattice enumeration.  With ``prec='extended'`` the
    values are ``mpmath.mpc`` numbers.
    """
    etas = list(etas)
    if eps >= 1e-3:
        raise InputError("theta tolerance must be below 1e-3")
    for eta in etas:
        if eta.g != tau.g:
            raise InputError(f"characteristic genus {eta.g} != tau genus {tau.g}")
    if radius is None:
        radius = truncation_radius(tau, eps)
    out: list = [0j if prec == "double" else mpmath.mpc(0)] * len(etas)
    groups: dict[tuple, list[int]] = defaultdict(list)
    for k, eta in enumerate(etas):
        if parity(eta) == "even":
            groups[eta.top].append(k)
    for top, idx in groups.items():
        v = lattice_points(tau, [float(x) for x in top], radius)
        bottoms = np.array([[float(x) for x in etas[k].bottom] for k in idx]).reshape(len(idx), tau.g)
        if prec == "double":
            vals, abs_sum = _sum_double(v, tau, bottoms)
            floor = 4 * np.finfo(float).eps * abs_sum * max(1, math.sqrt(len(v)))
        elif prec == "extended":
            vals, abs_sum = _sum_extended(v, tau, bottoms)
            floor = 10.0 ** (-EXTENDED_DPS + 5) * abs_sum * max(1, math.sqrt(len(v)))
        else:
            raise InputError(f"unknown precision profile {prec!r}")
        if floor > eps:
            raise PrecisionExhausted(
                f"rounding floor {floor:.2e} exceeds requested eps {eps:.2e}; use prec='extended'"
            )
        for k, val in zip(idx, vals):
            out[k] = complex(val) if prec == "double" else val
    return out


def theta_constant(
    eta: ThetaCharacteristic, tau: SiegelPoint, eps: float = DEFAULT_EPS, prec: str = "double"
):
    return theta_constants([eta], tau, eps, prec)[0]
