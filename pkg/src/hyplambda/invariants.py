"""Closed-form invariants: archimedean lambda from ||Delta_g||, the phi/delta
combiner, and the non-archimedean psi and lambda of a semistable fiber.

Non-archimedean quantities are exact ``Fraction`` values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InputError, MissingConstant

LOG_2PI = math.log(2 * math.pi)


def _check_genus(g: int) -> None:
    if not isinstance(g, int) or g < 2:
        raise InputError(f"genus must be an integer >= 2, got {g!r}")


def binom_n(g: int) -> int:
    return math.comb(2 * g, g + 1)


# --- archimedean -------------------------------------------------------------


def lambda_arch(log_petersson: float, g: int, offset: float = 0.0) -> float:
    """lambda = -g log(2 pi) - g log||Delta_g|| / ((8g+4) n) + offset.

    The additive constant is zero; ``offset`` exists only for sensitivity
    studies.
    """
    _check_genus(g)
    n = binom_n(g)
    return -g * LOG_2PI - g * log_petersson / ((8 * g + 4) * n) + offset


def lambda_slope(g: int) -> float:
    """d lambda / d log||Delta_g||."""
    return -g / ((8 * g + 4) * binom_n(g))


def lambda_from_phi(phi: float, delta_F: float, g: int) -> float:
    """lambda = (g-1)/(6(2g+1)) phi + delta/12 with delta = delta_F - 4g log(2 pi)."""
    _check_genus(g)
    return (g - 1) / (6 * (2 * g + 1)) * phi + (delta_F - 4 * g * LOG_2PI) / 12


def phi_from_lambda(lam: float, delta_F: float, g: int) -> float:
    _check_genus(g)
    delta = delta_F - 4 * g * LOG_2PI
    return 6 * (2 * g + 1) / (g - 1) * (lam - delta / 12)


def phi_hyperelliptic(log_petersson: float, delta_F: float, g: int) -> float:
    """phi on the hyperelliptic locus, solved from
    (2g-2) n phi = -8(2g+1) n g log(2 pi) - 3g log||Delta_g|| - (2g+1) n delta_F.
    """
    _check_genus(g)
    n = binom_n(g)
    rhs = -8 * (2 * g + 1) * n * g * LOG_2PI - 3 * g * log_petersson - (2 * g + 1) * n * delta_F
    return rhs / ((2 * g - 2) * n)


# --- non-archimedean ---------------------------------------------------------


@dataclass(frozen=True)
class ReductionData:
    """Double-point counts of the special fiber of a semistable hyperelliptic curve.

    ``xi[j-1]`` counts pairs of subtype j (1 <= j <= (g-1)//2), ``delta[i-1]``
    double points of type i (1 <= i <= g//2).
    """

    g: int
    xi0: int = 0
    xi: tuple = ()
    delta: tuple = ()

    def __post_init__(self):
        _check_genus(self.g)
        object.__setattr__(self, "xi", tuple(self.xi))
        object.__setattr__(self, "delta", tuple(self.delta))
        if len(self.xi) != (self.g - 1) // 2:
            raise InputError(f"xi needs {(self.g - 1) // 2} entries for g={self.g}, got {len(self.xi)}")
        if len(self.delta) != self.g // 2:
            raise InputError(f"delta needs {self.g // 2} entries for g={self.g}, got {len(self.delta)}")
        for v in (self.xi0, *self.xi, *self.delta):
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise InputError(f"counts must be nonnegative integers, got {v!r}")

    @property
    def total_delta(self) -> int:
        """Number of singular points: each subtype-j pair contributes two."""
        return self.xi0 + 2 * sum(self.xi) + sum(self.delta)


def psi_na(data: ReductionData) -> Fraction:
    g = data.g
    d = 2 * g + 1
    psi = Fraction(g - 1, d) * data.xi0
    for j, x in enumerate(data.xi, start=1):
        psi += Fraction(6 * j * (g - j - 1) + 2 * g - 2, d) * x
    for i, x in enumerate(data.delta, start=1):
        psi += (Fraction(12 * i * (g - i), d) - 1) * x
    return psi


def lambda_na(data: ReductionData) -> Fraction:
    return (psi_na(data) + data.total_delta) / 12


def lambda_na_closed(data: ReductionData) -> Fraction:
    g = data.g
    num = g * data.xi0
    num += sum(2 * (j + 1) * (g - j) * x for j, x in enumerate(data.xi, start=1))
    num += sum(4 * i * (g - i) * x for i, x in enumerate(data.delta, start=1))
    return Fraction(num, 8 * g + 4)


def zhang_bound_rhs(
    delta0: int,
    delta_i: Sequence[int],
    g: int,
    elementary: bool = True,
    c: Fraction | None = None,
) -> Fraction:
    """c(g) delta_0 + sum_i 2i(g-i)/g delta_i, the lower bound for the local phi.

    c(g) = (g-1)/(6g) for elementary reduction graphs; otherwise it must be
    passed explicitly.
    """
    _check_genus(g)
    if len(delta_i) != g // 2:
        raise InputError(f"delta_i needs {g // 2} entries for g={g}")
    if delta0 < 0 or any(d < 0 for d in delta_i):
        raise InputError("counts must be nonnegative")
    if c is None:
        if not elementary:
            raise MissingConstant("c(g) is only known for elementary reduction graphs")
        c = Fraction(g - 1, 6 * g)
    out = Fraction(c) * delta0
    for i, d in enumerate(delta_i, start=1):
        out += Fraction(2 * i * (g - i), g) * d
    return out


def height_decomposition(gs_self_intersection: float, local_terms: Sequence[tuple[float, float]], g: int) -> float:
    """deg det R pi_* omega = (g-1)/(6(2g+1)) <Delta_xi, Delta_xi> + sum_v lambda_v log Nv."""
    _check_genus(g)
    total = (g - 1) / (6 * (2 * g + 1)) * gs_self_intersection
    for lam, log_nv in local_terms:
        if not log_nv > 0:
            raise InputError("log Nv must be positive")
        total += lam * log_nv
    return total


# --- reports -----------------------------------------------------------------


@dataclass
class InvariantReport:
    g: int
    lambda_: float
    log_petersson: float
    tau: object
    diagnostics: dict = field(default_factory=dict)
    phi: float | None = None
    delta_F: float | None = None
    offset: float = 0.0

    def consistency_residual(self) -> float:
        return abs(lambda_arch(self.log_petersson, self.g, self.offset) - self.lambda_)

    def to_dict(self) -> dict:
        tau = self.tau.tau
        out = {
            "genus": self.g,
            "lambda": self.lambda_,
            "log_petersson_norm": self.log_petersson,
            "tau": [[[z.real, z.imag] for z in row] for row in tau],
            "diagnostics": self.diagnostics,
        }
        if self.phi is not None:
            out["phi"] = self.phi
            out["delta_F"] = self.delta_F
        return out
