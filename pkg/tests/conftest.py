import cmath

import numpy as np
import pytest

from hyplambda.hyperelliptic import curve_from_roots
from hyplambda.selftest import random_siegel  # noqa: F401  (re-exported for tests)

# Reference values frozen from scripts/golden_values.py (doubled quadrature
# nodes, tighter quadrature and theta tolerances, 40-digit theta sums).
GOLDEN_LAMBDA = {
    "x6-1": -2.567256837573568,
    "x5-x": -2.610127970175646,
}

X6_ROOTS = [cmath.exp(1j * cmath.pi * k / 3) for k in range(6)]
X5_ROOTS = [1, 1j, -1, -1j, 0]


def disk_roots(n, rng, radius=2.0, min_sep=1e-2):
    """n points uniform in a disk, rejection-sampled to a minimum separation."""
    while True:
        r = radius * np.sqrt(rng.uniform(0, 1, n))
        z = r * np.exp(2j * np.pi * rng.uniform(0, 1, n))
        d = np.abs(z[:, None] - z[None, :]) + np.eye(n) * 10 * radius
        if d.min() >= min_sep:
            return list(z)


def random_curve(g, rng, with_infinity=False):
    return curve_from_roots(disk_roots(2 * g + 1 if with_infinity else 2 * g + 2, rng))


def direction_ordering(curve, angle):
    """Weierstrass ordering by projection onto a direction; always a simple polyline."""
    u = cmath.exp(1j * angle)
    finite = [i for i, z in enumerate(curve.roots) if z != "inf"]
    finite.sort(key=lambda i: (complex(curve.roots[i]) * u.conjugate()).real)
    return finite + [i for i, z in enumerate(curve.roots) if z == "inf"]


def random_moebius(rng, scale=1.5):
    while True:
        a, b, c, d = rng.normal(size=4) + 1j * rng.normal(size=4)
        c *= 0.3
        if abs(a * d - b * c) > 0.3:
            return a, b, c, d


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
