"""Period matrices of hyperelliptic curves y^2 = prod (x - a_k).

Branch points are visited in the order of the curve's Weierstrass ordering
a_1, ..., a_{2g+2}; the polyline a_1 -> a_2 -> ... must be simple.  Branch cuts
are the straight segments [a_{2k-1}, a_{2k}], and y is the single-valued
function

    y(x) = prod_k (x - a_{2k-1}) sqrt((x - a_{2k}) / (x - a_{2k-1}))

(principal square roots) on the complement of the cuts.  When a_{2g+2} is the
point at infinity the last factor is replaced by a square root of
(x - a_{2g+1}) cut along a ray.

A_k circles the k-th cut; B_k crosses cut k and cut g+1, passing left of the
polyline on one sheet and right of it on the other (see :func:`canonical_basis`).
This is the picture of the real-root case with all branch points on the real
line, transported along the polyline.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BadOrdering,
    DegenerateMap,
    DuplicateRoot,
    IllConditioned,
    InputError,
    NotPositiveDefinite,
    QuadratureNotConverged,
    WrongCount,
)
from .siegel import SiegelPoint, validate_siegel

INF = "inf"

QUAD_RTOL = 1e-13
MIN_NODES = 32
MAX_NODES = 2**18
MAX_A_COND = 1e12
GC_DOUBLING_CAP = 4096
PANEL_ORDER = 20


def _is_inf(z) -> bool:
    return isinstance(z, str) and z == INF


@dataclass(frozen=True)
class HyperellipticCurve:
    """Genus g curve given by 2g+2 branch points, at most one of them ``INF``.

    ``ordering`` lists root indices in Weierstrass order; ``None`` means the
    default order (by real part, then imaginary part, infinity last).
    """

    g: int
    roots: tuple
    ordering: tuple | None = None

    @property
    def finite_roots(self) -> list[complex]:
        return [complex(z) for z in self.roots if not _is_inf(z)]

    @property
    def has_infinity(self) -> bool:
        return any(_is_inf(z) for z in self.roots)

    def resolved_ordering(self) -> tuple[int, ...]:
        if self.ordering is not None:
            return self.ordering
        return default_ordering(self.roots)

    def ordered_roots(self, ordering: Sequence[int] | None = None) -> list:
        ordering = self.resolved_ordering() if ordering is None else ordering
        return [self.roots[i] for i in ordering]

    def with_ordering(self, ordering: Sequence[int] | None) -> HyperellipticCurve:
        return curve_from_roots(self.roots, ordering)


def default_ordering(roots: Sequence) -> tuple[int, ...]:
    finite = [i for i, z in enumerate(roots) if not _is_inf(z)]
    finite.sort(key=lambda i: (complex(roots[i]).real, complex(roots[i]).imag))
    return tuple(finite + [i for i, z in enumerate(roots) if _is_inf(z)])


def _coerce_root(z):
    if _is_inf(z):
        return INF
    if isinstance(z, (list, tuple)) and len(z) == 2:
        z = complex(float(z[0]), float(z[1]))
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return INF
    return z


def curve_from_roots(points: Sequence, ordering: Sequence[int] | None = None) -> HyperellipticCurve:
    """Build a curve from 2g+1 finite roots (infinity appended) or 2g+2 points."""
    roots = [_coerce_root(z) for z in points]
    n_inf = sum(_is_inf(z) for z in roots)
    if n_inf > 1:
        raise DuplicateRoot("infinity listed more than once")
    if len(roots) % 2 == 1:
        if n_inf:
            raise WrongCount("an odd number of points may not include infinity")
        roots.append(INF)
    g = (len(roots) - 2) // 2
    if g < 2:
        raise WrongCount(f"{len(points)} points do not describe a curve of genus >= 2")
    finite = [z for z in roots if not _is_inf(z)]
    scale = max(1.0, max(abs(z) for z in finite))
    for i in range(len(finite)):
        for j in range(i):
            if abs(finite[i] - finite[j]) <= 1e-14 * scale:
                raise DuplicateRoot(f"roots {finite[j]} and {finite[i]} coincide")
    if ordering is not None:
        ordering = tuple(int(i) for i in ordering)
        if sorted(ordering) != list(range(len(roots))):
            raise BadOrdering(f"ordering {ordering} is not a permutation of 0..{len(roots) - 1}")
    return HyperellipticCurve(g, tuple(roots), ordering)


def moebius(curve: HyperellipticCurve, a, b, c, d) -> HyperellipticCurve:
    """Image of the branch points under x -> (ax + b)/(cx + d); ordering is carried along."""
    a, b, c, d = (complex(v) for v in (a, b, c, d))
    det = a * d - b * c
    if abs(det) <= 1e-14 * max(abs(a * d), abs(b * c), 1e-300):
        raise DegenerateMap("ad - bc vanishes")
    out = []
    for z in curve.roots:
        if _is_inf(z):
            out.append(INF if c == 0 else a / c)
            continue
        den = c * z + d
        if abs(den) <= 1e-15 * (abs(c * z) + abs(d)):
            out.append(INF)
        else:
            out.append((a * z + b) / den)
    return curve_from_roots(out, curve.resolved_ordering())


# --- geometry of the ordering ------------------------------------------------


def _segments_cross(p1, p2, q1, q2, touch_ok: bool) -> bool:
    def orient(a, b, c):
        v = (b - a).real * (c - a).imag - (b - a).imag * (c - a).real
        return 0 if abs(v) < 1e-15 * (abs(b - a) * abs(c - a) + 1e-300) else (1 if v > 0 else -1)

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if touch_ok:
        return False

    def on_seg(a, b, c):
        return min(a.real, b.real) - 1e-15 <= c.real <= max(a.real, b.real) + 1e-15 and min(
            a.imag, b.imag
        ) - 1e-15 <= c.imag <= max(a.imag, b.imag) + 1e-15

    return (
        (o1 == 0 and on_seg(p1, p2, q1))
        or (o2 == 0 and on_seg(p1, p2, q2))
        or (o3 == 0 and on_seg(q1, q2, p1))
        or (o4 == 0 and on_seg(q1, q2, p2))
    )


def polyline_is_simple(points: Sequence[complex]) -> bool:
    """True if consecutive segments only meet at shared vertices."""
    segs = list(zip(points[:-1], points[1:]))
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            adjacent = j == i + 1
            if adjacent:
                # adjacent segments may not fold back onto each other
                (p, q), (_, s) = segs[i], segs[j]
                u, v = q - p, s - q
                cross = u.real * v.imag - u.imag * v.real
                dot = u.real * v.real + u.imag * v.imag
                if abs(cross) <= 1e-14 * abs(u) * abs(v) and dot < 0:
                    return False
                continue
            if _segments_cross(*segs[i], *segs[j], touch_ok=False):
                return False
    return True


def _ray_direction(apex: complex, points: Sequence[complex]) -> complex:
    """Unit direction of a ray from ``apex`` avoiding the polyline through ``points``."""
    scale = max(abs(p - apex) for p in points) + 1.0
    best, best_clear = None, -1.0
    for k in range(720):
        d = cmath.exp(2j * math.pi * k / 720)
        far = apex + 4 * scale * d
        segs = zip(points[:-1], points[1:])
        if any(_segments_cross(apex, far, p, q, touch_ok=True) for p, q in segs if apex not in (p, q)):
            continue
        # clearance: smallest angle-weighted distance of other roots to the ray
        clear = math.inf
        for p in points:
            if p == apex:
                continue
            w = (p - apex) / d
            clear = min(clear, abs(w.imag) if w.real > 0 else abs(w))
        if clear > best_clear:
            best, best_clear = d, clear
    if best is None:
        raise BadOrdering("no ray from the last finite branch point avoids the polyline")
    return best


# --- the branch of y -----------------------------------------------------------


@dataclass(frozen=True)
class _Branch:
    """Principal branch of y for an ordered list of branch points."""

    pairs: tuple  # (p, q) finite cut endpoints
    ray_apex: complex | None = None
    ray_dir: complex = 1.0

    def factor(self, k: int, x: np.ndarray, offsets: dict | None = None) -> np.ndarray:
        def diff(root):
            if offsets is not None and root in offsets:
                return offsets[root]
            return x - root

        if k < len(self.pairs):
            p, q = self.pairs[k]
            dp = diff(p)
            return dp * np.sqrt(diff(q) / dp)
        # sqrt(x - apex) with its cut along the ray apex + t * dir
        d = self.ray_dir
        return np.sqrt(d) * 1j * np.sqrt(-diff(self.ray_apex) / d)

    @property
    def roots(self) -> list[complex]:
        out = [complex(z) for pair in self.pairs for z in pair]
        if self.ray_apex is not None:
            out.append(complex(self.ray_apex))
        return out

    @property
    def n_factors(self) -> int:
        return len(self.pairs) + (self.ray_apex is not None)

    def y(self, x: np.ndarray, skip: int | None = None, offsets: dict | None = None) -> np.ndarray:
        out = np.ones_like(x, dtype=complex)
        for k in range(self.n_factors):
            if k != skip:
                out = out * self.factor(k, x, offsets)
        return out


def _cheb_angles(n: int) -> np.ndarray:
    return (2 * np.arange(1, n + 1) - 1) * math.pi / (2 * n)


def gauss_chebyshev(f, n: int) -> np.ndarray:
    """n-point rule for int_{-1}^{1} f(u) / sqrt(1 - u^2) du.

    ``f`` receives the node angles theta_j (u_j = cos theta_j) so that
    1 - u, 1 + u and sqrt(1 - u^2) can be formed without cancellation; it
    returns an array whose first axis runs over the nodes.
    """
    return (math.pi / n) * f(_cheb_angles(n)).sum(axis=0)


def _adaptive_gc(f, min_nodes: int, max_nodes: int, rtol: float) -> tuple[np.ndarray, int]:
    """Double the node count until two successive estimates agree to ``rtol``.

    Past ``GC_DOUBLING_CAP`` nodes (a branch point close to the segment) the
    angle interval is split into adaptive Gauss-Legendre panels instead.
    """
    n = min_nodes
    prev = gauss_chebyshev(f, n)
    while n < min(GC_DOUBLING_CAP, max_nodes):
        n *= 2
        cur = gauss_chebyshev(f, n)
        scale = max(np.max(np.abs(cur)), 1e-300)
        if np.max(np.abs(cur - prev)) <= rtol * scale:
            return cur, n
        prev = cur
    return _adaptive_panels(f, rtol, max_nodes, start=prev)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(PANEL_ORDER)


def _gl_panels(f, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    half = (hi - lo) / 2
    theta = ((lo + hi) / 2)[:, None] + half[:, None] * _GL_X[None, :]
    vals = f(theta.ravel())
    vals = vals.reshape(len(lo), PANEL_ORDER, *vals.shape[1:])
    return np.einsum("p,npk->nk", _GL_W, vals) * half[:, None]


def _adaptive_panels(f, rtol: float, max_nodes: int, start=None) -> tuple[np.ndarray, int]:
    """Adaptive bisection of [0, pi] with Gauss-Legendre panels in the angle variable."""
    edges = np.linspace(0.0, math.pi, 9)
    lo, hi = edges[:-1], edges[1:]
    whole = _gl_panels(f, lo, hi)
    done = []
    used = 0
    scale = np.max(np.abs(start)) if start is not None else 0.0
    while len(lo):
        mid = (lo + hi) / 2
        left, right = _gl_panels(f, lo, mid), _gl_panels(f, mid, hi)
        used += 3 * PANEL_ORDER * len(lo)
        halves = left + right
        scale = max(scale, np.max(np.abs(sum(done, halves.sum(axis=0)))), 1e-300)
        err = np.max(np.abs(halves - whole), axis=1)
        ok = err <= 0.1 * rtol * scale
        done.extend(halves[ok])
        if used > max_nodes and not np.all(ok):
            raise QuadratureNotConverged(
                f"adaptive panels unresolved after {used} evaluations (error {err.max() / scale:.2e})"
            )
        bad = ~ok
        lo, hi = np.concatenate([lo[bad], mid[bad]]), np.concatenate([mid[bad], hi[bad]])
        whole = np.concatenate([left[bad], right[bad]])
    return np.sum(done, axis=0), used


@dataclass
class PeriodResult:
    tau: SiegelPoint
    A: np.ndarray
    B: np.ndarray
    diagnostics: dict = field(default_factory=dict)


def _powers(x: np.ndarray, g: int, centre: complex, scale: float) -> np.ndarray:
    z = (x - centre) / scale
    return np.stack([z**m for m in range(g)], axis=-1)


def _segment_integral(branch, a, b, g, centre, scale, cut_index, min_nodes, max_nodes, rtol):
    """int_a^b ((x-c)/s)^m dx / y for m < g along the straight segment.

    ``cut_index`` selects the left-side boundary values of y on that cut;
    otherwise the segment must avoid every cut.
    """
    a, b = complex(a), complex(b)
    length = b - a

    def nodes(theta):
        # x - a = (b - a) cos^2(theta/2), x - b = -(b - a) sin^2(theta/2)
        da = length * np.cos(theta / 2) ** 2
        db = -length * np.sin(theta / 2) ** 2
        near_a = np.cos(theta) < 0
        x = np.where(near_a, a + da, b + db)
        # x - root measured from the nearer endpoint keeps clustered roots accurate
        offsets = {rt: np.where(near_a, (a - rt) + da, (b - rt) + db) for rt in branch.roots}
        offsets[a], offsets[b] = da, db
        return x, offsets

    if cut_index is None:

        def f(theta):
            x, offsets = nodes(theta)
            w = (length / 2) * np.sin(theta) / branch.y(x, offsets=offsets)
            return _powers(x, g, centre, scale) * w[:, None]

    else:

        def f(theta):
            x, offsets = nodes(theta)
            # y_left = i (b - a)/2 sqrt(1 - u^2) * (other factors)
            w = -1j / branch.y(x, skip=cut_index, offsets=offsets)
            return _powers(x, g, centre, scale) * w[:, None]

    return _adaptive_gc(f, min_nodes, max_nodes, rtol)


def _resolve_points(curve: HyperellipticCurve, diagnostics: dict) -> list:
    ordering = curve.resolved_ordering()
    pts = curve.ordered_roots(ordering)
    ok = not any(_is_inf(z) for z in pts[:-1])
    finite = [complex(z) for z in pts if not _is_inf(z)]
    if ok and not polyline_is_simple(finite):
        ok = False
    if not ok:
        if curve.ordering is None:
            raise BadOrdering("default ordering does not give a simple polyline")
        diagnostics["ordering_fallback"] = True
        ordering = default_ordering(curve.roots)
        pts = curve.ordered_roots(ordering)
    diagnostics["ordering_used"] = list(ordering)
    return pts


# --- homology basis ------------------------------------------------------------


@dataclass(frozen=True)
class Traversal:
    """One pass along segment ``s`` (ordered points s -> s+1 when direction = +1).

    ``side`` is +1 left of the polyline and -1 right of it; ``sheet`` is +1
    where y takes the values of the branch defined above.  Even segments are
    cuts, odd ones gaps.
    """

    segment: int
    sheet: int
    side: int
    direction: int

    @property
    def is_cut(self) -> bool:
        return self.segment % 2 == 0

    @property
    def weight(self) -> int:
        """Coefficient of the left-side integral of the segment in the period."""
        # across a cut y changes sign, so the right side carries -y_left
        sign = self.sheet * (self.side if self.is_cut else 1)
        return sign * self.direction


@dataclass(frozen=True)
class HomologyBasis:
    """Closed contours given as cyclic sequences of traversals."""

    g: int
    A_cycles: tuple
    B_cycles: tuple

    @property
    def cycles(self) -> tuple:
        return self.A_cycles + self.B_cycles

    @staticmethod
    def coefficients(cycle) -> dict[int, int]:
        """Net weight per segment; segments passed on both sides cancel."""
        out: dict[int, int] = {}
        for t in cycle:
            out[t.segment] = out.get(t.segment, 0) + t.weight
        return {s: w for s, w in out.items() if w}

    def intersection_matrix(self) -> np.ndarray:
        """Signed intersection numbers, by counting crossings in a model picture.

        The polyline is straightened so that point s sits at x = s on the real
        axis (a homeomorphism of the sphere, so intersection numbers do not
        change).  Each contour becomes a polygon at its own height above and
        below the axis; passing from one side to the other crosses the axis
        next to the shared branch point, inside the cut when the sheet changes
        and outside it otherwise.
        """
        paths = [_model_path(c, 0.1 + 0.07 * i, 0.013 * (i + 1)) for i, c in enumerate(self.cycles)]
        m = len(paths)
        out = np.zeros((m, m), dtype=np.int64)
        for i in range(m):
            for j in range(i + 1, m):
                out[i, j] = _count_crossings(paths[i], paths[j])
                out[j, i] = -out[i, j]
        return out


def _model_path(cycle, height: float, shift: float) -> list[tuple]:
    """Edges (p, q, sheet) of a contour in the straightened picture."""
    n = len(cycle)
    edges = []
    # x position at which the contour turns from traversal k to traversal k+1
    turn = []
    for k in range(n):
        t, u = cycle[k], cycle[(k + 1) % n]
        end = t.segment + (1 if t.direction > 0 else 0)
        start = u.segment + (0 if u.direction > 0 else 1)
        if end != start:
            raise InputError("consecutive traversals do not share a branch point")
        if t.side == u.side:
            if t.sheet != u.sheet:
                raise InputError("sheet changes without crossing a cut")
            turn.append(None)
            continue
        # the cut next to point p is segment p if p is even, else segment p - 1
        into_cut = 1 if end % 2 == 0 else -1
        turn.append(end + (into_cut if t.sheet != u.sheet else -into_cut) * shift)
    for k in range(n):
        t = cycle[k]
        prev, nxt = turn[k - 1], turn[k]
        lo, hi = t.segment, t.segment + 1
        x0 = (lo if t.direction > 0 else hi) if prev is None else prev
        x1 = (hi if t.direction > 0 else lo) if nxt is None else nxt
        y = t.side * height
        edges.append(((x0, y), (x1, y), t.sheet))
        if nxt is not None:
            u = cycle[(k + 1) % n]
            edges.append(((x1, y), (x1, 0.0), t.sheet))
            edges.append(((x1, 0.0), (x1, u.side * height), u.sheet))
    return edges


def _count_crossings(path1, path2) -> int:
    total = 0
    for p1, p2, s1 in path1:
        for q1, q2, s2 in path2:
            if s1 != s2:
                continue
            d1 = (p2[0] - p1[0], p2[1] - p1[1])
            d2 = (q2[0] - q1[0], q2[1] - q1[1])
            den = d1[0] * d2[1] - d1[1] * d2[0]
            if den == 0:
                continue
            rx, ry = q1[0] - p1[0], q1[1] - p1[1]
            a = (rx * d2[1] - ry * d2[0]) / den
            b = (rx * d1[1] - ry * d1[0]) / den
            # half-open parameter ranges so shared vertices count once
            if 0 <= a < 1 and 0 <= b < 1:
                total += 1 if den > 0 else -1
    return total


def canonical_basis(curve: HyperellipticCurve) -> HomologyBasis:
    """A_k loops around cut k on sheet 1; B_k runs from cut k to the last cut
    left of the polyline on sheet 1 and back right of it on sheet 2."""
    g = curve.g
    A, B = [], []
    for k in range(g):
        c = 2 * k
        A.append((Traversal(c, 1, 1, 1), Traversal(c, 1, -1, -1)))
        forward = [Traversal(s, 1, 1, 1) for s in range(2 * k + 1, 2 * g)]
        back = [Traversal(s, -1, -1, -1) for s in range(2 * g - 1, 2 * k, -1)]
        B.append(tuple(forward + back))
    return HomologyBasis(g, tuple(A), tuple(B))


def period_matrix_full(
    curve: HyperellipticCurve,
    min_nodes: int = MIN_NODES,
    rtol: float = QUAD_RTOL,
    max_nodes: int = MAX_NODES,
) -> PeriodResult:
    g = curve.g
    diagnostics: dict = {}
    pts = _resolve_points(curve, diagnostics)
    finite = [complex(z) for z in pts if not _is_inf(z)]
    centre = complex(np.mean(finite))
    scale = max(abs(z - centre) for z in finite)
    pairs = [(pts[2 * k], pts[2 * k + 1]) for k in range(g)]
    if _is_inf(pts[-1]):
        apex = complex(pts[-2])
        branch = _Branch(tuple(pairs), apex, _ray_direction(apex, finite))
    else:
        branch = _Branch(tuple(pairs + [(pts[-2], pts[-1])]))

    basis = canonical_basis(curve)
    coeffs = [basis.coefficients(c) for c in basis.cycles]
    integrals = {}
    max_used = 0
    for seg in sorted(set().union(*coeffs)):
        a, b = pts[seg], pts[seg + 1]
        if _is_inf(a) or _is_inf(b):
            raise AssertionError("a cycle with nonzero weight on the ray to infinity")
        cut = seg // 2 if seg % 2 == 0 else None
        integrals[seg], n = _segment_integral(branch, a, b, g, centre, scale, cut, min_nodes, max_nodes, rtol)
        max_used = max(max_used, n)
    # rows: differentials, columns: cycles
    periods = np.column_stack([sum(w * integrals[seg] for seg, w in c.items()) for c in coeffs])
    A, B = periods[:, :g], periods[:, g:]

    cond = np.linalg.cond(A)
    if cond > MAX_A_COND:
        raise IllConditioned(f"A-period matrix condition number {cond:.2e}")
    tau = np.linalg.solve(A, B)
    asym = float(np.max(np.abs(tau - tau.T)) / (1 + np.max(np.abs(tau))))
    diagnostics.update(
        a_period_condition=float(cond),
        symmetry_residual=asym,
        quadrature_nodes=max_used,
        b_orientation_flipped=False,
    )
    try:
        point = validate_siegel(g, tau)
    except NotPositiveDefinite:
        diagnostics["b_orientation_flipped"] = True
        B = -B
        point = validate_siegel(g, -tau)
    return PeriodResult(point, A, B, diagnostics)


def period_matrix(curve: HyperellipticCurve, min_nodes: int = MIN_NODES, rtol: float = QUAD_RTOL) -> SiegelPoint:
    return period_matrix_full(curve, min_nodes, rtol).tau
