"""Convex bodies in dimensions 1-3: lattice polytopes and ellipsoids.

Polytopes are handled in exact arithmetic. Input points are rationals; they
are rescaled by a common denominator to integers, and every orientation test
and volume computation after that is done on Python/NumPy integers. Volumes
are normalised so the unit lattice cube has volume 1.

Ellipsoids are centred at the origin and described by a symmetric PSD shape
matrix ``M``: the support function is ``h(xi) = sqrt(xi^T M xi)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gamma, gcd, pi, sqrt
from typing import Sequence, Union

import numpy as np

from ._rational import as_rational, common_denominator, simplify
from .errors import DegeneratePolytope, DimensionMismatch, NonPSDInput, UnsupportedDimension

__all__ = [
    "LatticePolytope",
    "Ellipsoid",
    "ConvexBody",
    "convex_hull",
    "minkowski_sum",
    "volume",
    "ellipsoid_volume",
    "support_function",
    "hausdorff_distance",
    "ellipsoid_in_polytope",
    "unit_ball_volume",
    "unit_directions",
]

# int64 orientation tests are exact while |coord| stays below this bound
_INT64_SAFE = 1 << 16


def unit_ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n (1 for n = 0)."""
    return pi ** (n / 2) / gamma(n / 2 + 1)


# ---------------------------------------------------------------------------
# exact integer helpers


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _det3(a, b, c):
    return _dot(a, _cross(b, c))


def _primitive(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def _affine_frame(pts):
    """Indices of a maximal affinely independent subset (at most 4)."""
    p0 = pts[0]
    frame = [0]
    dirs = []
    for i, p in enumerate(pts):
        d = _sub(p, p0)
        if not any(d):
            continue
        if len(dirs) == 0:
            ok = True
        elif len(dirs) == 1:
            ok = _rank_ok2(dirs[0], d)
        else:
            ok = _det_n(dirs + [d]) != 0 if len(p0) == 3 else False
        if ok:
            dirs.append(d)
            frame.append(i)
            if len(dirs) == len(p0):
                break
    return frame, dirs


def _rank_ok2(a, b):
    # a, b linearly independent
    if len(a) == 1:
        return False
    if len(a) == 2:
        return a[0] * b[1] - a[1] * b[0] != 0
    return any(_cross(a, b))


def _det_n(rows):
    if len(rows) == 3:
        return _det3(*rows)
    raise AssertionError


def _monotone_chain(pts):
    """Strictly convex hull of 2-D integer points, counter-clockwise."""
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross2(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross2(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _planar_hull_in_3d(pts, normal):
    """Ordered extreme points of coplanar 3-D points (projection is injective)."""
    k = max(range(3), key=lambda i: abs(normal[i]))
    keep = [i for i in range(3) if i != k]
    proj = {}
    for p in pts:
        proj[(p[keep[0]], p[keep[1]])] = p
    ring = _monotone_chain(list(proj))
    out = [proj[q] for q in ring]
    # keep counter-clockwise orientation as seen from +normal
    if normal[k] * (1 if k != 1 else -1) < 0:
        out.reverse()
    return out


def _segment_ends(pts, d):
    lo = min(pts, key=lambda p: _dot(p, d))
    hi = max(pts, key=lambda p: _dot(p, d))
    return lo, hi


class _Hull3D:
    """Incremental convex hull of full-rank integer points in R^3."""

    def __init__(self, pts, frame):
        self.pts = pts
        use_obj = max(abs(c) for p in pts for c in p) >= _INT64_SAFE
        self.dtype = object if use_obj else np.int64
        cap = 64
        self.normals = np.zeros((cap, 3), dtype=self.dtype)
        self.offsets = np.zeros(cap, dtype=self.dtype)
        self.alive = np.zeros(cap, dtype=bool)
        self.faces = []
        a, b, c, d = (pts[i] for i in frame)
        interior = tuple(a[i] + b[i] + c[i] + d[i] for i in range(3))
        for tri in ((a, b, c), (a, b, d), (a, c, d), (b, c, d)):
            n = _cross(_sub(tri[1], tri[0]), _sub(tri[2], tri[0]))
            if _dot(n, interior) - 4 * _dot(n, tri[0]) > 0:
                tri = (tri[0], tri[2], tri[1])
            self._add(tri)
        used = set(frame)
        rest = [p for i, p in enumerate(pts) if i not in used]
        # extreme points first so interior points are rejected cheaply
        rest.sort(key=lambda p: -_dot(p, p))
        for p in rest:
            self._insert(p)

    def _add(self, tri):
        n = _cross(_sub(tri[1], tri[0]), _sub(tri[2], tri[0]))
        k = len(self.faces)
        if k == len(self.alive):
            grow = len(self.alive)
            self.normals = np.concatenate([self.normals, np.zeros((grow, 3), dtype=self.dtype)])
            self.offsets = np.concatenate([self.offsets, np.zeros(grow, dtype=self.dtype)])
            self.alive = np.concatenate([self.alive, np.zeros(grow, dtype=bool)])
        self.normals[k] = n
        self.offsets[k] = _dot(n, tri[0])
        self.alive[k] = True
        self.faces.append(tri)

    def _insert(self, p):
        k = len(self.faces)
        pv = np.array(p, dtype=self.dtype)
        vis = (self.normals[:k] @ pv > self.offsets[:k]) & self.alive[:k]
        idx = np.flatnonzero(vis)
        if idx.size == 0:
            return
        edges = set()
        for i in idx:
            a, b, c = self.faces[i]
            edges.update(((a, b), (b, c), (c, a)))
            self.alive[i] = False
        for u, v in edges:
            if (v, u) not in edges:
                self._add((u, v, p))

    def triangles(self):
        return [f for f, ok in zip(self.faces, self.alive) if ok]


# ---------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of finitely many rational points, stored by its extreme points.

    ``vertices`` are in counter-clockwise order for planar polygons and in
    lexicographic order otherwise. ``intrinsic_dim`` is the dimension of the
    affine span (it may be smaller than ``dim``).
    """

    dim: int
    vertices: tuple
    intrinsic_dim: int
    scale: int = field(default=1, compare=False, repr=False)
    # integer (scaled) data used by exact routines
    _ivertices: tuple = field(default=(), compare=False, repr=False)
    _triangles: tuple = field(default=(), compare=False, repr=False)

    @property
    def is_full_dimensional(self) -> bool:
        return self.intrinsic_dim == self.dim

    def vertex_array(self) -> np.ndarray:
        return np.array([[float(c) for c in v] for v in self.vertices], dtype=float).reshape(-1, self.dim)

    def support(self, xi) -> np.ndarray | float:
        xi = np.asarray(xi, dtype=float)
        if xi.shape[-1] != self.dim:
            raise DimensionMismatch(f"direction has dimension {xi.shape[-1]}, polytope {self.dim}")
        vals = (xi @ self.vertex_array().T).max(axis=-1)
        return float(vals) if np.ndim(vals) == 0 else vals

    def volume(self) -> Fraction | int:
        return volume(self)

    def halfspaces(self):
        """Exact H-representation in scaled integer coordinates.

        Returns ``(ineq, eq)`` with ``ineq`` a list of ``(a, b)`` meaning
        ``a . (scale * x) <= b`` and ``eq`` a list of ``(a, b)`` meaning
        ``a . (scale * x) == b``; ``a`` and ``b`` are integers.
        """
        return _halfspaces(self)

    def facet_normals(self):
        """Outer facet normals ``u`` with offsets ``h_P(u)`` (full-dimensional only)."""
        if not self.is_full_dimensional:
            raise DegeneratePolytope("polytope is lower-dimensional; facets are not defined")
        ineq, _ = self.halfspaces()
        return [(np.array(a, dtype=float), b / self.scale) for a, b in ineq]

    def contains(self, points, dilation: int = 1) -> np.ndarray:
        """Exact membership of integer ``points`` in ``dilation * P``."""
        pts = np.asarray(points)
        if pts.ndim == 1:
            pts = pts.reshape(-1, self.dim)
        ineq, eq = self.halfspaces()
        big = (np.abs(pts).max(initial=0) + 1) * self.scale * max(
            [max((abs(c) for c in a), default=0) for a, _ in ineq + eq] + [1]
        ) * 4
        dtype = object if big >= (1 << 62) else np.int64
        P = pts.astype(dtype) * self.scale
        ok = np.ones(len(pts), dtype=bool)
        for a, b in ineq:
            ok &= (P @ np.array(a, dtype=dtype)) <= dilation * b
        for a, b in eq:
            ok &= (P @ np.array(a, dtype=dtype)) == dilation * b
        return ok


def convex_hull(points: Sequence[Sequence], dim: int | None = None) -> LatticePolytope:
    """Extreme points of the convex hull of rational points in R^n, n <= 3.

    Lower-dimensional hulls are allowed; their affine dimension is reported
    in ``intrinsic_dim``.

    Examples
    --------
    >>> convex_hull([(-2,), (-1,), (0,), (1,), (2,)]).vertices
    ((-2,), (2,))
    """
    pts = [tuple(as_rational(c) for c in p) for p in points]
    if not pts:
        raise ValueError("convex_hull needs at least one point")
    n = len(pts[0]) if dim is None else dim
    if any(len(p) != n for p in pts):
        raise DimensionMismatch("points have inconsistent dimensions")
    if n < 1 or n > 3:
        raise UnsupportedDimension(f"convex hulls are implemented for n <= 3, got n = {n}")
    scale = common_denominator(c for p in pts for c in p)
    ipts = sorted({tuple(int(c * scale) for c in p) for p in pts})
    iverts, tris, r = _hull_int(ipts, n)
    verts = tuple(tuple(simplify(Fraction(c, scale)) for c in v) for v in iverts)
    return LatticePolytope(n, verts, r, scale, tuple(iverts), tuple(tris))


def _hull_int(ipts, n):
    if len(ipts) == 1:
        return ipts, [], 0
    frame, dirs = _affine_frame(ipts)
    r = len(dirs)
    if r == 1:
        lo, hi = _segment_ends(ipts, dirs[0])
        return [lo, hi], [], 1
    if n == 2:
        return _monotone_chain(ipts), [], 2
    if r == 2:
        normal = _cross(dirs[0], dirs[1])
        return _planar_hull_in_3d(ipts, normal), [], 2
    hull = _Hull3D(ipts, frame)
    tris = hull.triangles()
    planes = {}
    for t in tris:
        nrm = _primitive(_cross(_sub(t[1], t[0]), _sub(t[2], t[0])))
        planes.setdefault((nrm, _dot(nrm, t[0])), set()).update(t)
    verts = set()
    for (nrm, _), pset in planes.items():
        verts.update(_planar_hull_in_3d(sorted(pset), nrm))
    return sorted(verts), tris, 3


def _halfspaces(P: LatticePolytope):
    V = list(P._ivertices)
    n, r = P.dim, P.intrinsic_dim
    ineq, eq = [], []
    if r == 0:
        for i in range(n):
            e = tuple(int(i == j) for j in range(n))
            eq.append((e, V[0][i]))
        return ineq, eq
    if r == 1:
        lo, hi = V
        d = _primitive(_sub(hi, lo))
        ineq = [(d, _dot(d, hi)), (tuple(-x for x in d), -_dot(d, lo))]
        if n == 2:
            nn = (-d[1], d[0])
            eq.append((nn, _dot(nn, lo)))
        elif n == 3:
            cands = [_primitive(_cross(d, e)) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
            cands = [c for c in cands if any(c)]
            a = cands[0]
            b = next(c for c in cands[1:] if any(_cross(a, c)))
            eq += [(a, _dot(a, lo)), (b, _dot(b, lo))]
        return ineq, eq
    if n == 2:
        m = len(V)
        for i in range(m):
            e = _sub(V[(i + 1) % m], V[i])
            a = _primitive((e[1], -e[0]))
            ineq.append((a, _dot(a, V[i])))
        return ineq, eq
    if r == 2:
        normal = _primitive(_cross(_sub(V[1], V[0]), _sub(V[2], V[0])))
        eq.append((normal, _dot(normal, V[0])))
        m = len(V)
        csum = tuple(sum(v[i] for v in V) for i in range(3))
        for i in range(m):
            e = _sub(V[(i + 1) % m], V[i])
            a = _primitive(_cross(e, normal))
            if _dot(a, csum) - m * _dot(a, V[i]) > 0:
                a = tuple(-x for x in a)
            ineq.append((a, _dot(a, V[i])))
        return ineq, eq
    seen = set()
    for t in P._triangles:
        a = _primitive(_cross(_sub(t[1], t[0]), _sub(t[2], t[0])))
        key = (a, _dot(a, t[0]))
        if key not in seen:
            seen.add(key)
            ineq.append(key)
    return ineq, eq


def minkowski_sum(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    """Hull of all pairwise vertex sums."""
    if P.dim != Q.dim:
        raise DimensionMismatch(f"cannot add polytopes of dimension {P.dim} and {Q.dim}")
    if P.scale == 1 and Q.scale == 1:
        sums = {tuple(a + b for a, b in zip(p, q)) for p in P._ivertices for q in Q._ivertices}
    else:
        sums = {tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices}
    return convex_hull(sorted(sums), P.dim)


def volume(P: LatticePolytope):
    """Exact n-dimensional volume; 0 for lower-dimensional polytopes."""
    if P.dim > 3:
        raise UnsupportedDimension(f"volume is implemented for n <= 3, got n = {P.dim}")
    if not P.is_full_dimensional:
        return 0
    V = P._ivertices
    if P.dim == 1:
        raw = V[-1][0] - V[0][0]
    elif P.dim == 2:
        m = len(V)
        twice = sum(V[i][0] * V[(i + 1) % m][1] - V[(i + 1) % m][0] * V[i][1] for i in range(m))
        raw = Fraction(twice, 2)
    else:
        raw = Fraction(sum(_det3(*t) for t in P._triangles), 6)
    return simplify(Fraction(raw) / P.scale**P.dim)


# ---------------------------------------------------------------------------
# ellipsoids


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """Origin-centred ellipsoid ``{x : x = A u, |u| <= 1}`` with ``M = A A^T``."""

    shape: np.ndarray

    def __post_init__(self):
        M = np.atleast_2d(np.asarray(self.shape, dtype=float))
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise NonPSDInput(f"shape matrix must be square, got {M.shape}")
        if not np.all(np.isfinite(M)):
            raise NonPSDInput("shape matrix has non-finite entries")
        scale = max(1.0, float(np.abs(M).max()))
        if np.abs(M - M.T).max() > 1e-12 * scale:
            raise NonPSDInput("shape matrix is not symmetric")
        M = (M + M.T) / 2
        w, U = np.linalg.eigh(M)
        if w.min() < -1e-12 * scale:
            raise NonPSDInput(f"shape matrix has negative eigenvalue {w.min():.3g}")
        if w.min() < 0:
            M = (U * np.clip(w, 0, None)) @ U.T
        object.__setattr__(self, "shape", M)

    @classmethod
    def ball(cls, radius: float, dim: int) -> "Ellipsoid":
        return cls(radius**2 * np.eye(dim))

    @property
    def dim(self) -> int:
        return self.shape.shape[0]

    def factor(self) -> np.ndarray:
        """Symmetric square root ``A`` with ``A @ A.T == M``."""
        w, U = np.linalg.eigh(self.shape)
        return (U * np.sqrt(np.clip(w, 0, None))) @ U.T

    def support(self, xi):
        xi = np.asarray(xi, dtype=float)
        if xi.shape[-1] != self.dim:
            raise DimensionMismatch(f"direction has dimension {xi.shape[-1]}, ellipsoid {self.dim}")
        q = np.einsum("...i,ij,...j->...", xi, self.shape, xi)
        vals = np.sqrt(np.clip(q, 0, None))
        return float(vals) if np.ndim(vals) == 0 else vals

    def scaled(self, c: float) -> "Ellipsoid":
        return Ellipsoid(self.shape * c**2)

    def volume(self) -> float:
        return ellipsoid_volume(self)

    def __repr__(self):
        return f"Ellipsoid({self.shape.tolist()!r})"


ConvexBody = Union[LatticePolytope, Ellipsoid]


def ellipsoid_volume(E: Ellipsoid) -> float:
    det = float(np.linalg.det(E.shape))
    return unit_ball_volume(E.dim) * sqrt(max(det, 0.0))


def support_function(body: ConvexBody, xi):
    """``max <x, xi>`` over the body; positively homogeneous of degree 1."""
    return body.support(xi)


def unit_directions(n: int, count: int) -> np.ndarray:
    """Deterministic, evenly spread unit vectors in R^n."""
    if n == 1:
        return np.array([[-1.0], [1.0]])
    if n == 2:
        t = 2 * pi * np.arange(count) / count
        return np.column_stack([np.cos(t), np.sin(t)])
    if n == 3:
        # Fibonacci sphere
        k = np.arange(count) + 0.5
        z = 1 - 2 * k / count
        rho = np.sqrt(1 - z**2)
        phi = pi * (3 - sqrt(5)) * k
        return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    raise UnsupportedDimension(f"direction sampling implemented for n <= 3, got {n}")


def hausdorff_distance(A: ConvexBody, B: ConvexBody, directions: int = 256) -> float:
    """Max of ``|h_A(u) - h_B(u)|`` over sampled unit directions.

    For convex bodies the exact Hausdorff distance is the supremum over all
    unit ``u``; with finitely many directions this is a lower bound.
    """
    if directions < 64:
        raise ValueError("use at least 64 directions")
    if A.dim != B.dim:
        raise DimensionMismatch(f"bodies have dimensions {A.dim} and {B.dim}")
    U = unit_directions(A.dim, directions)
    return float(np.max(np.abs(A.support(U) - B.support(U))))


def ellipsoid_in_polytope(E: Ellipsoid, P: LatticePolytope, within_span: bool = False, rtol: float = 1e-12) -> bool:
    """Test ``E ⊆ P`` facet by facet: ``h_E(u_f) <= h_P(u_f)``.

    A lower-dimensional ``P`` raises :class:`DegeneratePolytope` unless
    ``within_span`` is set, in which case ``E`` must also be flat along every
    normal of the span of ``P``.
    """
    if E.dim != P.dim:
        raise DimensionMismatch(f"ellipsoid has dimension {E.dim}, polytope {P.dim}")
    if not P.is_full_dimensional and not within_span:
        raise DegeneratePolytope(f"polytope has dimension {P.intrinsic_dim} < {P.dim}")
    ineq, eq = P.halfspaces()
    tol = rtol * max(1.0, float(np.abs(E.shape).max()))
    for a, b in eq:
        u = np.array(a, dtype=float)
        if b != 0 or u @ E.shape @ u > tol * (u @ u):
            return False
    for a, b in ineq:
        u = np.array(a, dtype=float)
        if E.support(u) > (b / P.scale) * (1 + rtol) + rtol:
            return False
    return True
