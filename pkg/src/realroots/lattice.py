"""Supports of trigonometric polynomials and the bodies they are cut from.

A support is a finite, centrally symmetric set of integer vectors. Bodies
(balls with rational radius, rational polytopes) are centrally symmetric and
produce supports by dilation: ``Lambda_m = (m * body) ∩ Z^n``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from ._rational import as_rational, to_json_number
from .errors import ConditionStarViolated, DimensionMismatch, NotCentrallySymmetric, ValidationError
from .geometry import LatticePolytope, convex_hull

__all__ = [
    "SupportSet",
    "Ball",
    "PolytopeBody",
    "BodySpec",
    "validate_support",
    "dilate_and_intersect",
    "check_condition_star",
    "symmetric_range",
    "parse_support",
    "parse_body",
    "load_support",
    "load_body",
    "random_support",
]


def _is_lex_positive(p) -> bool:
    for c in p:
        if c:
            return c > 0
    return False


@dataclass(frozen=True)
class SupportSet:
    """Finite centrally symmetric set of lattice points in Z^dim.

    Points are stored sorted, without duplicates.
    """

    dim: int
    points: tuple

    def __len__(self):
        return len(self.points)

    @property
    def size(self) -> int:
        return len(self.points)

    def array(self) -> np.ndarray:
        return np.array(self.points, dtype=np.int64).reshape(-1, self.dim)

    def positive_half(self) -> list:
        """Nonzero points that are positive in lexicographic order."""
        return [p for p in self.points if _is_lex_positive(p)]

    @property
    def has_origin(self) -> bool:
        return (0,) * self.dim in self.points

    @property
    def max_frequency(self) -> int:
        return max(abs(c) for p in self.points for c in p)

    def to_json(self) -> dict:
        return {"dim": self.dim, "points": [list(p) for p in self.points]}

    def __repr__(self):
        return f"SupportSet(dim={self.dim}, N={self.size})"


def validate_support(points: Iterable[Sequence[int]], dim: int | None = None) -> SupportSet:
    """Check and canonicalise a raw list of integer vectors.

    Raises :class:`DimensionMismatch` for ragged input and
    :class:`NotCentrallySymmetric` (naming the first offending point) when
    some ``lambda`` is present without ``-lambda``.
    """
    raw = [tuple(p) if isinstance(p, (list, tuple, np.ndarray)) else (p,) for p in points]
    if not raw:
        raise ValidationError("support must be nonempty")
    n = len(raw[0]) if dim is None else dim
    if n < 1:
        raise ValidationError("dimension must be positive")
    pts = set()
    for p in raw:
        if len(p) != n:
            raise DimensionMismatch(f"point {p} has dimension {len(p)}, expected {n}")
        q = []
        for c in p:
            c = as_rational(c)
            if not isinstance(c, int):
                raise ValidationError(f"support points must be integer vectors, got {p}")
            q.append(c)
        pts.add(tuple(q))
    for p in sorted(pts):
        if tuple(-c for c in p) not in pts:
            raise NotCentrallySymmetric(p)
    return SupportSet(n, tuple(sorted(pts)))


def symmetric_range(lam: int) -> SupportSet:
    """The one-variable support ``{-lam, ..., lam}``."""
    return SupportSet(1, tuple((k,) for k in range(-lam, lam + 1)))


# ---------------------------------------------------------------------------
# bodies


@dataclass(frozen=True)
class Ball:
    radius: Fraction | int
    dim: int

    def __post_init__(self):
        r = as_rational(self.radius)
        if r <= 0:
            raise ValidationError("ball radius must be positive")
        if self.dim < 1:
            raise ValidationError("ball dimension must be positive")
        object.__setattr__(self, "radius", r)

    def to_json(self) -> dict:
        return {"type": "ball", "radius": str(Fraction(self.radius)), "dim": self.dim}


@dataclass(frozen=True)
class PolytopeBody:
    vertices: tuple

    def __post_init__(self):
        verts = tuple(tuple(as_rational(c) for c in v) for v in self.vertices)
        if not verts:
            raise ValidationError("polytope needs vertices")
        n = len(verts[0])
        if any(len(v) != n for v in verts):
            raise DimensionMismatch("polytope vertices have inconsistent dimensions")
        vset = set(verts)
        for v in verts:
            if tuple(-c for c in v) not in vset:
                raise NotCentrallySymmetric(v, f"polytope vertex {v} has no negative; body must be centrally symmetric")
        object.__setattr__(self, "vertices", verts)

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    def hull(self) -> LatticePolytope:
        return convex_hull(self.vertices)

    def to_json(self) -> dict:
        return {"type": "polytope", "vertices": [[to_json_number(c) for c in v] for v in self.vertices]}


BodySpec = Union[Ball, PolytopeBody]


def check_condition_star(body: BodySpec) -> tuple[bool, str]:
    """Whether a lower-dimensional body lies in a lattice-generated subspace.

    Inputs are rational, so the answer is always yes; the diagnostic reports
    the span dimension and a set of integer generators.
    """
    if isinstance(body, Ball):
        return True, f"ball is full-dimensional (k = n = {body.dim})"
    hull = body.hull()
    k, n = hull.intrinsic_dim, hull.dim
    if k == n:
        return True, f"polytope is full-dimensional (k = n = {n})"
    gens = _integer_span_basis(hull)
    if len(gens) != k:
        return False, f"could not find {k} lattice generators for the span"
    return True, f"span has dimension k = {k} < n = {n}, generated by lattice vectors {gens}"


def _integer_span_basis(hull: LatticePolytope) -> list:
    basis = []
    for v in hull._ivertices:
        if not any(v):
            continue
        g = gcd(*v)
        v = tuple(c // g for c in v)
        if not _is_lex_positive(v):
            v = tuple(-c for c in v)
        cand = basis + [v]
        if np.linalg.matrix_rank(np.array(cand, dtype=float)) == len(cand):
            basis.append(v)
    return basis


def dilate_and_intersect(body: BodySpec, m: int) -> SupportSet:
    """All lattice points of ``m * body``.

    Uses a bounding box from the body's extent and an exact membership test
    (squared norm for balls, facet inequalities for polytopes).
    """
    if m < 1 or int(m) != m:
        raise ValidationError(f"dilation factor must be a positive integer, got {m}")
    ok, why = check_condition_star(body)
    if not ok:
        raise ConditionStarViolated(why)
    if isinstance(body, Ball):
        r = Fraction(body.radius)
        bound = floor(m * r)
        limit, q2 = (m * r.numerator) ** 2, r.denominator**2

        def member(arr):
            return (arr * arr).sum(axis=1) * q2 <= limit

        n = body.dim
    else:
        hull = body.hull()
        bound = floor(m * max(abs(Fraction(c)) for v in hull.vertices for c in v))

        def member(arr):
            return hull.contains(arr, dilation=m)

        n = hull.dim
    found = []
    for first in range(-bound, bound + 1):
        arr = _box_slice(n, bound, first)
        found.extend(map(tuple, arr[member(arr)].tolist()))
    return SupportSet(body.dim, tuple(sorted(found)))


def _box_slice(n: int, bound: int, first: int) -> np.ndarray:
    """Integer points of ``[-bound, bound]^n`` whose first coordinate is ``first``."""
    axis = np.arange(-bound, bound + 1, dtype=np.int64)
    if n == 1:
        return np.array([[first]], dtype=np.int64)
    grids = np.meshgrid(*([axis] * (n - 1)), indexing="ij")
    rest = np.stack([g.ravel() for g in grids], axis=1)
    return np.column_stack([np.full(len(rest), first, dtype=np.int64), rest])


# ---------------------------------------------------------------------------
# JSON


def parse_support(obj: dict) -> SupportSet:
    """``{"dim": n, "points": [[...], ...]}`` -> :class:`SupportSet`."""
    if not isinstance(obj, dict) or "points" not in obj:
        raise ValidationError("support JSON needs a 'points' list")
    dim = obj.get("dim")
    pts = obj["points"]
    if dim is not None and (not isinstance(dim, int) or dim < 1):
        raise ValidationError("'dim' must be a positive integer")
    return validate_support(pts, dim)


def parse_body(obj: dict) -> BodySpec:
    kind = obj.get("type") if isinstance(obj, dict) else None
    if kind == "ball":
        try:
            return Ball(obj["radius"], int(obj["dim"]))
        except KeyError as exc:
            raise ValidationError(f"ball JSON is missing {exc}") from None
    if kind == "polytope":
        if "vertices" not in obj:
            raise ValidationError("polytope JSON needs 'vertices'")
        return PolytopeBody(tuple(tuple(v) for v in obj["vertices"]))
    raise ValidationError("body JSON needs 'type' of 'ball' or 'polytope'")


def load_support(path) -> SupportSet:
    return parse_support(json.loads(Path(path).read_text()))


def load_body(path) -> BodySpec:
    return parse_body(json.loads(Path(path).read_text()))


def random_support(dim: int, max_freq: int, rng: np.random.Generator, density: float = 0.3,
                   full_rank: bool = True) -> SupportSet:
    """Random centrally symmetric support inside ``[-max_freq, max_freq]^dim``.

    Each lexicographically positive point is kept with probability
    ``density`` (together with its negative); the origin with probability
    one half. With ``full_rank`` the draw is repeated until the points span
    ``R^dim``.
    """
    axis = np.arange(-max_freq, max_freq + 1)
    box = np.stack(np.meshgrid(*([axis] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    half = np.array([p for p in box if _is_lex_positive(p)])
    while True:
        keep = half[rng.random(len(half)) < density]
        if len(keep) == 0:
            continue
        if full_rank and np.linalg.matrix_rank(keep.astype(float)) < dim:
            continue
        pts = [tuple(int(c) for c in p) for p in keep] + [tuple(int(-c) for c in p) for p in keep]
        if rng.random() < 0.5:
            pts.append((0,) * dim)
        return SupportSet(dim, tuple(sorted(pts)))
