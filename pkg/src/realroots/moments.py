"""Second-moment matrices of supports and bodies, and the ball constants.

For a support ``Lambda`` with ``N`` points the quadratic form
``F(xi) = (1/N) sum <lambda, xi>^2`` has matrix ``(1/N) sum lambda lambda^T``;
its square root is the support function of the ellipsoid ``ell(Lambda)``.
For a body ``Delta`` the limit of ``F_{Lambda_m} / m^2`` is the normalised
inertia matrix ``(1/vol Delta) int_Delta x x^T dx``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gamma, pi, sqrt

import numpy as np
from scipy import integrate

from .errors import ConditionStarViolated, ValidationError
from .geometry import Ellipsoid, LatticePolytope, convex_hull, unit_ball_volume
from .lattice import Ball, BodySpec, SupportSet, check_condition_star

__all__ = [
    "moment_matrix",
    "moment_sum",
    "limit_moment_matrix",
    "limit_moment_exact",
    "simplex_second_moment",
    "polytope_second_moment",
    "monte_carlo_second_moment",
    "BetaValue",
    "beta_n",
    "beta_closed_form",
    "beta_quadrature",
    "sigma_n",
    "ball_slice_moment",
    "ball_limit_constants",
]


def moment_sum(support: SupportSet) -> np.ndarray:
    """Exact integer matrix ``sum lambda lambda^T``."""
    L = support.array().astype(object if support.max_frequency > 1 << 20 else np.int64)
    return L.T @ L


def moment_matrix(support: SupportSet) -> Ellipsoid:
    """The ellipsoid ``ell(Lambda)`` with ``M = (1/N) sum lambda lambda^T``.

    >>> from realroots.lattice import symmetric_range
    >>> float(moment_matrix(symmetric_range(3)).shape[0, 0])  # 3*4/3
    4.0
    """
    S = moment_sum(support)
    return Ellipsoid(np.asarray(S, dtype=float) / support.size)


# ---------------------------------------------------------------------------
# exact polytope moments


def simplex_second_moment(vertices) -> tuple[Fraction, list]:
    """Volume and ``int x x^T dx`` of a k-simplex given by k+1 rational vertices.

    Uses ``int_S x x^T = vol * (sum v v^T + s s^T) / ((k+1)(k+2))`` with
    ``s`` the vertex sum. Volume is unsigned.
    """
    V = [tuple(Fraction(c) for c in v) for v in vertices]
    k = len(V) - 1
    n = len(V[0])
    edges = [[V[i][j] - V[0][j] for j in range(n)] for i in range(1, k + 1)]
    if k != n:
        raise ValidationError("simplex must be full-dimensional in its ambient space")
    vol = abs(_det(edges)) / _factorial(k)
    s = [sum(v[j] for v in V) for j in range(n)]
    denom = (k + 1) * (k + 2)
    M = [[vol * (sum(v[i] * v[j] for v in V) + s[i] * s[j]) / denom for j in range(n)] for i in range(n)]
    return vol, M


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _det(rows):
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = Fraction(a[r][c]) / a[c][c]
            for j in range(c, n):
                a[r][j] -= f * a[c][j]
    return det


def polytope_second_moment(P: LatticePolytope) -> tuple[Fraction, list]:
    """Exact volume and second moment of a full-dimensional polytope containing 0.

    Fan triangulation from the origin over the boundary; valid because every
    body here is centrally symmetric.
    """
    if not P.is_full_dimensional:
        raise ValidationError("polytope_second_moment needs a full-dimensional polytope")
    n = P.dim
    D = P.scale
    zero = (0,) * n
    if n == 1:
        faces = [(v,) for v in P._ivertices]
    elif n == 2:
        V = P._ivertices
        faces = [(V[i], V[(i + 1) % len(V)]) for i in range(len(V))]
    else:
        faces = list(P._triangles)
    vol = Fraction(0)
    M = [[Fraction(0)] * n for _ in range(n)]
    for f in faces:
        simplex = [zero] + [tuple(Fraction(c, D) for c in v) for v in f]
        v, Mi = simplex_second_moment(simplex)
        if v == 0:
            continue
        vol += v
        for i in range(n):
            for j in range(n):
                M[i][j] += Mi[i][j]
    return vol, M


def limit_moment_exact(body: BodySpec) -> list:
    """``(1/vol_k Delta) int_Delta x x^T dx`` as a matrix of Fractions."""
    ok, why = check_condition_star(body)
    if not ok:
        raise ConditionStarViolated(why)
    if isinstance(body, Ball):
        n = body.dim
        c = Fraction(body.radius) ** 2 / (n + 2)
        return [[c if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    hull = body.hull()
    n, k = hull.dim, hull.intrinsic_dim
    if k == n:
        vol, M = polytope_second_moment(hull)
        return [[x / vol for x in row] for row in M]
    if k == 0:
        return [[Fraction(0)] * n for _ in range(n)]
    # integrate in coordinates of a rational basis of the span
    B = _span_basis(hull.vertices, k)
    coords = [_solve_in_basis(B, v) for v in hull.vertices]
    sub = convex_hull(coords)
    vol, My = polytope_second_moment(sub)
    My = [[x / vol for x in row] for row in My]
    return [
        [sum(B[a][i] * My[a][b] * B[b][j] for a in range(k) for b in range(k)) for j in range(n)]
        for i in range(n)
    ]


def _span_basis(vertices, k):
    basis = []
    for v in vertices:
        v = tuple(Fraction(c) for c in v)
        if not any(v):
            continue
        if _rank(basis + [v]) == len(basis) + 1:
            basis.append(v)
        if len(basis) == k:
            break
    return basis


def _rank(rows):
    a = [list(r) for r in rows]
    if not a:
        return 0
    n = len(a[0])
    rank = 0
    for c in range(n):
        p = next((r for r in range(rank, len(a)) if a[r][c] != 0), None)
        if p is None:
            continue
        a[rank], a[p] = a[p], a[rank]
        for r in range(len(a)):
            if r != rank and a[r][c] != 0:
                f = a[r][c] / a[rank][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def _solve_in_basis(B, v):
    """Coordinates ``y`` with ``sum y_a B[a] == v`` (v known to lie in the span)."""
    k, n = len(B), len(v)
    # least-squares normal equations are exact for consistent systems
    G = [[sum(B[a][i] * B[b][i] for i in range(n)) for b in range(k)] for a in range(k)]
    r = [sum(B[a][i] * Fraction(v[i]) for i in range(n)) for a in range(k)]
    return tuple(_gauss_solve(G, r))


def _gauss_solve(A, b):
    n = len(A)
    a = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(A, b)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [a[i][n] / a[i][i] for i in range(n)]


def limit_moment_matrix(body: BodySpec) -> Ellipsoid:
    """The limit ellipsoid ``ell(Delta)`` of a centrally symmetric body.

    Ball(R, n) gives ``(R^2 / (n + 2)) I``; polytopes are integrated exactly.
    """
    M = limit_moment_exact(body)
    return Ellipsoid(np.array([[float(x) for x in row] for row in M]))


def monte_carlo_second_moment(body: BodySpec, samples: int = 1_000_000, seed: int = 0):
    """Rejection-sampling estimate of ``(1/vol) int x x^T dx`` over a full-dimensional body.

    Independent check on the exact formulas. Returns ``(M, stderr)`` with
    entrywise standard errors.
    """
    rng = np.random.default_rng(seed)
    if isinstance(body, Ball):
        n = body.dim
        R = float(body.radius)
        lo, hi = -R * np.ones(n), R * np.ones(n)

        def inside(X):
            return (X**2).sum(axis=1) <= R**2
    else:
        hull = body.hull()
        if not hull.is_full_dimensional:
            raise ValidationError("Monte Carlo moments need a full-dimensional body")
        n = hull.dim
        V = hull.vertex_array()
        lo, hi = V.min(axis=0), V.max(axis=0)
        normals = hull.facet_normals()
        A = np.array([a for a, _ in normals])
        b = np.array([float(h) for _, h in normals])

        def inside(X):
            return np.all(X @ A.T <= b, axis=1)

    acc = []
    done = 0
    while done < samples:
        batch = min(200_000, samples - done)
        X = rng.uniform(lo, hi, size=(batch, n))
        X = X[inside(X)]
        acc.append(np.einsum("ki,kj->kij", X, X))
        done += batch
    Q = np.concatenate(acc)
    return Q.mean(axis=0), Q.std(axis=0, ddof=1) / sqrt(len(Q))


# ---------------------------------------------------------------------------
# ball constants


@dataclass(frozen=True)
class BetaValue:
    n: int
    closed_form: float
    quadrature: float

    @property
    def difference(self) -> float:
        return self.closed_form - self.quadrature

    @property
    def value(self) -> float:
        return self.closed_form


def beta_closed_form(n: int) -> float:
    """``sqrt(pi) Gamma((n+1)/2) / (2 Gamma(n/2 + 2))``."""
    return sqrt(pi) * gamma((n + 1) / 2) / (2 * gamma(n / 2 + 2))


def beta_quadrature(n: int) -> float:
    """``int_{-1}^{1} x^2 (1 - x^2)^((n-1)/2) dx`` by adaptive Gauss-Kronrod."""
    p = (n - 1) / 2
    # even integrand: integrate over [0, 1] and double
    val, _ = integrate.quad(lambda x: x * x * (1 - x * x) ** p, 0.0, 1.0, epsabs=1e-14, epsrel=1e-13, limit=400)
    return 2 * val


def beta_n(n: int) -> BetaValue:
    if not 1 <= n <= 64:
        raise ValidationError(f"beta_n is defined here for 1 <= n <= 64, got {n}")
    return BetaValue(n, beta_closed_form(n), beta_quadrature(n))


def sigma_n(n: int) -> float:
    """Volume of the unit ball in R^n."""
    if n < 0:
        raise ValidationError("sigma_n needs n >= 0")
    return unit_ball_volume(n)


def ball_slice_moment(n: int) -> float:
    """``(1/sigma_n) int_{B^n} x_1^2 dx`` computed by slicing along ``x_1``.

    Each slice at height ``x`` is an (n-1)-ball of radius ``sqrt(1 - x^2)``,
    so the integral is ``sigma_{n-1} beta_n / sigma_n``; it should equal
    ``1 / (n + 2)``.
    """
    return sigma_n(n - 1) * beta_quadrature(n) / sigma_n(n)


def ball_limit_constants(n: int) -> dict:
    """Both candidate limits of the real-root fraction for ball supports.

    ``inertia`` comes from integrating the inertia form of the unit ball
    (radius of ``ell(B)`` is ``1/sqrt(n+2)``); ``beta_ratio`` is
    ``(beta_n / sigma_n)^(n/2)``, which drops the ``sigma_{n-1}`` slice
    factor. They coincide only for ``n = 1``.
    """
    b = beta_n(n).value
    s = sigma_n(n)
    return {
        "n": n,
        "inertia": (1.0 / (n + 2)) ** (n / 2),
        "inertia_via_slices": (sigma_n(n - 1) * b / s) ** (n / 2),
        "beta_ratio": (b / s) ** (n / 2),
    }
