"""Mixed volumes of polytopes and ellipsoids, and the root-count predictions built on them.

* expected real roots of a random system = ``n! V(ell(L_1), ..., ell(L_n))``
* generic number of complex torus roots (BKK) = ``n! V(conv(L_1), ..., conv(L_n))``
* expected fraction of real roots = the ratio of the two mixed volumes.

Polytope mixed volumes are exact (polarization over Minkowski sums).
Ellipsoid mixed volumes use the Gaussian random-determinant identity

    V(E_1, ..., E_n) = (kappa_n / d_n) E|det(X_1, ..., X_n)|,   X_i ~ N(0, M_i),

with ``d_n = E|det G|`` for a standard Gaussian matrix ``G``. The Monte Carlo
estimator integrates the last column out analytically; a deterministic
quadrature path integrates out all but one (n = 2, closed form via the
complete elliptic integral) or two (n = 3) columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial, gamma, pi, sqrt
from typing import NamedTuple

import numpy as np
from scipy.special import ellipe

from .errors import DimensionMismatch, UnsupportedDimension, ValidationError, ZeroBKK
from .geometry import Ellipsoid, LatticePolytope, convex_hull, minkowski_sum, unit_ball_volume, volume
from .lattice import Ball, BodySpec, PolytopeBody, SupportSet
from .moments import limit_moment_matrix, moment_matrix
from .montecarlo import MVEstimate, RunningStats, run_chunks

__all__ = [
    "RootStatistics",
    "gaussian_det_constant",
    "mixed_volume_polytopes",
    "mixed_volume_ellipsoids",
    "mixed_volume_ellipsoids_exact",
    "mixed_volume_ellipsoids_oracle_2d",
    "expected_real_roots",
    "expected_real_roots_estimate",
    "bkk_count",
    "real_fraction",
    "mixed_volume_bodies",
    "limit_real_fraction",
    "af_inequality_gap",
    "AFGaps",
]

_SQRT_2_OVER_PI = sqrt(2 / pi)


@dataclass(frozen=True)
class RootStatistics:
    expected_real: float
    bkk: int
    fraction: float

    def __post_init__(self):
        if self.bkk > 0 and abs(self.fraction - self.expected_real / self.bkk) > 1e-12:
            raise ValidationError("fraction must equal expected_real / bkk")
        if self.expected_real > self.bkk + 1e-9:
            raise ValidationError(f"expected real roots {self.expected_real} exceed BKK count {self.bkk}")

    def to_json(self) -> dict:
        return {"expected_real": self.expected_real, "bkk": self.bkk, "fraction": self.fraction}


def gaussian_det_constant(n: int) -> float:
    """``E|det G|`` for an n x n matrix of i.i.d. N(0, 1) entries.

    Product of chi means: ``prod_{k=1}^{n} sqrt(2) Gamma((k+1)/2) / Gamma(k/2)``.
    """
    out = 1.0
    for k in range(1, n + 1):
        out *= sqrt(2) * gamma((k + 1) / 2) / gamma(k / 2)
    return out


# ---------------------------------------------------------------------------
# polytopes


def mixed_volume_polytopes(*polytopes: LatticePolytope):
    """Exact mixed volume ``V(P_1, ..., P_n)`` by polarization.

    ``V = (1/n!) sum over nonempty S of (-1)^(n-|S|) vol(sum_{i in S} P_i)``.
    """
    n = len(polytopes)
    if n == 0:
        raise ValidationError("need at least one polytope")
    if any(P.dim != n for P in polytopes):
        raise DimensionMismatch(f"need {n} polytopes in R^{n}")
    if n > 3:
        raise UnsupportedDimension(f"mixed volumes are implemented for n <= 3, got {n}")
    total = Fraction(0)
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            acc = polytopes[subset[0]]
            for i in subset[1:]:
                acc = minkowski_sum(acc, polytopes[i])
            total += (-1) ** (n - size) * Fraction(volume(acc))
    total /= factorial(n)
    return total.numerator if total.denominator == 1 else total


def _check_supports(supports) -> int:
    n = len(supports)
    if n == 0:
        raise ValidationError("need at least one support")
    if any(s.dim != n for s in supports):
        raise DimensionMismatch(f"a system in {n} variables needs {n} supports in Z^{n}")
    if n > 3:
        raise UnsupportedDimension(f"n <= 3 supported, got {n}")
    return n


def bkk_count(*supports: SupportSet) -> int:
    """Generic number of roots in the complex torus: ``n! V(conv L_1, ..., conv L_n)``."""
    n = _check_supports(supports)
    mv = Fraction(mixed_volume_polytopes(*(convex_hull(s.points) for s in supports)))
    count = mv * factorial(n)
    if count.denominator != 1:
        raise AssertionError(f"BKK count {count} is not an integer")
    return int(count)


# ---------------------------------------------------------------------------
# ellipsoids


def _homothety_factors(ellipsoids):
    """``(M_0, [c_i])`` when every ``M_i = c_i M_0`` exactly enough, else ``None``."""
    ref = max(ellipsoids, key=lambda E: np.abs(E.shape).max()).shape
    peak = np.abs(ref).max()
    if peak == 0:
        return ref, [0.0] * len(ellipsoids)
    k = np.unravel_index(np.argmax(np.abs(ref)), ref.shape)
    factors = []
    for E in ellipsoids:
        c = E.shape[k] / ref[k]
        if np.abs(E.shape - c * ref).max() > 1e-13 * max(peak * abs(c), np.abs(E.shape).max()):
            return None
        factors.append(c)
    return ref, factors


def _shortcut(ellipsoids):
    """Closed-form mixed volume for n = 1 and homothetic tuples, else ``None``."""
    n = ellipsoids[0].dim
    if n == 1:
        return 2 * sqrt(ellipsoids[0].shape[0, 0])
    hom = _homothety_factors(ellipsoids)
    if hom is None:
        return None
    M0, factors = hom
    det = max(float(np.linalg.det(M0)), 0.0)
    return unit_ball_volume(n) * sqrt(det) * float(np.prod(np.sqrt(np.clip(factors, 0, None))))


def _check_ellipsoids(ellipsoids) -> int:
    n = len(ellipsoids)
    if n == 0:
        raise ValidationError("need at least one ellipsoid")
    if any(E.dim != n for E in ellipsoids):
        raise DimensionMismatch(f"need {n} ellipsoids in R^{n}")
    return n


def _cofactor_norm_samples(factors, G):
    """``|A_n^T c|`` where ``c`` is the cofactor vector of ``X_1..X_{n-1}``.

    ``G`` has shape (batch, n-1, n): standard normal draws for the first
    n-1 columns.
    """
    n = len(factors)
    cols = [G[:, k, :] @ factors[k].T for k in range(n - 1)]
    if n == 2:
        x = cols[0]
        c = np.column_stack([-x[:, 1], x[:, 0]])
    elif n == 3:
        c = np.cross(cols[0], cols[1])
    else:
        raise UnsupportedDimension(f"Monte Carlo mixed volumes are implemented for n <= 3, got {n}")
    return np.linalg.norm(c @ factors[-1], axis=1)


def _ellipsoid_chunk(seq, count, factors, batch=20_000):
    rng = np.random.default_rng(seq)
    n = len(factors)
    stats = RunningStats()
    left = count
    while left > 0:
        b = min(batch, left)
        G = rng.standard_normal((b, n - 1, n))
        # E|<A_n g, c>| = sqrt(2/pi) |A_n^T c| given the other columns
        stats.push(_SQRT_2_OVER_PI * _cofactor_norm_samples(factors, G))
        left -= b
    return stats, {}


def mixed_volume_ellipsoids(*ellipsoids: Ellipsoid, samples: int = 100_000, seed: int = 0, workers: int = 1,
                            use_shortcuts: bool = True) -> MVEstimate:
    """Monte Carlo estimate of ``V(E_1, ..., E_n)`` with standard error.

    n = 1 and homothetic tuples (equal ellipsoids, balls) are returned exactly
    with zero standard error when ``use_shortcuts`` is set.
    """
    n = _check_ellipsoids(ellipsoids)
    if use_shortcuts:
        exact = _shortcut(ellipsoids)
        if exact is not None:
            return MVEstimate(exact, 0.0, 0, seed, {"method": "closed form"})
    if n == 1:
        exact = 2 * sqrt(ellipsoids[0].shape[0, 0])
        return MVEstimate(exact, 0.0, 0, seed, {"method": "closed form"})
    if samples < 10_000:
        raise ValidationError("use at least 10^4 samples")
    factors = [E.factor() for E in ellipsoids]
    stats, _ = run_chunks(_ellipsoid_chunk, samples, seed, workers, (factors,))
    scale = unit_ball_volume(n) / gaussian_det_constant(n)
    return MVEstimate(stats.mean * scale, stats.std_error * scale, stats.count, seed,
                      {"method": "gaussian determinant", "workers": workers})


def _ellipse_half_perimeter(C: np.ndarray) -> np.ndarray:
    """``E|C g|`` scaled: returns ``2 s_1 E(1 - s_2^2/s_1^2)`` for (batched) 2-column maps.

    This is half the perimeter of the ellipse ``C . unit circle`` (``s_i``
    the two largest singular values of ``C``).
    """
    s = np.linalg.svd(C, compute_uv=False)
    s1, s2 = s[..., 0], s[..., 1]
    with np.errstate(invalid="ignore", divide="ignore"):
        m = np.where(s1 > 0, 1 - (s2 / np.where(s1 > 0, s1, 1)) ** 2, 0.0)
    return 2 * s1 * ellipe(np.clip(m, 0.0, 1.0))


def mixed_volume_ellipsoids_exact(*ellipsoids: Ellipsoid, nodes: int = 128) -> float:
    """Deterministic ``V(E_1, ..., E_n)`` for n <= 3.

    n = 2 is closed form: half the perimeter of the ellipse ``A_2^T J A_1 B``
    (J the quarter turn). For n = 3 two Gaussian columns are integrated out
    analytically and the remaining expectation over the unit sphere uses a
    Gauss-Legendre x trapezoid product rule with ``nodes x 2 nodes`` points.
    """
    n = _check_ellipsoids(ellipsoids)
    exact = _shortcut(ellipsoids)
    if exact is not None:
        return exact
    A = [E.factor() for E in ellipsoids]
    if n == 2:
        J = np.array([[0.0, -1.0], [1.0, 0.0]])
        return float(_ellipse_half_perimeter(A[1].T @ J @ A[0]))
    if n != 3:
        raise UnsupportedDimension(f"deterministic ellipsoid mixed volumes need n <= 3, got {n}")
    z, wz = np.polynomial.legendre.leggauss(nodes)
    phi = 2 * pi * np.arange(2 * nodes) / (2 * nodes)
    Z, PHI = np.meshgrid(z, phi, indexing="ij")
    rho = np.sqrt(1 - Z**2)
    U = np.stack([rho * np.cos(PHI), rho * np.sin(PHI), Z], axis=-1).reshape(-1, 3)
    W = np.repeat(wz, 2 * nodes) * (2 * pi / (2 * nodes)) / (4 * pi)
    V = U @ A[0].T
    # B_v = A_3^T [v]_x A_2 ; [v]_x w = v x w
    cross = np.zeros((len(V), 3, 3))
    cross[:, 0, 1], cross[:, 0, 2] = -V[:, 2], V[:, 1]
    cross[:, 1, 0], cross[:, 1, 2] = V[:, 2], -V[:, 0]
    cross[:, 2, 0], cross[:, 2, 1] = -V[:, 1], V[:, 0]
    B = A[2].T @ cross @ A[1]
    # E|B g| = sqrt(pi/2) / pi * (2 s1 E(m)) for a rank-2 map
    psi = sqrt(pi / 2) / pi * _ellipse_half_perimeter(B)
    mean_psi = float(W @ psi)
    e_abs_det = _SQRT_2_OVER_PI * (2 * _SQRT_2_OVER_PI) * mean_psi
    return unit_ball_volume(3) / gaussian_det_constant(3) * e_abs_det


def _area_from_support(h: np.ndarray) -> float:
    """Area of a planar convex body from its support function on a uniform angle grid."""
    k = len(h)
    freq = np.fft.rfftfreq(k, d=1.0 / k)
    dh = np.fft.irfft(1j * freq * np.fft.rfft(h), n=k)
    return 0.5 * float(np.mean(h**2 - dh**2)) * 2 * pi


def mixed_volume_ellipsoids_oracle_2d(E1: Ellipsoid, E2: Ellipsoid, nodes: int = 4096) -> float:
    """``(area(E1 + E2) - area E1 - area E2) / 2`` from support functions.

    Area uses ``(1/2) int (h^2 - h'^2) dtheta`` with spectral differentiation;
    independent of the Gaussian-determinant route.
    """
    if E1.dim != 2 or E2.dim != 2:
        raise DimensionMismatch("the planar oracle needs two ellipses")
    if nodes < 4096:
        raise ValidationError("use at least 4096 quadrature nodes")
    t = 2 * pi * np.arange(nodes) / nodes
    U = np.column_stack([np.cos(t), np.sin(t)])
    h1, h2 = E1.support(U), E2.support(U)
    return (_area_from_support(h1 + h2) - _area_from_support(h1) - _area_from_support(h2)) / 2


# ---------------------------------------------------------------------------
# root-count predictions


def expected_real_roots(*supports: SupportSet) -> float:
    """Expected number of real roots on the torus: ``n! V(ell(L_1), ..., ell(L_n))``.

    Deterministic (closed form or quadrature). For the Monte Carlo route use
    :func:`expected_real_roots_estimate`.

    >>> from realroots.lattice import symmetric_range
    >>> round(expected_real_roots(symmetric_range(3)), 12)
    4.0
    """
    n = _check_supports(supports)
    return factorial(n) * mixed_volume_ellipsoids_exact(*(moment_matrix(s) for s in supports))


def expected_real_roots_estimate(*supports: SupportSet, samples: int = 100_000, seed: int = 0,
                                 workers: int = 1, use_shortcuts: bool = False) -> MVEstimate:
    """Monte Carlo counterpart of :func:`expected_real_roots` (Gaussian-determinant estimator)."""
    n = _check_supports(supports)
    est = mixed_volume_ellipsoids(*(moment_matrix(s) for s in supports), samples=samples, seed=seed, workers=workers,
                                  use_shortcuts=use_shortcuts)
    return est.scaled(factorial(n))


def real_fraction(*supports: SupportSet) -> RootStatistics:
    """Expected real roots, BKK count and their ratio."""
    bkk = bkk_count(*supports)
    if bkk == 0:
        raise ZeroBKK("BKK count is zero: the Newton polytopes are jointly degenerate")
    real = expected_real_roots(*supports)
    # rounding can push a fraction of exactly 1 a few ulps over
    if real > bkk and real - bkk <= 1e-9 * bkk:
        real = float(bkk)
    return RootStatistics(real, bkk, real / bkk)


def _body_as_ellipsoid(body: Ball) -> Ellipsoid:
    return Ellipsoid.ball(float(body.radius), body.dim)


def mixed_volume_bodies(*bodies: BodySpec) -> float:
    """Mixed volume of balls and polytopes (any mix for n <= 2; one kind for n = 3)."""
    n = len(bodies)
    if any(b.dim != n for b in bodies):
        raise DimensionMismatch(f"need {n} bodies in R^{n}")
    balls = [b for b in bodies if isinstance(b, Ball)]
    polys = [b.hull() for b in bodies if isinstance(b, PolytopeBody)]
    if not balls:
        return float(mixed_volume_polytopes(*polys))
    if not polys:
        return mixed_volume_ellipsoids_exact(*(_body_as_ellipsoid(b) for b in balls))
    if n == 2:
        # V(P, B_R) = R * perimeter(P) / 2
        P, R = polys[0], float(balls[0].radius)
        V = P.vertex_array()
        if P.intrinsic_dim == 1:
            perim = 2 * float(np.linalg.norm(V[1] - V[0]))
        else:
            perim = float(np.linalg.norm(np.roll(V, -1, axis=0) - V, axis=1).sum())
        return R * perim / 2
    raise UnsupportedDimension("mixed ball/polytope tuples are supported for n <= 2 only")


def limit_real_fraction(*bodies: BodySpec) -> float:
    """Asymptotic real fraction ``V(ell(D_1), ...) / V(D_1, ...)`` for dilated bodies."""
    n = len(bodies)
    if n > 3:
        raise UnsupportedDimension(f"n <= 3 supported, got {n}")
    num = mixed_volume_ellipsoids_exact(*(limit_moment_matrix(b) for b in bodies))
    den = mixed_volume_bodies(*bodies)
    if den == 0:
        raise ZeroBKK("mixed volume of the bodies is zero")
    return num / den


class AFGaps(NamedTuple):
    first: float
    second: float
    scale: float


def af_inequality_gap(*supports: SupportSet) -> AFGaps:
    """Slack in the two Alexandrov-Fenchel type inequalities for expected root counts.

    With ``R(...)`` the expected real-root count, returns

    * ``R(L_1..L_n)^2 - R(.., L_{n-1}, L_{n-1}) R(.., L_n, L_n)``
    * ``R(L_1..L_n)^n - prod_i R(L_i, ..., L_i)``
    * a scale (largest term involved) for relative tolerances.
    """
    n = _check_supports(supports)
    if n < 2:
        raise ValidationError("the inequalities need n >= 2")
    mixed = expected_real_roots(*supports)
    head = list(supports[:-2])
    a = expected_real_roots(*(head + [supports[-2], supports[-2]]))
    b = expected_real_roots(*(head + [supports[-1], supports[-1]]))
    diag = [expected_real_roots(*([s] * n)) for s in supports]
    prod = float(np.prod(diag))
    gap1 = mixed**2 - a * b
    gap2 = mixed**n - prod
    scale = max(mixed**2, a * b, mixed**n, prod, 1e-300)
    return AFGaps(gap1, gap2, scale)
