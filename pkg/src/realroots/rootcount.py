"""Counting actual roots of sampled systems.

* one variable, real: sign-change scan on a uniform grid, bisection, plus a
  check of every grid-level near-touch for a hidden pair of roots;
* one variable, complex: eigenvalues of the companion matrix of
  ``z^K f(z)``;
* two variables, real: marching squares on the zero curve of ``f1`` over the
  periodic grid, sign changes of ``f2`` along the extracted segments, then
  2-D Newton polishing and de-duplication;
* a Monte Carlo estimator of the expected root count built on these.
"""

from __future__ import annotations

import logging
from math import ceil, pi

import numpy as np
from scipy.optimize import brentq

from .errors import (
    DegenerateSample,
    DimensionMismatch,
    ExcessiveDegeneracy,
    GridTooCoarse,
    LeadingCoefficientZero,
    UnsupportedDimension,
    ValidationError,
)
from .lattice import SupportSet
from .montecarlo import MVEstimate, RunningStats, run_chunks
from .sampler import TrigPolynomial, evaluate, gradient, sample, to_laurent

logger = logging.getLogger(__name__)

__all__ = [
    "real_roots_1d",
    "count_real_roots_1d",
    "laurent_roots_1d",
    "count_complex_roots_1d",
    "real_roots_2d",
    "count_real_roots_2d",
    "default_grid",
    "mc_expected_roots",
]

TWO_PI = 2 * pi
# pieces per contour chord when looking for sign changes of f2 (2-D counting)
SUBDIVISIONS = 4
# |f| below this (relative to the coefficient norm) at an extremum means a tangential zero
TANGENCY_TOL = 1e-9


def _bisect(fun, lo, hi, flo, tol=1e-12):
    """Vectorised bisection on brackets ``[lo, hi]`` where ``fun`` changes sign."""
    lo, hi = lo.copy(), hi.copy()
    slo = flo >= 0
    while np.any(hi - lo > tol):
        mid = 0.5 * (lo + hi)
        smid = fun(mid) >= 0
        same = smid == slo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def real_roots_1d(f: TrigPolynomial, density: int = 16) -> np.ndarray:
    """Sorted zeros of a one-variable trigonometric polynomial in ``[0, 2 pi)``.

    Raises :class:`DegenerateSample` if ``f`` has a tangential zero.
    """
    if f.dim != 1:
        raise DimensionMismatch("real_roots_1d needs a one-variable polynomial")
    norm = float(np.linalg.norm(f.coeffs))
    if norm == 0:
        raise ValidationError("polynomial is identically zero")
    K = f.support.max_frequency
    if K == 0:
        return np.empty(0)
    M = density * K + 64
    h = TWO_PI / M
    t = h * np.arange(M)
    v = evaluate(f, t)
    s = v >= 0
    change = np.flatnonzero(s != np.roll(s, -1))
    roots = list(_bisect(lambda x: evaluate(f, x), t[change], t[change] + h, v[change]))

    # a pair of roots can hide between grid points; look at every local
    # minimum of |f| that is small enough for f to cross zero nearby
    a = np.abs(v)
    curv = np.sqrt(2) * K * K * float(np.abs(f.coeffs).sum())
    near = (a <= np.roll(a, 1)) & (a <= np.roll(a, -1)) & (a <= curv * h * h / 2 + TANGENCY_TOL * norm)
    quiet = (s == np.roll(s, 1)) & (s == np.roll(s, -1))
    for k in np.flatnonzero(near & quiet):
        lo, hi = t[k] - h, t[k] + h
        df = lambda x: float(gradient(f, x)[0])
        dlo, dhi = df(lo), df(hi)
        if dlo == 0 or dhi == 0 or (dlo > 0) == (dhi > 0):
            continue
        tc = brentq(df, lo, hi, xtol=1e-14)
        fc = float(evaluate(f, tc))
        if abs(fc) < TANGENCY_TOL * norm:
            raise DegenerateSample(f"tangential zero near theta = {tc % TWO_PI:.6f}")
        if (fc >= 0) != s[k]:
            fun = lambda x: evaluate(f, x)
            roots.append(brentq(fun, lo, tc, xtol=1e-13))
            roots.append(brentq(fun, tc, hi, xtol=1e-13))
    return np.sort(np.mod(roots, TWO_PI))


def count_real_roots_1d(f: TrigPolynomial, density: int = 16) -> int:
    """Number of zeros of ``f`` on the circle (all transversal)."""
    return len(real_roots_1d(f, density))


def laurent_roots_1d(f: TrigPolynomial) -> np.ndarray:
    """Nonzero complex roots of ``sum a_k z^k`` via the companion matrix of ``z^K f``."""
    if f.dim != 1:
        raise DimensionMismatch("laurent_roots_1d needs a one-variable polynomial")
    K = f.support.max_frequency
    if K == 0:
        return np.empty(0, dtype=complex)
    a = to_laurent(f)
    # coefficients of p(z) = z^K f(z), lowest degree first
    p = np.zeros(2 * K + 1, dtype=complex)
    for (k,), c in a.items():
        p[k + K] = c
    lead = p[-1]
    if lead == 0:
        raise LeadingCoefficientZero(f"coefficient of z^{K} vanishes")
    d = 2 * K
    C = np.zeros((d, d), dtype=complex)
    C[1:, :-1] = np.eye(d - 1)
    C[:, -1] = -p[:-1] / lead
    z = np.linalg.eigvals(C)
    return z[np.abs(z) >= 1e-10]


def count_complex_roots_1d(f: TrigPolynomial) -> int:
    return len(laurent_roots_1d(f))


# ---------------------------------------------------------------------------
# two variables


def default_grid(*polys: TrigPolynomial) -> int:
    K = max(p.support.max_frequency for p in polys)
    return max(64, 48 * K)


def _wrap(d):
    return (d + pi) % TWO_PI - pi


def real_roots_2d(f1: TrigPolynomial, f2: TrigPolynomial, grid: int | None = None, bkk: int | None = None,
                  diagnostics: dict | None = None, refinements: int = 3) -> np.ndarray:
    """Common zeros of two trigonometric polynomials on the 2-torus, shape (r, 2).

    Transversal common zeros come in even numbers (each closed component of
    ``f1 = 0`` crosses ``f2 = 0`` an even number of times), and there are at
    most ``bkk`` of them. A count that is odd or above ``bkk`` means the grid
    missed or split a close pair, so the grid is doubled up to
    ``refinements`` times before :class:`GridTooCoarse` is raised.
    :class:`DegenerateSample` is raised for a (numerically) singular Jacobian
    at a root. Candidates where Newton does not converge are dropped and
    counted in ``diagnostics["newton_failures"]``.
    """
    if f1.dim != 2 or f2.dim != 2:
        raise DimensionMismatch("real_roots_2d needs two polynomials in two variables")
    if diagnostics is None:
        diagnostics = {}
    N = default_grid(f1, f2) if grid is None else int(grid)
    for _ in range(refinements + 1):
        roots = _real_roots_2d_once(f1, f2, N, diagnostics)
        odd = len(roots) % 2 == 1
        if not odd and (bkk is None or len(roots) <= bkk):
            return roots
        diagnostics["grid_retries"] = diagnostics.get("grid_retries", 0) + 1
        logger.debug("grid %d gave %d roots (bkk %s); refining", N, len(roots), bkk)
        N *= 2
    why = "an odd number of" if odd else f"more than bkk = {bkk}"
    raise GridTooCoarse(f"still {why} roots ({len(roots)}) at grid {N // 2}")


def _real_roots_2d_once(f1, f2, N, diagnostics):
    K = max(f1.support.max_frequency, f2.support.max_frequency)
    if N < 32 * max(K, 1):
        raise ValidationError(f"grid {N} is below 32 x max frequency ({K})")
    diagnostics["grid"] = N
    h = TWO_PI / N
    t = h * np.arange(N)
    nodes = np.stack(np.meshgrid(t, t, indexing="ij"), axis=-1)
    F1 = evaluate(f1, nodes)
    S = F1 >= 0

    # crossing points on horizontal (x) and vertical (y) edges
    ex = S != np.roll(S, -1, axis=0)
    ey = S != np.roll(S, -1, axis=1)
    ix, jx = np.nonzero(ex)
    iy, jy = np.nonzero(ey)
    starts = np.concatenate([nodes[ix, jx], nodes[iy, jy]])
    dirs = np.concatenate([np.tile([h, 0.0], (len(ix), 1)), np.tile([0.0, h], (len(iy), 1))])
    if len(starts) == 0:
        return np.empty((0, 2))
    f0 = np.concatenate([F1[ix, jx], F1[iy, jy]])
    s_par = _bisect(lambda u: evaluate(f1, starts + u[:, None] * dirs), np.zeros(len(starts)), np.ones(len(starts)), f0, tol=1e-13)
    P = starts + s_par[:, None] * dirs
    G = evaluate(f2, P)

    idx_x = -np.ones((N, N), dtype=np.int64)
    idx_y = -np.ones((N, N), dtype=np.int64)
    idx_x[ix, jx] = np.arange(len(ix))
    idx_y[iy, jy] = len(ix) + np.arange(len(iy))

    bottom, top = idx_x, np.roll(idx_x, -1, axis=1)
    left, right = idx_y, np.roll(idx_y, -1, axis=0)
    ncross = (bottom >= 0).astype(int) + (top >= 0) + (left >= 0) + (right >= 0)

    segs = []
    two = ncross == 2
    if np.any(two):
        E = np.stack([bottom[two], right[two], top[two], left[two]], axis=1)
        E = np.sort(E, axis=1)[:, 2:]
        segs.append(E)
    four = np.argwhere(ncross == 4)
    if len(four):
        i, j = four[:, 0], four[:, 1]
        centers = np.column_stack([(i + 0.5) * h, (j + 0.5) * h])
        joined = (evaluate(f1, centers) >= 0) == S[i, j]
        b, r, tp, lf = bottom[i, j], right[i, j], top[i, j], left[i, j]
        segs.append(np.where(joined[:, None], np.column_stack([b, r]), np.column_stack([lf, b])))
        segs.append(np.where(joined[:, None], np.column_stack([tp, lf]), np.column_stack([r, tp])))
    if not segs:
        return np.empty((0, 2))
    segs = np.concatenate(segs)
    # Sub-sample each chord (interior points pulled back onto f1 = 0) so that
    # two crossings of f2 inside one cell are not lost to cancelling signs.
    pa, pb = P[segs[:, 0]], P[segs[:, 1]]
    frac = np.linspace(0.0, 1.0, SUBDIVISIONS + 1)
    Q = pa[:, None, :] + frac[None, :, None] * _wrap(pb - pa)[:, None, :]
    inner = Q[:, 1:-1].reshape(-1, 2)
    g1 = gradient(f1, inner)
    shift = (evaluate(f1, inner) / np.maximum((g1 * g1).sum(axis=1), 1e-300))[:, None] * g1
    inner = inner - np.where(np.linalg.norm(shift, axis=1, keepdims=True) < h, shift, 0.0)
    Q[:, 1:-1] = inner.reshape(len(Q), SUBDIVISIONS - 1, 2)
    GQ = np.empty(Q.shape[:2])
    GQ[:, 0], GQ[:, -1] = G[segs[:, 0]], G[segs[:, 1]]
    GQ[:, 1:-1] = evaluate(f2, inner).reshape(len(Q), SUBDIVISIONS - 1)
    hit = (GQ[:, :-1] >= 0) != (GQ[:, 1:] >= 0)
    if not np.any(hit):
        return np.empty((0, 2))
    si, k = np.nonzero(hit)
    qa, qb = Q[si, k], Q[si, k + 1]
    ga, gb = GQ[si, k], GQ[si, k + 1]
    w = ga / (ga - gb)
    X0 = qa + w[:, None] * _wrap(qb - qa)

    roots, ok = _newton_2d(f1, f2, X0, step_cap=h)
    nfail = int((~ok).sum())
    if nfail:
        diagnostics["newton_failures"] = diagnostics.get("newton_failures", 0) + nfail
        logger.debug("Newton failed from %d of %d candidates", nfail, len(X0))
    roots = _dedupe(np.mod(roots[ok], TWO_PI))
    if len(roots):
        J = np.stack([gradient(f1, roots), gradient(f2, roots)], axis=1)
        det = np.abs(np.linalg.det(J))
        scale = np.linalg.norm(J[:, 0], axis=1) * np.linalg.norm(J[:, 1], axis=1)
        if np.any(det < TANGENCY_TOL * np.maximum(scale, 1e-300)):
            raise DegenerateSample("singular Jacobian at a common zero")
    return roots


def _newton_2d(f1, f2, X, step_cap, tol=1e-10, max_iter=50):
    X = X.copy()
    done = np.zeros(len(X), dtype=bool)
    for _ in range(max_iter):
        act = ~done
        if not np.any(act):
            break
        Xa = X[act]
        F = np.column_stack([evaluate(f1, Xa), evaluate(f2, Xa)])
        J = np.stack([gradient(f1, Xa), gradient(f2, Xa)], axis=1)
        det = np.linalg.det(J)
        good = np.abs(det) > 1e-300
        step = np.zeros_like(Xa)
        step[good] = np.linalg.solve(J[good], F[good][..., None])[..., 0]
        norm = np.linalg.norm(step, axis=1)
        shrink = np.where(norm > step_cap, step_cap / np.maximum(norm, 1e-300), 1.0)
        X[act] = Xa - step * shrink[:, None]
        conv = good & (norm < tol)
        done[np.flatnonzero(act)[conv]] = True
    return X, done


def _dedupe(R, radius=1e-4):
    keep = []
    for r in R:
        if all(np.linalg.norm(_wrap(r - q)) >= radius for q in keep):
            keep.append(r)
    return np.array(keep).reshape(-1, 2)


def count_real_roots_2d(f1: TrigPolynomial, f2: TrigPolynomial, grid: int | None = None, bkk: int | None = None,
                        diagnostics: dict | None = None) -> int:
    return len(real_roots_2d(f1, f2, grid, bkk, diagnostics))


# ---------------------------------------------------------------------------
# Monte Carlo


def _count_once(polys, kind, grid, bkk, diag):
    n = len(polys)
    if n == 1:
        if kind == "complex":
            return count_complex_roots_1d(polys[0])
        return count_real_roots_1d(polys[0])
    return count_real_roots_2d(polys[0], polys[1], grid, bkk, diag)


def _root_chunk(seq, count, supports, kind, grid, bkk):
    rng = np.random.default_rng(seq)
    stats = RunningStats()
    diag = {"resamples": 0, "newton_failures": 0, "grid_retries": 0}
    cap = max(1, ceil(0.01 * count))
    values = np.empty(count)
    k = 0
    while k < count:
        polys = [sample(s, rng) for s in supports]
        try:
            values[k] = _count_once(polys, kind, grid, bkk, diag)
        except DegenerateSample as exc:
            diag["resamples"] += 1
            logger.info("resampling: %s", exc)
            if diag["resamples"] > cap:
                raise ExcessiveDegeneracy(f"{diag['resamples']} degenerate samples out of {k + 1}") from exc
            continue
        k += 1
    stats.push(values)
    return stats, diag


def mc_expected_roots(*supports: SupportSet, samples: int = 2000, seed: int = 0, kind: str = "real",
                      workers: int = 1, grid: int | None = None) -> MVEstimate:
    """Sample mean and standard error of per-system root counts.

    ``kind="complex"`` (n = 1 only) counts roots in ``C \\ {0}``. For n = 2
    the BKK count bounds every sample; exceeding it triggers a grid refinement.
    """
    from .mixedvol import bkk_count

    n = len(supports)
    if n not in (1, 2):
        raise UnsupportedDimension(f"root counting is implemented for n <= 2, got {n}")
    if any(s.dim != n for s in supports):
        raise DimensionMismatch(f"need {n} supports in Z^{n}")
    if kind not in ("real", "complex"):
        raise ValidationError(f"kind must be 'real' or 'complex', got {kind!r}")
    if kind == "complex" and n != 1:
        raise UnsupportedDimension("complex root counting is implemented for n = 1 only")
    if samples < 2:
        raise ValidationError("need at least 2 samples")
    bkk = bkk_count(*supports) if n == 2 else None
    stats, diag = run_chunks(_root_chunk, samples, seed, workers, (tuple(supports), kind, grid, bkk))
    diag.update({"kind": kind, "samples": stats.count, "seed": seed, "workers": workers})
    if n == 2:
        diag["grid"] = grid or max(64, 48 * max(s.max_frequency for s in supports))
    return MVEstimate(stats.mean, stats.std_error, stats.count, seed, diag)
