from fractions import Fraction
from math import pi, sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realroots.geometry import Ellipsoid, convex_hull, hausdorff_distance
from realroots.lattice import Ball, PolytopeBody, dilate_and_intersect, symmetric_range, validate_support
from realroots.moments import (
    ball_limit_constants,
    ball_slice_moment,
    beta_closed_form,
    beta_n,
    beta_quadrature,
    limit_moment_exact,
    limit_moment_matrix,
    moment_matrix,
    monte_carlo_second_moment,
    polytope_second_moment,
    sigma_n,
    simplex_second_moment,
)
from realroots.errors import ValidationError

SQUARE = PolytopeBody(((1, 1), (-1, 1), (-1, -1), (1, -1)))
OCTAHEDRON = PolytopeBody(((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)))
HEXAGON = PolytopeBody(((2, 0), (1, 1), (-1, 1), (-2, 0), (-1, -1), (1, -1)))


@pytest.mark.parametrize("lam", [1, 2, 5, 9])
def test_moment_matrix_range(lam):
    assert moment_matrix(symmetric_range(lam)).shape[0, 0] == pytest.approx(lam * (lam + 1) / 3, rel=1e-15)
    assert moment_matrix(validate_support([[-lam], [lam]])).shape[0, 0] == lam**2


def test_moment_matrix_cross():
    L = validate_support([(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)])
    assert np.allclose(moment_matrix(L).shape, 0.4 * np.eye(2))


def test_moment_matrix_origin_only_is_zero():
    assert np.all(moment_matrix(validate_support([(0, 0)])).shape == 0)


pts2 = st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=1, max_size=10)


@settings(max_examples=60)
@given(pts2, st.integers(2, 5))
def test_moment_matrix_psd_and_dilation(pts, m):
    full = sorted(set(pts) | {(-a, -b) for a, b in pts})
    L = validate_support(full)
    M = moment_matrix(L).shape
    assert np.allclose(M, M.T)
    assert np.linalg.eigvalsh(M).min() >= -1e-12
    assert (np.abs(M).max() == 0) == (L.points == ((0, 0),))
    Lm = validate_support([(m * a, m * b) for a, b in full])
    assert np.allclose(moment_matrix(Lm).shape, m**2 * M)


def test_simplex_moment_unit_interval_and_triangle():
    vol, M = simplex_second_moment([(0,), (1,)])
    assert vol == 1 and M == [[Fraction(1, 3)]]
    vol, M = simplex_second_moment([(0, 0), (1, 0), (0, 1)])
    # int over the unit triangle: x^2 -> 1/12, xy -> 1/24
    assert vol == Fraction(1, 2)
    assert M == [[Fraction(1, 12), Fraction(1, 24)], [Fraction(1, 24), Fraction(1, 12)]]


@pytest.mark.parametrize(
    "body,expected",
    [
        (Ball(1, 1), [[Fraction(1, 3)]]),
        (Ball(3, 2), [[Fraction(9, 4), 0], [0, Fraction(9, 4)]]),
        (SQUARE, [[Fraction(1, 3), 0], [0, Fraction(1, 3)]]),
        (OCTAHEDRON, [[Fraction(1, 10) if i == j else 0 for j in range(3)] for i in range(3)]),
        (PolytopeBody(((1, 1), (-1, -1))), [[Fraction(1, 3)] * 2] * 2),
    ],
    ids=["segment", "disk3", "square", "octahedron", "diagonal"],
)
def test_limit_moment_exact(body, expected):
    assert limit_moment_exact(body) == expected


def test_limit_ellipsoid_ball_1d():
    E = limit_moment_matrix(Ball(1, 1))
    assert E.support([1.0]) == pytest.approx(1 / sqrt(3))


@pytest.mark.parametrize("body", [SQUARE, HEXAGON, OCTAHEDRON, Ball(1, 2), Ball(1, 3)], ids=str)
def test_limit_moment_matches_monte_carlo_oracle(body):
    exact = limit_moment_matrix(body).shape
    mc, se = monte_carlo_second_moment(body, samples=1_000_000, seed=3)
    assert np.all(np.abs(mc - exact) <= 5 * se + 1e-12)


def test_polytope_second_moment_needs_full_dimension():
    with pytest.raises(ValidationError):
        polytope_second_moment(convex_hull([(1, 1), (-1, -1)]))


def test_hexagon_moment_by_hand():
    # hexagon = square [-1,1]^2 plus two triangles with apex (+-2, 0)
    vol, M = polytope_second_moment(HEXAGON.hull())
    assert vol == 6
    # int x^2: square 4/3, each triangle (apex 2, base x=1) adds 2 int_1^2 x^2 (2 - x) dx = 11/6
    assert M[0][0] == Fraction(4, 3) + 2 * Fraction(11, 6) == 5


def test_convergence_of_dilated_moments():
    m = 100
    for body in (Ball(1, 2), SQUARE):
        Mm = moment_matrix(dilate_and_intersect(body, m)).shape / m**2
        lim = limit_moment_matrix(body)
        assert np.abs(Mm - lim.shape).max() < 0.01
        assert hausdorff_distance(Ellipsoid(Mm), lim) < 0.01


@pytest.mark.parametrize("n,value", [(1, 2 / 3), (2, pi / 8), (10, 21 * pi / 1024)])
def test_beta_examples(n, value):
    assert beta_n(n).value == pytest.approx(value, rel=1e-14)


@pytest.mark.parametrize("n", range(1, 65))
def test_beta_routes_agree(n):
    assert beta_quadrature(n) == pytest.approx(beta_closed_form(n), rel=1e-10)


def test_beta_closed_form_vs_monte_carlo_ball():
    # (1/sigma_n) int_B x_1^2 = sigma_{n-1} beta_n / sigma_n, checked against rejection sampling
    for n in (2, 3):
        mc, se = monte_carlo_second_moment(Ball(1, n), samples=1_000_000, seed=11)
        target = sigma_n(n - 1) * beta_closed_form(n) / sigma_n(n)
        assert abs(mc[0, 0] - target) <= 5 * se[0, 0]


def test_beta_range():
    with pytest.raises(ValidationError):
        beta_n(0)
    with pytest.raises(ValidationError):
        beta_n(65)


@pytest.mark.parametrize("n,value", [(0, 1.0), (1, 2.0), (2, pi), (3, 4 * pi / 3)])
def test_sigma(n, value):
    assert sigma_n(n) == pytest.approx(value, rel=1e-15)


@pytest.mark.parametrize("n", range(1, 11))
def test_slicing_identity(n):
    assert ball_slice_moment(n) == pytest.approx(1 / (n + 2), abs=1e-10)


def test_ball_constants():
    c1 = ball_limit_constants(1)
    assert c1["inertia"] == pytest.approx(1 / sqrt(3)) and c1["beta_ratio"] == pytest.approx(1 / sqrt(3))
    c2 = ball_limit_constants(2)
    assert c2["inertia"] == pytest.approx(0.25) and c2["beta_ratio"] == pytest.approx(0.125)
    for n in range(1, 12):
        c = ball_limit_constants(n)
        assert c["inertia_via_slices"] == pytest.approx(c["inertia"], rel=1e-10)
