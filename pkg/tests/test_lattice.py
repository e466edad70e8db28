import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realroots._rational import as_rational, to_json_number
from realroots.errors import DimensionMismatch, NotCentrallySymmetric, ValidationError
from realroots.geometry import volume
from realroots.lattice import (
    Ball,
    PolytopeBody,
    check_condition_star,
    dilate_and_intersect,
    load_body,
    load_support,
    parse_body,
    parse_support,
    random_support,
    symmetric_range,
    validate_support,
)

SQUARE = PolytopeBody(((1, 1), (-1, 1), (-1, -1), (1, -1)))
DIAMOND = PolytopeBody(((1, 0), (-1, 0), (0, 1), (0, -1)))


def test_validate_examples():
    assert validate_support([[1], [-1]]).size == 2
    cross = validate_support([(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)])
    assert cross.size == 5 and cross.has_origin
    with pytest.raises(NotCentrallySymmetric) as err:
        validate_support([[0], [1], [2]])
    assert err.value.point == (1,)
    assert "(1,)" in str(err.value)


def test_validate_errors():
    with pytest.raises(DimensionMismatch):
        validate_support([(1, 0), (-1,)])
    with pytest.raises(ValidationError):
        validate_support([])
    with pytest.raises(ValidationError):
        validate_support([[0.5], [-0.5]])
    # scalars are accepted as 1-vectors and duplicates collapse
    assert validate_support([1, -1, 1]).points == ((-1,), (1,))


def test_support_accessors():
    L = validate_support([(0, 0), (2, -1), (-2, 1), (0, 3), (0, -3)])
    assert L.max_frequency == 3
    assert L.positive_half() == [(0, 3), (2, -1)]
    assert L.array().shape == (5, 2)
    assert validate_support(**{"points": L.to_json()["points"]}) == L


def test_symmetric_range():
    L = symmetric_range(3)
    assert L.points == tuple((k,) for k in range(-3, 4))
    assert L.positive_half() == [(1,), (2,), (3,)]


@pytest.mark.parametrize(
    "body,m,count",
    [(Ball(1, 1), 3, 7), (Ball(1, 2), 2, 13), (SQUARE, 1, 9), (DIAMOND, 1, 5), (Ball(1, 3), 1, 7),
     (Ball(Fraction(1, 2), 2), 4, 13)],
)
def test_dilate_examples(body, m, count):
    L = dilate_and_intersect(body, m)
    assert L.size == count
    validate_support(L.points)


def test_dilate_ball_1d_is_range():
    assert dilate_and_intersect(Ball(1, 1), 3) == symmetric_range(3)


def test_dilate_lower_dimensional_segment():
    seg = PolytopeBody(((1, 1), (-1, -1)))
    assert dilate_and_intersect(seg, 3).points == tuple((k, k) for k in range(-3, 4))


def test_dilate_rejects_bad_m():
    for m in (0, -1, 1.5):
        with pytest.raises(ValidationError):
            dilate_and_intersect(Ball(1, 2), m)


@settings(max_examples=20)
@given(st.integers(1, 12), st.integers(0, 8))
def test_dilation_monotone(m1, dm):
    for body in (Ball(1, 2), SQUARE, DIAMOND):
        a = set(dilate_and_intersect(body, m1).points)
        b = set(dilate_and_intersect(body, m1 + dm).points)
        assert a <= b


@pytest.mark.parametrize("body", [Ball(1, 2), SQUARE, DIAMOND, Ball(1, 1)])
@pytest.mark.parametrize("m", [20, 35])
def test_cardinality_growth(body, m):
    from realroots.geometry import unit_ball_volume

    n = body.dim
    vol = unit_ball_volume(n) if isinstance(body, Ball) else float(volume(body.hull()))
    N = dilate_and_intersect(body, m).size
    assert abs(N / m**n - vol) <= 0.1 * vol


def test_condition_star():
    assert check_condition_star(Ball(2, 3))[0]
    ok, why = check_condition_star(PolytopeBody(((1, 1), (-1, -1))))
    assert ok and "(1, 1)" in why
    with pytest.raises(ValidationError):
        PolytopeBody(((1, "sqrt(2)"), (-1, "-sqrt(2)")))


def test_bodies_validate():
    with pytest.raises(NotCentrallySymmetric):
        PolytopeBody(((0, 0), (1, 0), (0, 1)))
    with pytest.raises(ValidationError):
        Ball(0, 2)
    with pytest.raises(ValidationError):
        Ball(1, 0)
    assert Ball("3/2", 2).radius == Fraction(3, 2)


def test_json_round_trip(tmp_path):
    L = validate_support([(0, 0), (1, 2), (-1, -2)])
    p = tmp_path / "s.json"
    p.write_text(json.dumps(L.to_json()))
    assert load_support(p) == L
    for body in (Ball(Fraction(3, 2), 2), SQUARE, PolytopeBody(((Fraction(1, 2),), (Fraction(-1, 2),)))):
        q = tmp_path / "b.json"
        q.write_text(json.dumps(body.to_json()))
        assert load_body(q) == body
    assert Ball(Fraction(1, 3), 2).to_json() == {"type": "ball", "radius": "1/3", "dim": 2}


def test_json_errors():
    with pytest.raises(ValidationError):
        parse_support({"dim": 2})
    with pytest.raises(ValidationError):
        parse_support({"dim": 0, "points": [[0]]})
    with pytest.raises(ValidationError):
        parse_body({"type": "cube"})
    with pytest.raises(ValidationError):
        parse_body({"type": "ball", "dim": 2})
    with pytest.raises(ValidationError):
        parse_body({"type": "polytope"})


def test_rational_parsing():
    assert as_rational("3/4") == Fraction(3, 4)
    assert as_rational("2") == 2 and isinstance(as_rational("4/2"), int)
    assert as_rational(0.5) == Fraction(1, 2)
    assert as_rational(0.1) == Fraction(1, 10)
    for bad in ("sqrt(2)", float("nan"), True, None, "1/0"):
        with pytest.raises(ValidationError):
            as_rational(bad)
    assert to_json_number(Fraction(3, 4)) == "3/4" and to_json_number(5) == 5


@settings(max_examples=30)
@given(st.integers(1, 3), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_random_support_is_symmetric(dim, K, seed):
    L = random_support(dim, K, np.random.default_rng(seed))
    assert validate_support(L.points, dim) == L
    assert L.max_frequency <= K
    assert np.linalg.matrix_rank(L.array().astype(float)) == dim
