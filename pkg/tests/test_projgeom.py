from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from birdeg.projgeom import (
    PointError,
    PointTag,
    ProjPoint,
    canonicalize,
    classify,
    diagonal_index,
    e_point,
    eta_parameter,
    eta_point,
    sigma_point,
    special_point,
)

coords = st.lists(st.integers(-50, 50), min_size=3, max_size=6).filter(any)
params = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def test_canonical_form():
    assert canonicalize(["-2", "4", "0"]).coords == (1, -2, 0)
    assert canonicalize([Fraction(1, 2), Fraction(1, 3), 1]).coords == (3, 2, 6)
    with pytest.raises(PointError):
        canonicalize([0, 0, 0])
    with pytest.raises(PointError):
        ProjPoint((1, 2))


@given(coords, st.integers(-9, 9).filter(bool))
def test_scaling_invariance(c, k):
    assert canonicalize(c) == canonicalize([k * v for v in c])


def test_classification():
    assert classify(e_point(0, 3)).tag is PointTag.INDETERMINATE
    p = classify(ProjPoint((1, 0, 2)))
    assert p.tag is PointTag.ON_EXCEPTIONAL and p.exceptional_index == 1
    assert classify(ProjPoint((1, 2, 3))).tag is PointTag.GENERIC


@given(st.integers(0, 4), params)
def test_eta_parameter_roundtrip(j, c):
    p = eta_point(j, c, 4)
    if c == 0:
        assert p == e_point(j, 4)
    else:
        assert eta_parameter(p, j) == c


def test_named_points():
    assert sigma_point(1, 2) == ProjPoint((1, 0, 1))
    assert special_point("eta", 0, 2, "1/2") == ProjPoint((1, -1, -1))
    assert diagonal_index(ProjPoint((5, 1, 1))) == 0
    assert diagonal_index(ProjPoint((1, 2, 3))) is None
    with pytest.raises(PointError):
        special_point("sigma", 0, 2, 1)
    with pytest.raises(PointError):
        e_point(3, 2)
    assert ProjPoint.from_json(e_point(2, 2).to_json()) == e_point(2, 2)
