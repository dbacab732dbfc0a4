from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaintr.algebra import (FloatRing, RationalRing, RingError, SeriesRing,
                             TruncSeries, parse_ring, ring_tag)

Q = RationalRing()
Rf = FloatRing()


def test_rational_coerce_forms():
    assert Q.coerce("3/7") == F(3, 7)
    assert Q.coerce(5) == F(5)
    assert Q.coerce(0.5) == F(1, 2)
    assert Q.coerce(F(2, 3)) == F(2, 3)


def test_rational_sqrt_perfect_square_only():
    assert Q.sqrt(F(9, 4)) == F(3, 2)
    with pytest.raises(RingError):
        Q.sqrt(F(2))


def test_float_ring_complex_transparent():
    v = Rf.coerce(2) ** 0.5 if False else Rf.sqrt(Rf.coerce(-4))
    assert abs(v - 2j) < 1e-12
    assert Rf.to_float(complex(3.0, 1e-15)) == 3.0


def test_parse_ring_specs():
    assert parse_ring("rational").name == "rational"
    assert parse_ring("float").name == "float"
    s = parse_ring("series:g4:5")
    assert s.param == "g4" and s.order == 5
    assert ring_tag(s) == {"series": {"param": "g4", "order": 5}}
    with pytest.raises(Exception):
        parse_ring("padic")


def test_series_ring_basics():
    S = SeriesRing("t", 3)
    t = S.t
    u = (S.one + t).inverse()
    assert u.c == (F(1), F(-1), F(1), F(-1))
    assert (u * (S.one + t)).c == (F(1), F(0), F(0), F(0))
    sq = S.sqrt(S.one + t)
    assert sq.c == (F(1), F(1, 2), F(-1, 8), F(1, 16))


def test_series_divide_by_nonunit_raises():
    S = SeriesRing("t", 3)
    with pytest.raises(RingError):
        S.t.inverse()


frac = st.fractions(min_value=-4, max_value=4, max_denominator=9)


@st.composite
def trunc_series(draw, order=3):
    S = SeriesRing("t", order)
    return TruncSeries(S, [draw(frac) for _ in range(order + 1)])


@settings(max_examples=60, deadline=None)
@given(trunc_series(), trunc_series(), trunc_series())
def test_series_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a - a == a.ring.zero


@settings(max_examples=40, deadline=None)
@given(trunc_series())
def test_series_unit_inverse_round_trip(a):
    if a.is_unit():
        assert a * a.inverse() == a.ring.one
