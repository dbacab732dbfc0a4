from fractions import Fraction as F

import pytest

from chaintr.algebra import (FloatRing, IrrationalRootError, MultipleRootError,
                             Poly, RationalRing, SeriesRing, poly_roots)

Q = RationalRing()
z = Poly.x(Q)


def test_exact_roots_with_multiplicity():
    p = (z - 1) ** 2 * (z + F(1, 2)) * z ** 3
    got = poly_roots(p, multiplicities=True)
    assert got == [(F(-1, 2), 1), (F(0), 3), (F(1), 2)]
    flat = poly_roots(p)
    assert len(flat) == 6


def test_exact_irrational_raises():
    with pytest.raises(IrrationalRootError):
        poly_roots(z * z - 2)


def test_require_simple():
    with pytest.raises(MultipleRootError):
        poly_roots((z - 3) ** 2, require_simple=True)


def test_float_cubic_matches_reference():
    Rf = FloatRing()
    zf = Poly.x(Rf)
    p = zf ** 3 - zf - Rf.coerce(F(1, 5))
    rs = sorted(r.real for r in poly_roots(p))
    ref = [-0.87889, -0.20915, 1.08803]
    assert all(abs(a - b) < 5e-5 for a, b in zip(rs, ref))
    for r in poly_roots(p):
        assert abs(p(r)) < 1e-12


def test_float_cluster_detection():
    Rf = FloatRing()
    zf = Poly.x(Rf)
    p = (zf - 1.0) ** 3 * (zf + 2.0)
    pairs = poly_roots(p, multiplicities=True)
    ms = sorted(m for _, m in pairs)
    assert ms == [1, 3]
    triple = next(r for r, m in pairs if m == 3)
    assert abs(triple - 1.0) < 1e-4


def test_series_root_lift():
    S = SeriesRing("t", 4)
    x = Poly.x(S)
    # x^2 - (1 + t): branches +-(1 + t/2 - t^2/8 + ...)
    p = x * x - (S.one + S.t)
    roots = poly_roots(p)
    pos = next(r for r in roots if r.c[0] == 1)
    assert pos.c == (F(1), F(1, 2), F(-1, 8), F(1, 16), F(-5, 128))


def test_series_repeated_base_root_raises():
    S = SeriesRing("t", 3)
    x = Poly.x(S)
    with pytest.raises(MultipleRootError):
        poly_roots(x * x - x * S.t)  # double root at t=0
