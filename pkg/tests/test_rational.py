from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaintr.algebra import (INF, ClusteredPolesError, FloatRing, Poly,
                             RationalFn, RationalRing, local_expand,
                             partial_fractions, poly_roots, recombine, residue)

Q = RationalRing()
z = Poly.x(Q)


def test_reduction_and_monic_den():
    f = RationalFn((z - 1) * (z + 2) * 2, (z - 1) * 4)
    assert f.den.degree == 0
    assert f == RationalFn((z + 2), Poly.const(Q, 2))


def test_arithmetic_and_derivative():
    f = RationalFn(Poly.const(Q, 1), z)
    g = f + z            # 1/z + z
    assert g.num == z * z + 1 and g.den == z
    d = g.deriv()        # 1 - 1/z^2
    assert d == RationalFn(z * z - 1, z * z)
    assert (f * f) == RationalFn(Poly.const(Q, 1), z * z)
    assert (g / f) == z * z + 1


def test_eval_including_rational_argument():
    g = RationalFn(z * z + 1, z)
    assert g(F(2)) == F(5, 2)
    # substitute another rational function: g(1/z) = z + 1/z
    comp = g(RationalFn(Poly.const(Q, 1), z))
    assert comp == RationalFn(z * z + 1, z)


def test_local_expand_examples():
    s = local_expand(RationalFn(Poly.const(Q, 1), 1 - z), 0, 5)
    assert all(s.coeff(k) == F(1) for k in range(6))
    h = RationalFn(z * z + 1, z)
    s2 = local_expand(h, F(1), 3)
    assert [s2.coeff(k) for k in range(4)] == [F(2), F(0), F(1), F(-1)]
    s3 = local_expand(h, INF, 2)
    assert s3.shift == -1 and s3.coeff(-1) == F(1) and s3.coeff(1) == F(1)
    assert s3.coeff(0) == F(0)


def test_local_expand_detects_pole_order():
    f = RationalFn(z + 3, z ** 3)
    s = local_expand(f, 0, 0)
    assert s.shift == -3 and s.coeff(-3) == F(3) and s.coeff(-2) == F(1)


def test_residue_examples():
    assert residue(RationalFn(Poly.const(Q, 1), z * z - 1), F(1)) == F(1, 2)
    assert residue(RationalFn(z, (z - 2) ** 2), F(2)) == F(1)
    assert residue(RationalFn(z * z - 1, z), INF) == F(1)
    # residue at a regular point is zero
    assert residue(RationalFn(z, z - 2), F(0)) == F(0)


def test_global_residue_theorem_exact():
    f = RationalFn(z ** 2 + 3, (z - 1) * (z + 2) * z)
    tot = residue(f, F(0)) + residue(f, F(1)) + residue(f, F(-2)) + residue(f, INF)
    assert tot == F(0)


def test_partial_fractions_exact_round_trip():
    f = RationalFn(z ** 4 + 1, (z - 1) ** 2 * (z + 2))
    pp, parts = partial_fractions(f)
    assert pp.degree == 1
    assert set(parts) == {F(1), F(-2)}
    assert parts[F(1)][2] == F(2, 3)   # lim (z-1)^2 f = 2/3
    assert recombine(Q, pp, parts) == f


def test_partial_fractions_float_and_cluster_guard():
    Rf = FloatRing()
    zf = Poly.x(Rf)
    f = RationalFn(zf + 1, (zf - 1.0) * (zf + 3.0))
    pp, parts = partial_fractions(f)
    a = [p for p in parts if abs(p - 1) < 1e-8][0]
    assert abs(parts[a][1] - 0.5) < 1e-10
    g = RationalFn(Poly.const(Rf, 1), (zf - 1.0) * (zf - 1.0 - 1e-9))
    with pytest.raises(ClusteredPolesError):
        partial_fractions(g)


coef = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@settings(max_examples=30, deadline=None)
@given(st.lists(coef, min_size=1, max_size=4),
       st.lists(st.integers(min_value=-2, max_value=2), min_size=1, max_size=3, unique=True),
       st.lists(st.integers(min_value=1, max_value=2), min_size=3, max_size=3))
def test_global_residue_theorem_property(num, poles, mults):
    den = Poly.const(Q, 1)
    for p, m in zip(poles, mults):
        den = den * (z - F(p)) ** m
    f = RationalFn(Poly(Q, num), den)
    tot = residue(f, INF)
    for p, _ in poly_roots(f.den, multiplicities=True):
        tot = tot + residue(f, p)
    assert tot == F(0)


@settings(max_examples=30, deadline=None)
@given(st.lists(coef, min_size=1, max_size=5),
       st.lists(st.integers(min_value=-2, max_value=2), min_size=1, max_size=3, unique=True))
def test_partial_fraction_recombination_property(num, poles):
    den = Poly.from_roots(Q, [F(p) for p in poles])
    f = RationalFn(Poly(Q, num), den)
    pp, parts = partial_fractions(f)
    assert recombine(Q, pp, parts) == f
