from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaintr.algebra import (INF, LocalSeries, OrderExhausted, Poly,
                             RationalRing, RingError, series_solve)

Q = RationalRing()


def geo(upto):
    return LocalSeries(Q, [F(1)] * (upto + 1), 0, upto)


def test_strict_order_read_raises():
    s = geo(3)
    with pytest.raises(OrderExhausted):
        s.coeff(4)
    assert s.coeff(-2) == F(0)  # below shift is genuinely zero


def test_mul_order_propagation():
    a = LocalSeries(Q, [F(1), F(1)], 2, 3)   # u^2 + u^3
    b = geo(5)
    p = a * b
    # best trusted order: min(2+5, 0+3) = 3
    assert p.upto == 3
    assert p.coeff(2) == F(1) and p.coeff(3) == F(2)


def test_inverse_and_division():
    s = LocalSeries(Q, [F(1), F(-1)], 1, 2)  # u - u^2
    i = s.inverse()
    assert i.shift == -1
    assert i.coeff(-1) == F(1) and i.coeff(0) == F(1)
    one = s * i
    assert one.coeff(0) == F(1)


def test_integrate_and_log_guard():
    s = LocalSeries(Q, [F(2), F(0), F(3)], 0, 2)
    p = s.integrate()
    assert p.coeff(1) == F(2) and p.coeff(3) == F(1)
    bad = LocalSeries(Q, [F(1)], -1, -1)
    with pytest.raises(RingError):
        bad.integrate()
    ok = LocalSeries(Q, [F(1), F(0), F(4)], -2, 0)  # u^-2 + 4: residue slot zero
    pp = ok.integrate()
    assert pp.coeff(-1) == F(-1) and pp.coeff(1) == F(4)


def test_compose_with_principal_part():
    # f(v) = 1/v + v at v = u + u^2: 1/(u+u^2) = u^-1 - 1 + u - u^2 ...
    f = LocalSeries(Q, [F(1), F(0), F(1)], -1, 1)
    g = LocalSeries(Q, [F(0), F(1), F(1), F(0), F(0)], 0, 4)
    c = f.compose(g)
    assert c.coeff(-1) == F(1)
    assert c.coeff(0) == F(-1)
    assert c.coeff(1) == F(2)  # u from 1/v plus u from v


def test_deriv_integrate_round_trip():
    s = LocalSeries(Q, [F(5), F(3), F(0), F(7)], -3, 0)
    d = s.deriv()
    # integrate undoes deriv away from the u^0 constant (killed by deriv)
    r = d.integrate()
    assert r.coeff(-3) == F(5) and r.coeff(-1) == F(0)


def test_series_solve_square_root():
    # w^2 = 1 + u, w(0) = 1  ->  1 + u/2 - u^2/8 + u^3/16
    u = LocalSeries.u(Q, 3)
    w = series_solve(lambda w: w * w - (1 + u), 1, 3, R=Q)
    assert [w.coeff(k) for k in range(4)] == [F(1), F(1, 2), F(-1, 8), F(1, 16)]


def test_series_solve_functional_inverse():
    # solve w + w^2 = u: Lagrange inversion of z + z^2
    u = LocalSeries.u(Q, 5)
    w = series_solve(lambda w: w + w * w - u, 0, 5, R=Q)
    assert [w.coeff(k) for k in range(6)] == [F(0), F(1), F(-1), F(2), F(-5), F(14)]


def test_series_solve_rejects_multiple_root():
    u = LocalSeries.u(Q, 3)
    with pytest.raises(RingError):
        series_solve(lambda w: w * w - u * u, 0, 3, R=Q)


def test_eval_scalar():
    s = LocalSeries(Q, [F(1), F(2), F(3)], -1, 1)  # u^-1 + 2 + 3u
    assert s.eval_scalar(F(1, 2)) == F(2) + F(2) + F(3, 2)


fracs = st.fractions(min_value=-3, max_value=3, max_denominator=6)


@st.composite
def series(draw, upto=4):
    shift = draw(st.integers(min_value=-2, max_value=1))
    n = upto - shift + 1
    return LocalSeries(Q, [draw(fracs) for _ in range(n)], shift, upto)


@settings(max_examples=50, deadline=None)
@given(series(), series())
def test_product_rule(a, b):
    lhs = (a * b).deriv()
    rhs = a.deriv() * b + a * b.deriv()
    assert lhs.eq_to_order(rhs.truncate(lhs.upto))


@settings(max_examples=50, deadline=None)
@given(series())
def test_inverse_round_trip(s):
    if s.is_zero_to_order():
        return
    p = s * s.inverse()
    v = p.valuation()
    assert v == 0 and p.coeff(0) == F(1)
