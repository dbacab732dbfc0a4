from fractions import Fraction as F

from chaintr.algebra import Dual, Poly, RationalRing

Q = RationalRing()


def test_dual_arithmetic():
    x = Dual.var(Q, F(3), "x")
    y = Dual.var(Q, F(2), "y")
    f = x * x * y + y / x
    assert f.val == F(18) + F(2, 3)
    assert f.grad["x"] == F(12) - F(2, 9)   # 2xy - y/x^2
    assert f.grad["y"] == F(9) + F(1, 3)    # x^2 + 1/x


def test_dual_through_poly_eval():
    z = Poly.x(Q)
    p = z ** 3 - 2 * z
    x = Dual.var(Q, F(1, 2), "x")
    v = p(x)
    assert v.val == F(1, 8) - F(1)
    assert v.grad["x"] == F(3, 4) - F(2)


def test_dual_quotient_rule():
    x = Dual.var(Q, F(5), "x")
    f = (x * x + 1) / (x - 1)
    # f'(x) = (2x(x-1) - (x^2+1)) / (x-1)^2 = (x^2 - 2x - 1)/(x-1)^2
    assert f.grad["x"] == F(25 - 10 - 1, 16)


def test_dual_sparse_keys_dont_mix():
    a = Dual.var(Q, F(2), "a")
    b = Dual.var(Q, F(7), "b")
    p = a * b
    assert set(p.grad) == {"a", "b"}
    assert p.grad["a"] == F(7) and p.grad["b"] == F(2)


def test_dual_pow_identity_seed():
    x = Dual.var(Q, F(3), "x")
    assert (x ** 0).val == F(1) and not (x ** 0).grad
    assert (x ** 4).grad["x"] == F(108)
