"""Pluggable scalar rings: exact rationals, tolerant floats, truncated formal series.

Every ring hands out plain elements (Fraction, complex, TruncSeries) and the
ring object itself only carries constructors and predicates, so generic code
can mix elements with Python ints freely via operator overloading.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction


class RingError(ArithmeticError):
    pass


def _fraction_from(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        # decimal reading, not bit pattern: 0.05 means 1/20
        return Fraction(str(v))
    raise RingError(f"cannot read {v!r} as an exact rational")


def _fraction_sqrt(a: Fraction) -> Fraction:
    if a < 0:
        raise RingError("square root of a negative rational")
    pn, pd = math.isqrt(a.numerator), math.isqrt(a.denominator)
    if pn * pn != a.numerator or pd * pd != a.denominator:
        raise RingError(f"{a} is not a perfect square; use the float ring or a monic gauge")
    return Fraction(pn, pd)


class Ring:
    exact = False
    name = "?"

    def coerce(self, v):
        raise NotImplementedError

    def from_fraction(self, fr):
        return self.coerce(fr)

    def is_zero(self, a, tol=None):
        raise NotImplementedError

    def eq(self, a, b, tol=None):
        return self.is_zero(a - b, tol)

    def div(self, a, b):
        return a / b

    def inv(self, a):
        return self.div(self.one, a)

    def sqrt(self, a):
        raise NotImplementedError

    def mag(self, a) -> float:
        """Rough magnitude, used for pivot selection only."""
        raise NotImplementedError

    def to_float(self, a):
        raise NotImplementedError

    def __repr__(self):
        return f"<ring {self.name}>"


class RationalRing(Ring):
    exact = True
    name = "rational"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, v):
        return _fraction_from(v)

    def is_zero(self, a, tol=None):
        return a == 0

    def sqrt(self, a):
        return _fraction_sqrt(a)

    def mag(self, a):
        return abs(float(a)) if a else 0.0

    def to_float(self, a):
        return float(a)


class FloatRing(Ring):
    """Complex-transparent floating scalars with one global zero tolerance."""

    exact = False
    name = "float"
    zero = complex(0.0)
    one = complex(1.0)

    def __init__(self, eps: float = 1e-12):
        self.eps = eps

    def coerce(self, v):
        if isinstance(v, complex):
            return v
        if isinstance(v, (int, float)):
            return complex(v)
        if isinstance(v, Fraction):
            return complex(float(v))
        if isinstance(v, str):
            return complex(float(Fraction(v)))
        raise RingError(f"cannot read {v!r} as a float scalar")

    def is_zero(self, a, tol=None):
        return abs(a) <= (self.eps if tol is None else tol)

    def sqrt(self, a):
        return cmath.sqrt(a)

    def mag(self, a):
        return abs(a)

    def to_float(self, a):
        if isinstance(a, complex) and abs(a.imag) <= self.eps * (1.0 + abs(a.real)):
            return a.real
        return a


class TruncSeries:
    """Power series in one named coupling, truncated at a fixed order.

    Coefficients are exact rationals; arithmetic never extends the order.
    """

    __slots__ = ("ring", "c")

    def __init__(self, ring: "SeriesRing", coeffs):
        c = list(coeffs)
        if len(c) != ring.order + 1:
            raise RingError("series length does not match ring order")
        self.ring = ring
        self.c = tuple(Fraction(x) if not isinstance(x, Fraction) else x for x in c)

    # -- helpers -------------------------------------------------------
    def _co(self, other):
        if isinstance(other, TruncSeries):
            if other.ring is not self.ring and (other.ring.param != self.ring.param
                                                or other.ring.order != self.ring.order):
                raise RingError("mixed series rings")
            return other
        return self.ring.coerce(other)

    def _co_or_ni(self, other):
        # defer to the other operand (e.g. a Dual) instead of failing, so
        # reflected operators get their chance
        try:
            return self._co(other)
        except (RingError, TypeError, ValueError):
            return None

    def is_unit(self):
        return self.c[0] != 0

    def valuation(self):
        for k, x in enumerate(self.c):
            if x != 0:
                return k
        return self.ring.order + 1  # zero series

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        o = self._co_or_ni(other)
        if o is None:
            return NotImplemented
        return TruncSeries(self.ring, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.ring, [-a for a in self.c])

    def __sub__(self, other):
        o = self._co_or_ni(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._co_or_ni(other)
        if o is None:
            return NotImplemented
        return (-self) + o

    def __mul__(self, other):
        o = self._co_or_ni(other)
        if o is None:
            return NotImplemented
        n = self.ring.order
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j in range(0, n + 1 - i):
                b = o.c[j]
                if b != 0:
                    out[i + j] += a * b
        return TruncSeries(self.ring, out)

    __rmul__ = __mul__

    def inverse(self):
        if self.c[0] == 0:
            raise RingError("series with zero constant term is not invertible")
        n = self.ring.order
        inv0 = Fraction(1) / self.c[0]
        out = [inv0] + [Fraction(0)] * n
        for k in range(1, n + 1):
            acc = Fraction(0)
            for i in range(1, k + 1):
                acc += self.c[i] * out[k - i]
            out[k] = -inv0 * acc
        return TruncSeries(self.ring, out)

    def __truediv__(self, other):
        o = self._co_or_ni(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._co_or_ni(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            raise RingError("series powers must be integers")
        if k < 0:
            return self.inverse() ** (-k)
        out = self.ring.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            o = self._co(other)
        except RingError:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        return hash((self.ring.param, self.c))

    def __repr__(self):
        t = self.ring.param
        bits = [f"{a}*{t}^{k}" for k, a in enumerate(self.c) if a != 0]
        return "(" + (" + ".join(bits) if bits else "0") + f" + O({t}^{self.ring.order + 1}))"


class SeriesRing(Ring):
    """Ring of TruncSeries in `param`, truncated past t^order."""

    exact = True
    name = "series"

    def __init__(self, param: str, order: int):
        if order < 0:
            raise RingError("series order must be >= 0")
        self.param = param
        self.order = order
        self.zero = TruncSeries(self, [0] * (order + 1))
        self.one = TruncSeries(self, [1] + [0] * order)
        self.t = TruncSeries(self, [0, 1] + [0] * (order - 1)) if order >= 1 else self.zero

    def coerce(self, v):
        if isinstance(v, TruncSeries):
            return v
        return TruncSeries(self, [_fraction_from(v)] + [Fraction(0)] * self.order)

    def is_zero(self, a, tol=None):
        return all(x == 0 for x in a.c)

    def sqrt(self, a):
        if a.c[0] == 0:
            raise RingError("series square root needs a unit constant term")
        r0 = _fraction_sqrt(a.c[0])
        r = self.coerce(r0)
        half = Fraction(1, 2)
        for _ in range(max(1, self.order.bit_length() + 1)):
            r = half * (r + a / r)
        return r

    def mag(self, a):
        return abs(float(a.c[0])) if a.c[0] else 0.0

    def to_float(self, a):
        return float(a.c[0])

    def __repr__(self):
        return f"<ring series:{self.param}:{self.order}>"


def parse_ring(spec) -> Ring:
    """Read 'rational' | 'float' | 'series:<param>:<order>' | dict forms."""
    if isinstance(spec, Ring):
        return spec
    if isinstance(spec, dict):
        if "series" in spec:
            s = spec["series"]
            return SeriesRing(str(s["param"]), int(s["order"]))
        raise RingError(f"unknown ring spec {spec!r}")
    if spec == "rational":
        return RationalRing()
    if spec == "float":
        return FloatRing()
    if isinstance(spec, str) and spec.startswith("series:"):
        bits = spec.split(":")
        if len(bits) != 3:
            raise RingError("series ring spec is series:<param>:<order>")
        return SeriesRing(bits[1], int(bits[2]))
    raise RingError(f"unknown ring spec {spec!r}")


def ring_tag(ring: Ring):
    if isinstance(ring, SeriesRing):
        return {"series": {"param": ring.param, "order": ring.order}}
    return ring.name
