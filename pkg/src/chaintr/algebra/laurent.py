"""Laurent polynomials: finite support in z and 1/z."""
from __future__ import annotations

from .poly import Poly
from .rings import Ring, RingError


class LaurentPoly:
    """Sparse map exponent -> coefficient, zero coefficients never stored."""

    __slots__ = ("R", "c")

    def __init__(self, R: Ring, coeffs=None):
        self.R = R
        c = {}
        for e, v in (coeffs or {}).items():
            v = v if Poly._is_elem(R, v) else R.coerce(v)
            if not R.is_zero(v, 0 if R.exact else 0.0):
                c[int(e)] = v
        self.c = c

    @classmethod
    def z(cls, R, e=1):
        return cls(R, {e: 1})

    @classmethod
    def from_poly(cls, p: Poly):
        return cls(p.R, {i: v for i, v in enumerate(p.c)})

    @property
    def lo(self):
        return min(self.c) if self.c else 0

    @property
    def hi(self):
        return max(self.c) if self.c else 0

    def coeff(self, e):
        return self.c.get(e, self.R.coerce(0))

    def is_zero(self):
        return not self.c

    def _co(self, other):
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly(self.R, {0: other})

    def __add__(self, other):
        o = self._co(other)
        out = dict(self.c)
        for e, v in o.c.items():
            out[e] = out.get(e, self.R.coerce(0)) + v
        return LaurentPoly(self.R, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.R, {e: -v for e, v in self.c.items()})

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            v = self.R.coerce(other)
            return LaurentPoly(self.R, {e: a * v for e, a in self.c.items()})
        out = {}
        z = self.R.coerce(0)
        for e1, a in self.c.items():
            for e2, b in other.c.items():
                out[e1 + e2] = out.get(e1 + e2, z) + a * b
        return LaurentPoly(self.R, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            if len(self.c) != 1:
                raise RingError("negative power of a non-monomial Laurent polynomial")
            ((e, v),) = self.c.items()
            return LaurentPoly(self.R, {e * k: self.R.inv(v ** (-k))})
        out = LaurentPoly(self.R, {0: 1})
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        return (self - self._co(other)).is_zero() if self.R.exact else \
            all(self.R.is_zero(v) for v in (self - self._co(other)).c.values())

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def deriv(self):
        return LaurentPoly(self.R, {e - 1: e * v for e, v in self.c.items() if e != 0})

    def __call__(self, v):
        """Evaluate; v must be invertible if negative exponents are present."""
        acc = None
        for e in sorted(self.c):
            term = self.c[e] * v ** e if e >= 0 else self.c[e] * (1 / (v ** (-e)))
            acc = term if acc is None else acc + term
        return acc if acc is not None else self.R.coerce(0)

    def to_rational(self):
        from .rational import RationalFn
        lo = min(self.lo, 0)
        num = [self.R.coerce(0)] * (self.hi - lo + 1)
        for e, v in self.c.items():
            num[e - lo] = v
        den = [self.R.coerce(0)] * (-lo) + [self.R.coerce(1)]
        return RationalFn(Poly(self.R, num), Poly(self.R, den))

    def residue_at_zero(self):
        return self.coeff(-1)

    def residue_at_inf(self):
        return -self.coeff(-1)

    def __repr__(self):
        if not self.c:
            return "Laurent(0)"
        return "Laurent[" + " + ".join(f"({self.c[e]})z^{e}" for e in sorted(self.c)) + "]"


def laurent_arith(a: LaurentPoly, b, op: str):
    """Convenience dispatcher: add | mul | derivative | compose."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "derivative":
        return a.deriv()
    if op == "compose":
        # a is the outer Poly/LaurentPoly, b the inner substitution target
        if isinstance(a, Poly):
            a = LaurentPoly.from_poly(a)
        from .rational import RationalFn
        if isinstance(b, LaurentPoly) and (a.lo >= 0 or len(b.c) == 1):
            out = LaurentPoly(a.R, {})
            for e, v in a.c.items():
                out = out + v * b ** e
            return out
        if isinstance(b, LaurentPoly):
            b = b.to_rational()
        if isinstance(b, RationalFn):
            out = None
            for e, v in a.c.items():
                term = v * (b ** e)
                out = term if out is None else out + term
            return out if out is not None else RationalFn.const(a.R, 0)
        raise RingError(f"cannot compose with {type(b).__name__}")
    raise RingError(f"unknown op {op!r}")
