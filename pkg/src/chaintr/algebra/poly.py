"""Dense univariate polynomials over a pluggable scalar ring."""
from __future__ import annotations

from .rings import Ring, RingError


def _trim(R, c):
    n = len(c)
    while n > 0 and R.is_zero(c[n - 1]) and c[n - 1] == R.coerce(0):
        n -= 1
    return c[:n]


class Poly:
    """Coefficients ascending in z; the zero polynomial has degree -1."""

    __slots__ = ("R", "c")

    def __init__(self, R: Ring, coeffs, *, trusted=False):
        self.R = R
        if trusted:
            self.c = tuple(coeffs)
        else:
            cc = [x if self._is_elem(R, x) else R.coerce(x) for x in coeffs]
            # exact trim only: float trim of tiny coefficients would change degree semantics
            n = len(cc)
            while n > 0 and R.is_zero(cc[n - 1], 0 if R.exact else 0.0):
                n -= 1
            self.c = tuple(cc[:n])

    @staticmethod
    def _is_elem(R, x):
        return type(x) is type(R.zero) and not isinstance(x, (int, float, str))

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, R):
        return cls(R, (), trusted=True)

    @classmethod
    def const(cls, R, v):
        v = R.coerce(v)
        return cls(R, (v,)) if not R.is_zero(v, 0 if R.exact else 0.0) else cls.zero(R)

    @classmethod
    def x(cls, R):
        return cls(R, (R.coerce(0), R.coerce(1)), trusted=True)

    @classmethod
    def from_roots(cls, R, roots):
        p = cls.const(R, 1)
        for r in roots:
            p = p * cls(R, (-R.coerce(r), R.coerce(1)), trusted=True)
        return p

    # -- queries ----------------------------------------------------------
    @property
    def degree(self):
        return len(self.c) - 1

    def coeff(self, k):
        return self.c[k] if 0 <= k < len(self.c) else self.R.coerce(0)

    @property
    def lead(self):
        if not self.c:
            raise RingError("zero polynomial has no leading coefficient")
        return self.c[-1]

    def is_zero(self):
        return not self.c

    # -- ring ops ----------------------------------------------------------
    def _co(self, other):
        if isinstance(other, Poly):
            return other
        return Poly.const(self.R, other)

    def __add__(self, other):
        o = self._co(other)
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = out[i] + v
        return Poly(self.R, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.R, [-v for v in self.c], trusted=True)

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            v = self.R.coerce(other)
            return Poly(self.R, [a * v for a in self.c])
        if not self.c or not other.c:
            return Poly.zero(self.R)
        z = self.R.coerce(0)
        out = [z] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            for j, b in enumerate(other.c):
                out[i + j] = out[i + j] + a * b
        return Poly(self.R, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise RingError("negative polynomial power")
        out = Poly.const(self.R, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other):
        o = self._co(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        R = self.R
        rem = list(self.c)
        q = [R.coerce(0)] * max(0, len(rem) - len(o.c) + 1)
        dl = o.lead
        while len(rem) >= len(o.c):
            k = len(rem) - len(o.c)
            f = R.div(rem[-1], dl)
            q[k] = f
            for i, b in enumerate(o.c):
                rem[k + i] = rem[k + i] - f * b
            rem.pop()
        return Poly(R, q), Poly(R, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if not r.is_zero() and (self.R.exact or max(self.R.mag(v) for v in r.c) > 1e-8 * self._scale()):
            raise RingError("inexact polynomial division")
        return q

    def _scale(self):
        return max((self.R.mag(v) for v in self.c), default=1.0) or 1.0

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = self._co(other)
        return (self - other).is_zero() if self.R.exact else \
            all(self.R.is_zero(v) for v in (self - other).c)

    def __hash__(self):
        return hash(self.c)

    # -- calculus / structure ----------------------------------------------
    def deriv(self):
        return Poly(self.R, [i * v for i, v in enumerate(self.c)][1:], trusted=True)

    def __call__(self, v):
        """Horner evaluation; v may be a scalar or any object with ring ops."""
        if not self.c:
            if isinstance(v, (int, float, complex)):
                return self.R.coerce(0)
            return v * 0
        acc = self.c[-1]
        if len(self.c) == 1 and not isinstance(v, (int, float, complex)):
            return v * 0 + acc  # promote constants to v's type
        for k in range(len(self.c) - 2, -1, -1):
            acc = acc * v + self.c[k]
        return acc

    def taylor_shift(self, a):
        """p(z + a) by repeated synthetic division by (z - a); O(d^2)."""
        a = self.R.coerce(a)
        c = list(self.c)
        out = []
        for _ in range(len(self.c)):
            for k in range(len(c) - 2, -1, -1):
                c[k] = c[k] + a * c[k + 1]
            out.append(c[0])
            c = c[1:]
        return Poly(self.R, out)

    def monic(self):
        if self.is_zero():
            return self
        dl = self.lead
        return Poly(self.R, [self.R.div(v, dl) for v in self.c], trusted=True)

    def gcd(self, other):
        """Monic gcd via Euclid; exact rings only."""
        if not self.R.exact:
            raise RingError("gcd is exact-ring only")
        a, b = self, self._co(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def map_ring(self, S: Ring, f=None):
        f = f or (lambda v: S.coerce(v))
        return Poly(S, [f(v) for v in self.c])

    def reversed(self, at_degree=None):
        """Coefficients reversed: z^d * p(1/z), padded to at_degree."""
        d = self.degree if at_degree is None else at_degree
        z = self.R.coerce(0)
        out = [z] * (d + 1)
        for i, v in enumerate(self.c):
            out[d - i] = v
        return Poly(self.R, out)

    def __repr__(self):
        if not self.c:
            return "Poly(0)"
        bits = []
        for i, v in enumerate(self.c):
            if not self.R.is_zero(v, 0 if self.R.exact else 0.0):
                bits.append(f"({v})z^{i}" if i else f"({v})")
        return "Poly[" + " + ".join(bits) + "]"
