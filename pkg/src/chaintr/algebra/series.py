"""Truncated Laurent series in a local coordinate, with strict order tracking.

A LocalSeries knows exactly how far it can be trusted (`upto`); reading past
that is an error, never a silent zero.  Arithmetic propagates the weakest
participating order, so truncation bugs surface as loud failures.
"""
from __future__ import annotations

from fractions import Fraction

from .rings import Ring, RingError


class Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "inf"


INF = Infinity()


class OrderExhausted(RingError):
    """Requested a coefficient beyond the recorded truncation order."""


def _elem_is_zero(R, x, tol=None):
    from .duals import Dual
    if isinstance(x, Dual):
        x = x.val
    return R.is_zero(x, tol)


def _elem(R, v):
    return R.coerce(v) if isinstance(v, (int, float, str)) else v


def _local_tols(R, c, rel=1e-9, win=4):
    """Per-coefficient zero thresholds for float series.

    Rounding noise at position k comes from products that land near k, so its
    size tracks the coefficient envelope there — not the global maximum, which
    for a series with geometric coefficient growth (expansion radius < 1) can
    sit many orders of magnitude above the genuine leading terms.
    """
    mags = [R.mag(getattr(v, "val", v)) for v in c]
    n = len(mags)
    return [rel * max(mags[max(0, k - win):k + win + 1], default=0.0)
            for k in range(n)]


class LocalSeries:
    """sum_{k=shift}^{upto} c[k-shift] * u^k + O(u^{upto+1})."""

    __slots__ = ("R", "point", "shift", "c", "upto")

    def __init__(self, R: Ring, coeffs, shift=0, upto=None, point=0, *, trusted=False):
        self.R = R
        self.point = point
        self.shift = shift
        self.c = tuple(coeffs) if trusted else tuple(_elem(R, v) for v in coeffs)
        self.upto = shift + len(self.c) - 1 if upto is None else upto
        if self.upto != self.shift + len(self.c) - 1:
            raise RingError("inconsistent series length")

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, R, upto, shift=0, point=0):
        if shift > upto:
            shift = upto
        z = R.coerce(0)
        return cls(R, (z,) * (upto - shift + 1), shift, upto, point, trusted=True)

    @classmethod
    def const(cls, R, v, upto, point=0):
        if upto < 0:
            return cls.zero(R, upto, upto, point)
        z = R.coerce(0)
        return cls(R, (_elem(R, v),) + (z,) * upto, 0, upto, point, trusted=True)

    @classmethod
    def u(cls, R, upto, point=0):
        s = cls.zero(R, upto, 0, point)
        if upto >= 1:
            c = list(s.c)
            c[1] = R.coerce(1)
            return cls(R, c, 0, upto, point, trusted=True)
        return s

    # -- access ---------------------------------------------------------------
    def coeff(self, k):
        if k > self.upto:
            raise OrderExhausted(f"coefficient u^{k} beyond recorded order O(u^{self.upto + 1})")
        if k < self.shift:
            return self.R.coerce(0)
        return self.c[k - self.shift]

    def valuation(self, strict=False):
        """Index of the first nonzero coefficient.

        Float coefficients are judged against a windowed local scale so that
        cancellation noise does not pose as a leading term, while genuine O(1)
        leading coefficients survive even when high-order coefficients grow
        geometrically.
        """
        tols = None if self.R.exact else _local_tols(self.R, self.c)
        for k in range(self.shift, self.upto + 1):
            i = k - self.shift
            if not _elem_is_zero(self.R, self.c[i], tols[i] if tols else None):
                return k
        if strict:
            raise OrderExhausted("series is zero to recorded order; valuation unknown")
        return self.upto + 1

    def valuation_vs(self, ref, rel=1e-9, strict=False):
        """Valuation of a difference, judged against `ref`'s local envelope.

        When `self` is a residual like f(g(u)) - f(u), its own coefficient
        profile is useless for zero-testing: after convergence every entry is
        rounding noise, and that noise inherits the geometric growth of the
        series it came from.  The signal threshold at exponent k is therefore
        taken from `ref`'s coefficient magnitudes near k.
        """
        if self.R.exact:
            return self.valuation(strict=strict)
        wm = _local_tols(self.R, ref.c, rel=rel)
        last = len(wm) - 1
        for k in range(self.shift, self.upto + 1):
            i = min(max(k - ref.shift, 0), last)
            tol = wm[i] if last >= 0 else 0.0
            if not _elem_is_zero(self.R, self.c[k - self.shift], tol):
                return k
        if strict:
            raise OrderExhausted("series is zero to recorded order; valuation unknown")
        return self.upto + 1

    def strip_vs(self, ref, rel=1e-9):
        v = self.valuation_vs(ref, rel=rel)
        if v == self.shift:
            return self
        if v > self.upto:
            return LocalSeries.zero(self.R, self.upto, self.upto, self.point)
        return LocalSeries(self.R, self.c[v - self.shift:], v, self.upto, self.point,
                           trusted=True)

    def is_zero_to_order(self):
        return self.valuation() > self.upto

    def scale(self):
        return max((self.R.mag(getattr(v, "val", v)) for v in self.c), default=0.0)

    def _chk(self, o: "LocalSeries"):
        if o.point != self.point:
            raise RingError("series at different expansion points")

    # -- arithmetic ------------------------------------------------------------
    def _co(self, other, upto=None):
        if isinstance(other, LocalSeries):
            return other
        return LocalSeries.const(self.R, other, self.upto if upto is None else upto, self.point)

    def __add__(self, other):
        o = self._co(other)
        self._chk(o)
        upto = min(self.upto, o.upto)
        shift = min(self.shift, o.shift, upto)
        z = self.R.coerce(0)
        out = [z] * (upto - shift + 1)
        for s in (self, o):
            for k in range(s.shift, min(s.upto, upto) + 1):
                out[k - shift] = out[k - shift] + s.c[k - s.shift]
        return LocalSeries(self.R, out, shift, upto, self.point, trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return LocalSeries(self.R, [-v for v in self.c], self.shift, self.upto,
                           self.point, trusted=True)

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LocalSeries):
            v = _elem(self.R, other)
            return LocalSeries(self.R, [a * v for a in self.c], self.shift, self.upto,
                               self.point, trusted=True)
        self._chk(other)
        a, b = self, other
        upto = min(a.shift + b.upto, b.shift + a.upto)
        shift = a.shift + b.shift
        z = self.R.coerce(0)
        out = [z] * (upto - shift + 1)
        exact_zero = 0 if self.R.exact else 0.0
        for i in range(a.shift, a.upto + 1):
            av = a.c[i - a.shift]
            if _elem_is_zero(self.R, av, exact_zero):
                continue
            jmax = min(b.upto, upto - i)
            for j in range(b.shift, jmax + 1):
                out[i + j - shift] = out[i + j - shift] + av * b.c[j - b.shift]
        return LocalSeries(self.R, out, shift, upto, self.point, trusted=True)

    __rmul__ = __mul__

    def inverse(self):
        from .duals import Dual
        v = self.valuation(strict=True)
        n = self.upto - v
        lead = self.c[v - self.shift]
        R = self.R
        inv0 = 1 / lead if isinstance(lead, Dual) else R.inv(lead)
        t = [self.c[v - self.shift + k] * inv0 for k in range(n + 1)]
        out = [R.coerce(0)] * (n + 1)
        out[0] = R.coerce(1)
        for k in range(1, n + 1):
            acc = None
            for i in range(1, k + 1):
                term = t[i] * out[k - i]
                acc = term if acc is None else acc + term
            out[k] = -acc if acc is not None else R.coerce(0)
        out = [x * inv0 for x in out]
        return LocalSeries(R, out, -v, -v + n, self.point, trusted=True)

    def __truediv__(self, other):
        if isinstance(other, LocalSeries):
            return self * other.inverse()
        from .duals import Dual
        v = _elem(self.R, other)
        inv = 1 / v if isinstance(v, Dual) else self.R.inv(v)
        return self * inv

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return LocalSeries.const(self.R, 1, max(self.upto, 0), self.point)
        out = None
        base = self
        while k:
            if k & 1:
                out = base if out is None else out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # -- calculus ---------------------------------------------------------------
    def deriv(self):
        out = [k * self.c[k - self.shift] for k in range(self.shift, self.upto + 1)]
        return LocalSeries(self.R, out, self.shift - 1, self.upto - 1, self.point,
                           trusted=True)

    def integrate(self):
        """Termwise primitive with integration constant 0.

        The u^-1 coefficient must vanish (exactly, or below noise level for the
        nearby coefficients in the float ring): a log term has no place here.
        """
        R = self.R
        if self.shift <= -1 <= self.upto:
            r = self.coeff(-1)
            tol = 0
            if not R.exact:
                tol = 10.0 * _local_tols(R, self.c, rel=1e-8)[-1 - self.shift]
            if not _elem_is_zero(R, r, tol):
                raise RingError("nonzero residue term: primitive would need a log")
        z = R.coerce(0)
        out = [z] * len(self.c)
        for k in range(self.shift, self.upto + 1):
            if k == -1:
                continue
            out[k - self.shift] = self.c[k - self.shift] * R.from_fraction(Fraction(1, k + 1))
        return LocalSeries(R, out, self.shift + 1, self.upto + 1, self.point, trusted=True)

    def compose(self, inner: "LocalSeries"):
        """self(inner(u)); inner must have valuation >= 1."""
        vi = inner.valuation()
        if vi < 1:
            raise RingError("composition target must vanish at the point")
        cap_self = (self.upto + 1) * vi - 1  # error from self's own truncation
        if not self.c or self.is_zero_to_order():
            return LocalSeries.zero(self.R, min(inner.upto, cap_self), 0, inner.point)
        res = None
        if self.shift < 0:
            inv = inner.inverse()
            for k in range(self.shift, 0):
                cv = self.c[k - self.shift]
                term = (inv ** (-k)) * cv
                res = term if res is None else res + term
        if self.upto >= 0:
            lo = max(self.shift, 0)
            acc = LocalSeries.const(self.R, self.c[self.upto - self.shift], inner.upto, inner.point)
            for k in range(self.upto - 1, lo - 1, -1):
                acc = acc * inner + self.c[k - self.shift]
            if lo > 0:
                acc = acc * inner ** lo
            res = acc if res is None else res + acc
        return res.truncate(min(res.upto, cap_self))

    def truncate(self, upto):
        if upto > self.upto:
            raise OrderExhausted("cannot extend a series by truncation")
        if upto < self.shift:
            return LocalSeries.zero(self.R, upto, upto, self.point)
        n = upto - self.shift + 1
        return LocalSeries(self.R, self.c[:n], self.shift, upto, self.point, trusted=True)

    def strip_zeros(self):
        """Raise the storage shift to the actual valuation (drops leading zeros).

        Keeping the shift tight matters before division: the trusted-order
        arithmetic bounds products by shift+upto, so stored zeros cost orders.
        """
        v = self.valuation()
        if v == self.shift:
            return self
        if v > self.upto:
            return LocalSeries.zero(self.R, self.upto, self.upto, self.point)
        return LocalSeries(self.R, self.c[v - self.shift:], v, self.upto, self.point,
                           trusted=True)

    def shift_exponents(self, d):
        return LocalSeries(self.R, self.c, self.shift + d, self.upto + d, self.point,
                           trusted=True)

    def map_coeffs(self, f, R=None):
        return LocalSeries(R or self.R, [f(v) for v in self.c], self.shift, self.upto,
                           self.point, trusted=True)

    def residue(self):
        if self.upto < -1:
            raise OrderExhausted("series order below the residue coefficient")
        return self.coeff(-1)

    def eval_scalar(self, v):
        """Plain evaluation at a scalar offset from the expansion point."""
        v = _elem(self.R, v)
        acc = self.R.coerce(0)
        for k in range(self.upto, self.shift - 1, -1):
            acc = acc * v + self.c[k - self.shift]
        if self.shift:
            acc = acc * v ** self.shift if self.shift > 0 else self.R.div(acc, v ** (-self.shift))
        return acc

    def eq_to_order(self, other, tol=None):
        d = self - self._co(other)
        return all(_elem_is_zero(d.R, v, tol) for v in d.c)

    def __repr__(self):
        bits = []
        for k in range(self.shift, self.upto + 1):
            v = self.c[k - self.shift]
            if not _elem_is_zero(self.R, v, 0 if self.R.exact else 0.0):
                bits.append(f"({v})u^{k}")
            if len(bits) > 7:
                bits.append("...")
                break
        body = " + ".join(bits) if bits else "0"
        return f"Series[{body} + O(u^{self.upto + 1}) @ {self.point}]"


def series_solve(equation, seed, order, dF=None, R=None, point=0):
    """Solve equation(w) == 0 for a LocalSeries w starting from w(0) = seed.

    `equation` must act pointwise (an algebraic expression in w and the local
    coordinate).  When dF is not given, the derivative is extracted by a
    one-direction dual-number pass through the same expression.  Requires a
    simple root: the derivative must not vanish at the seed.
    """
    from .duals import Dual
    if isinstance(seed, LocalSeries):
        if seed.upto < order:
            raise RingError("seed series shorter than the requested order")
        R = seed.R
        point = seed.point
        w = seed.truncate(order)
    else:
        if R is None:
            raise RingError("series_solve needs a ring when the seed is a scalar")
        w = LocalSeries.const(R, seed, order, point)
    for _ in range(order + 8):
        r = equation(w)
        if r.valuation() > min(order, r.upto) and r.upto >= order:
            return w.truncate(order) if w.upto > order else w
        if dF is not None:
            d = dF(w)
        else:
            wd = w.map_coeffs(lambda v: Dual(v, {}))
            eps = Dual(R.coerce(0), {"_d": R.coerce(1)})
            d = equation(wd + eps).map_coeffs(
                lambda v: v.grad.get("_d", R.coerce(0)) if isinstance(v, Dual) else R.coerce(0))
        if d.valuation() != 0:
            raise RingError("vanishing derivative at the seed: non-simple root")
        w = w - r / d
        if w.upto > order:
            w = w.truncate(order)
        elif w.upto < order:
            raise RingError("equation loses series order; cannot reach the requested order")
    raise RingError("series solve failed to converge")
