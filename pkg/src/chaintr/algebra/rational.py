"""Rational functions in one variable, local expansion, residues, partial fractions."""
from __future__ import annotations

from .poly import Poly
from .rings import Ring, RingError
from .series import INF, LocalSeries


class RationalFn:
    """num/den over a common ring; gcd-reduced with monic denominator when exact."""

    __slots__ = ("R", "num", "den")

    def __init__(self, num: Poly, den: Poly = None, *, reduce=True):
        self.R = num.R
        den = den if den is not None else Poly.const(self.R, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce and self.R.exact and not num.is_zero():
            g = num.gcd(den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
        if self.R.exact and not den.is_zero():
            lead = den.lead
            if lead != self.R.coerce(1):
                num = num * self.R.inv(lead)
                den = den.monic()
        self.num = num
        self.den = den

    @classmethod
    def const(cls, R, v):
        return cls(Poly.const(R, v))

    @classmethod
    def z(cls, R):
        return cls(Poly.x(R))

    @classmethod
    def from_poly(cls, p: Poly):
        return cls(p)

    def is_zero(self):
        return self.num.is_zero()

    def is_poly(self):
        return self.den.degree == 0

    def _co(self, other):
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, Poly):
            return RationalFn(other, reduce=False)
        return RationalFn.const(self.R, other)

    def __add__(self, other):
        o = self._co(other)
        return RationalFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, (RationalFn, Poly)):
            return RationalFn(self.num * other, self.den, reduce=False)
        o = self._co(other)
        return RationalFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._co(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFn(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._co(other) / self

    def __pow__(self, k):
        if k < 0:
            return RationalFn(self.den, self.num) ** (-k)
        return RationalFn(self.num ** k, self.den ** k, reduce=False)

    def __eq__(self, other):
        o = self._co(other)
        d = self.num * o.den - o.num * self.den
        if self.R.exact:
            return d.is_zero()
        scale = max(self._scale(), o._scale(), 1e-300)
        return all(self.R.is_zero(v, 1e-9 * scale) for v in d.c)

    def _scale(self):
        vals = [self.R.mag(v) for v in self.num.c] + [self.R.mag(v) for v in self.den.c]
        return max(vals, default=0.0)

    def __hash__(self):
        return hash((self.num.c, self.den.c))

    def deriv(self):
        return RationalFn(self.num.deriv() * self.den - self.num * self.den.deriv(),
                          self.den * self.den)

    def __call__(self, v):
        """Evaluate at a scalar, series, dual, or another rational function."""
        nv = self.num(v)
        dv = self.den(v)
        if isinstance(dv, (LocalSeries, RationalFn)):
            return nv / dv
        from .duals import Dual
        if isinstance(dv, Dual):
            return nv / dv
        return self.R.div(nv, dv)

    def map_ring(self, S: Ring, f=None):
        return RationalFn(self.num.map_ring(S, f), self.den.map_ring(S, f))

    def degree_at_inf(self):
        """Order of growth at infinity: deg num - deg den."""
        return self.num.degree - self.den.degree

    def __repr__(self):
        return f"({self.num!r})/({self.den!r})" if self.den.degree > 0 or \
            (self.den.c and self.den.c[0] != self.R.coerce(1)) else repr(self.num)


# -- local expansion ------------------------------------------------------------


def local_expand(f, point, order: int) -> LocalSeries:
    """Expand f at a finite point (coordinate u = z - point) or at INF (u = 1/z).

    The result's minimal exponent is the exact pole/zero order; `order` is the
    inclusive truncation exponent.
    """
    if isinstance(f, Poly):
        f = RationalFn(f, reduce=False)
    R = f.R
    if point is INF:
        dn, dd = f.num.degree, f.den.degree
        if dn < 0:
            return LocalSeries.zero(R, order, 0, INF)
        # f(1/w) = w^(dd-dn) * rev(num)(w)/rev(den)(w)
        nrev = f.num.reversed()
        drev = f.den.reversed()
        s = _poly_series_div(nrev, drev, order - (dd - dn))
        return s.shift_exponents(dd - dn)._with_point(INF)
    a = R.coerce(point) if isinstance(point, (int, float, str)) else point
    nsh = f.num.taylor_shift(a)
    dsh = f.den.taylor_shift(a)
    if dsh.is_zero() or all(R.is_zero(v) for v in dsh.c):
        raise ZeroDivisionError("denominator vanishes identically after shift")
    vd = _poly_valuation(dsh)
    vn = _poly_valuation(nsh) if not nsh.is_zero() else None
    if vn is None:
        return LocalSeries.zero(R, order, 0, a)
    s = _poly_series_div(Poly(R, nsh.c[vn:], trusted=True), Poly(R, dsh.c[vd:], trusted=True),
                         order - (vn - vd))
    return s.shift_exponents(vn - vd)._with_point(a)


def _poly_valuation(p: Poly):
    R = p.R
    tol = None if R.exact else 1e-12 * max((R.mag(v) for v in p.c), default=1.0)
    for i, v in enumerate(p.c):
        if not R.is_zero(v, tol):
            return i
    return len(p.c)


def _poly_series_div(n: Poly, d: Poly, order: int) -> LocalSeries:
    """n/d as a power series at 0; d(0) must be a unit."""
    R = n.R
    if order < 0:
        return LocalSeries.zero(R, order, order)
    d0 = d.coeff(0)
    inv0 = R.inv(d0)
    out = []
    rem = list(n.c) + [R.coerce(0)] * max(0, order + 1 - len(n.c))
    for k in range(order + 1):
        ck = rem[k] * inv0
        out.append(ck)
        top = min(len(rem) - 1, k + d.degree)
        for j in range(k + 1, top + 1):
            rem[j] = rem[j] - ck * d.coeff(j - k)
    return LocalSeries(R, out, 0, order, 0, trusted=True)


def _series_with_point(self, p):
    return LocalSeries(self.R, self.c, self.shift, self.upto, p, trusted=True)


LocalSeries._with_point = _series_with_point


# -- residues ---------------------------------------------------------------------


def residue(f, point):
    """Residue of the density f dz; at INF this is -(coefficient of 1/z)."""
    if isinstance(f, LocalSeries):
        return -f.coeff(1) if f.point is INF else f.residue()
    if point is INF:
        s = local_expand(f, INF, 1)
        return -s.coeff(1)
    s = local_expand(f, point, 0)
    return s.residue()


# -- partial fractions ---------------------------------------------------------------


class ClusteredPolesError(RingError):
    pass


def partial_fractions(f: RationalFn):
    """Split into (polynomial part, {pole: {order: coefficient}}).

    The principal part at a is sum_j coeff[j]/(z-a)^j.  Exact ring requires
    rational poles; float ring requires poles separated beyond the cluster
    tolerance.
    """
    from .roots import poly_roots
    R = f.R
    polypart, rem = divmod(f.num, f.den)
    roots = poly_roots(f.den, multiplicities=True)
    if not R.exact and any(m > 1 for _, m in roots):
        # a float multiplicity is by construction a cluster of poles closer
        # than the root-separation tolerance; a stable split needs them apart
        raise ClusteredPolesError("poles too close for a stable decomposition")
    g = RationalFn(rem, f.den)
    parts = {}
    for a, m in roots:
        s = local_expand(g, a, -1)
        pp = {}
        for k in range(s.shift, 0):
            v = s.coeff(k)
            if not R.is_zero(v, 0 if R.exact else 1e-12 * (s.scale() or 1.0)):
                pp[-k] = v
        if pp:
            parts[a] = pp
    return polypart, parts


def recombine(R, polypart: Poly, parts) -> RationalFn:
    """Inverse of partial_fractions, for verification."""
    out = RationalFn(polypart, reduce=False)
    z = Poly.x(R)
    for a, pp in parts.items():
        base = z - Poly.const(R, a)
        for j, cv in pp.items():
            out = out + RationalFn(Poly.const(R, cv), base ** j)
    return out
