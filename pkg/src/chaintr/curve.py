"""Rational spectral curves and their branch-point local data.

Downstream machinery sees a curve through two lenses: globally, as rational
functions of the uniformizing coordinate z (moment and variation residues),
and locally, as truncated power series around the simple zeros of dx_1
(the recursion kernel).  Both views live here, built once and cached.
"""

from fractions import Fraction

from .algebra import (INF, IrrationalRootError, LocalSeries, Poly, RationalFn,
                      RingError, local_expand, poly_roots, residue)


class SingularCurveError(Exception):
    """The curve violates the regularity the residue recursion requires."""


_MARGIN = 6  # extra series orders carried so Newton/compose losses never bite


def _conjugate_series(x1loc, order):
    """Local deck transformation w(u) with x1(a + w(u)) = x1(a + u), w != id.

    Newton iteration seeded at w = -u; at a simple ramification point each
    step roughly doubles the number of trusted orders.  The derivative
    x1'(a + w) has valuation 1, so every update divides by a valuation-1
    series — shifts are stripped tight to keep the order bookkeeping sharp.
    """
    R = x1loc.R
    u = LocalSeries.u(R, x1loc.upto, x1loc.point)
    w = u * R.coerce(-1)
    d0 = x1loc.deriv()
    for _ in range(order.bit_length() + 8):
        # residual zero-test against x1's own envelope: the residual's entries
        # are differences of x1-sized terms, so that is where noise lives
        r = x1loc.compose(w) - x1loc
        if r.valuation_vs(x1loc) >= order + 2:
            break
        r = r.strip_vs(x1loc)
        dd = d0.compose(w).strip_zeros()
        w = (w - r / dd).strip_zeros()
    else:
        raise RingError("conjugation series did not converge")
    if w.upto < order:
        raise RingError("conjugation series lost too many orders")
    w = w.truncate(order)
    if w.valuation() != 1:
        raise SingularCurveError("deck transformation degenerates at a branch point")
    # involution sanity: w(w(u)) = u through the kept order; the residual is
    # judged against w's envelope, where the compose noise actually lives
    ww = w.compose(w) - LocalSeries.u(R, w.upto, w.point)
    if ww.valuation_vs(w, rel=1e-7) <= ww.upto:
        raise RingError("conjugation series is not an involution")
    return w


class BranchLocal:
    """Series data at one branch point, truncated at a shared order."""

    __slots__ = ("idx", "a", "order", "x1", "x1p", "y", "ybar", "w", "wp",
                 "kappa", "phi")

    def __init__(self, idx, a, order, x1, x1p, y, ybar, w, wp, kappa, phi):
        self.idx = idx
        self.a = a
        self.order = order
        self.x1 = x1
        self.x1p = x1p
        self.y = y
        self.ybar = ybar
        self.w = w
        self.wp = wp
        self.kappa = kappa
        self.phi = phi


class SpectralCurve:
    """Genus-zero curve: x_k(z) rational, y = c_12 x_2, marked points zeta_i.

    `cleared` carries the chain parametrization (X_1..X_{n+1}, P) with
    x_k = X_k / P^{s_k}; raw curves (x_1, y only) leave it None and find
    their ramification from the reduced derivative instead.
    """

    def __init__(self, R, xs, y, *, zetas=(), profile=None, model=None,
                 cleared=None):
        self.R = R
        self.xs = tuple(xs)
        self.y = y
        self.zetas = tuple(zetas)
        self.profile = profile
        self.model = model
        self.cleared = cleared
        self.x1 = self.xs[0]
        self.x1p = self.x1.deriv()
        self._locals = {}
        self.branch_points = self._find_branch_points()
        self._check_regular()

    @classmethod
    def raw(cls, R, x1, y):
        return cls(R, (x1,), y)

    # -- ramification ------------------------------------------------------

    def _find_branch_points(self):
        R = self.R
        if self.cleared is not None:
            Xs, P = self.cleared
            s1 = self.profile.s_k(1)
            N = Xs[0].deriv() * P - Xs[0] * P.deriv() * Poly.const(R, s1)
            expected = self.profile.s_count * (s1 + 1)
        else:
            N = self.x1p.num
            expected = None
        if N.degree <= 0:
            if expected:
                raise SingularCurveError("curve has no ramification where some is required")
            return ()
        try:
            pairs = poly_roots(N, multiplicities=True)
        except IrrationalRootError as e:
            raise IrrationalRootError(
                "branch points are not rational numbers; this curve needs "
                f"the float ring ({e})") from e
        if self.cleared is None and not R.exact:
            # an unreduced float derivative keeps den-root artifacts; a pole of
            # x1 is never a ramification point, so drop roots where den ~ 0
            pairs = [(a, m) for a, m in pairs if not self._is_pole(a)]
        for a, m in pairs:
            if m > 1:
                raise SingularCurveError(f"branch points collide near z = {a!r}")
        if expected is not None and len(pairs) != expected:
            raise SingularCurveError(
                f"found {len(pairs)} branch points, expected {expected}")
        return tuple(a for a, _ in pairs)

    def _is_pole(self, a):
        den = self.x1.den
        R = self.R
        v = R.mag(den(a))
        sc = sum(R.mag(c) * max(1.0, R.mag(a)) ** k for k, c in enumerate(den.c))
        return v <= 1e-8 * max(sc, 1e-300)

    def _check_regular(self):
        R = self.R
        for a in self.branch_points:
            yl = local_expand(self.y, a, 3)
            if yl.shift < 0 and yl.valuation() < 0:
                raise SingularCurveError("y has a pole at a branch point")
            c1 = yl.coeff(1)
            if R.exact:
                bad = R.is_zero(c1)
            else:
                # 1e-5: wide enough to flag a fold found by Newton at residual
                # ~1e-11 (a double root leaves |dy| ~ sqrt(residual)), far
                # below the O(1) ratio of any regular curve
                sc = max(R.mag(yl.coeff(k)) for k in (1, 2, 3))
                bad = R.mag(c1) <= 1e-5 * max(sc, 1e-300)
            if bad:
                raise SingularCurveError(
                    f"dy vanishes at the branch point z = {a!r}")

    # -- local data ----------------------------------------------------------

    def local(self, i, order):
        key = (i, order)
        got = self._locals.get(key)
        if got is not None:
            return got
        R = self.R
        a = self.branch_points[i]
        m = order + _MARGIN
        # each Newton division for the deck transformation costs ~2 trusted
        # orders and there are ~log2(order) of them; expand wide, trim after
        mc = m + 2 * (order + 2).bit_length() + 8
        x1l = local_expand(self.x1, a, mc)
        # simple zero of dx1: the quadratic term must carry the lead
        c2 = x1l.coeff(2)
        if R.exact:
            if R.is_zero(c2):
                raise SingularCurveError("x1 is not a double cover locally")
        w = _conjugate_series(x1l, order + 2)
        wp = w.deriv()
        x1l = x1l.truncate(m)
        yl = local_expand(self.y, a, m)
        ybar = yl.compose(w)
        x1pl = x1l.deriv()
        kappa = ((yl - ybar).strip_zeros() * x1pl.strip_zeros()).inverse()
        phi = (yl * x1pl).integrate()
        loc = BranchLocal(i, a, order, x1l, x1pl, yl, ybar, w, wp, kappa, phi)
        self._locals[key] = loc
        return loc

    def conjugate_local(self, i, order):
        """Series of the conjugate point itself: zbar(a + u) = a + w(u)."""
        loc = self.local(i, order)
        return LocalSeries.const(self.R, loc.a, loc.w.upto, loc.w.point) + loc.w

    def phi_local(self, i, order):
        """Primitive of y dx1 at branch point i, constant term fixed to 0."""
        return self.local(i, order).phi

    def kernel_series(self, i, z0, order):
        """Recursion kernel K(z0, z) at z = a + u for a fixed scalar z0."""
        loc = self.local(i, order)
        R = self.R
        d = R.coerce(z0) - loc.a
        if R.is_zero(d):
            raise ValueError("z0 sits on the branch point itself")
        pt = loc.w.point
        u = LocalSeries.u(R, loc.w.upto, pt)
        s1 = (LocalSeries.const(R, d, u.upto, pt) - u).inverse()
        s2 = (LocalSeries.const(R, d, loc.w.upto, pt) - loc.w).inverse()
        return (s1 - s2) * loc.kappa * R.coerce(Fraction(1, 2))

    def de_rational(self, i, u_val, order=8):
        """1/(z0 - z) - 1/(z0 - zbar) as a rational function of z0.

        z = a + u and zbar = a + w(u) for the scalar offset u; the residues
        at z0 = z and z0 = zbar are +1 and -1.
        """
        loc = self.local(i, order)
        R = self.R
        zv = R.coerce(loc.a) + R.coerce(u_val)
        zb = R.coerce(loc.a) + loc.w.eval_scalar(u_val)
        one = Poly.const(R, 1)
        t1 = RationalFn(one, Poly(R, [R.coerce(0) - zv, R.coerce(1)]))
        t2 = RationalFn(one, Poly(R, [R.coerce(0) - zb, R.coerce(1)]))
        return t1 - t2

    def bergman(self, z1, z2):
        """Fundamental bidifferential density 1/(z1 - z2)^2 at scalar points."""
        R = self.R
        d = R.coerce(z1) - R.coerce(z2)
        return R.inv(d * d)

    # -- derived curves ------------------------------------------------------

    def swapped(self):
        """Exchange the roles of the two distinguished functions.

        Returns the raw curve with x := x_2(z), y := c_12 x_1(z) on the same
        parametrization; its ramification is the zero set of dx_2.
        """
        if len(self.xs) < 2:
            raise ValueError("swap needs a curve carrying x_2")
        c12 = self.model.coupling(1) if self.model is not None else Fraction(1)
        ynew = self.xs[0] * RationalFn.const(self.R, self.R.coerce(c12))
        return SpectralCurve(self.R, (self.xs[1],), ynew)

    def to_float(self):
        from .algebra import FloatRing
        S = FloatRing()
        xs = tuple(f.map_ring(S) for f in self.xs)
        y = self.y.map_ring(S)
        zetas = tuple(S.coerce(z) for z in self.zetas)
        cleared = None
        if self.cleared is not None:
            Xs, P = self.cleared
            cleared = (tuple(X.map_ring(S) for X in Xs), P.map_ring(S))
        return SpectralCurve(S, xs, y, zetas=zetas, profile=self.profile,
                             model=self.model, cleared=cleared)

    def sheet_count(self):
        if self.profile is not None:
            return self.profile.sheets
        return max(self.x1.num.degree, self.x1.den.degree)

    def __repr__(self):
        return (f"SpectralCurve(n_fns={len(self.xs)}, "
                f"branch_points={list(self.branch_points)!r})")


def recursion_kernel(curve, i, z0, order=10):
    """Module-level alias for the kernel expansion at branch point i."""
    return curve.kernel_series(i, z0, order)
