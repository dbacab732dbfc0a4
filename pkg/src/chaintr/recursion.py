"""Residue recursion: correlator differentials and free energies.

Every stable correlator of the chain model is a finite sum of elementary
pole differentials (z - a)^{-j} dz anchored at the branch points a of the
spectral curve.  The recursion produces those coefficients genus by genus:
at each branch point the kernel built from 1/((y(z) - y(zbar)) x1'(z)) is
paired against products of lower correlators, and the residue extracts one
pole coefficient per order.  A :class:`CorrelatorTable` memoizes the tower
over a fixed curve, and the module-level helpers expose moments, free
energies, loop-insertion derivatives and the sheet-sum diagnostic.
"""

from fractions import Fraction
from itertools import permutations
from math import comb, factorial

from .algebra import (INF, FloatRing, LocalSeries, OrderExhausted, Poly,
                      RationalFn, MultipleRootError, poly_roots, residue)

__all__ = ["OmegaForm", "CorrelatorTable", "SheetSumReport", "SheetSumRow",
           "omega", "free_energy", "variation", "moments", "sheet_sum_check"]


# -- multiset bookkeeping -------------------------------------------------------


def _distinct(m):
    seen, out = set(), []
    for v in m:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _remove(m, v):
    out = list(m)
    out.remove(v)
    return tuple(out)


def _merge(a, b):
    return tuple(sorted(a + b))


def _mults(m):
    d = {}
    for v in m:
        d[v] = d.get(v, 0) + 1
    return d


def _split_factor(r1, r2):
    # distinct ways to interleave the two halves of a split multiset
    c2 = _mults(r2)
    f = 1
    for v, m1 in _mults(r1).items():
        m2 = c2.get(v, 0)
        if m2:
            f *= comb(m1 + m2, m1)
    return f


def _conv_coeff(a, b, t=-1):
    """Coefficient of u^t in a*b, without forming the full product.

    Raises OrderExhausted when a nonzero recorded coefficient of one factor
    would have to multiply an unrecorded coefficient of the other.
    """
    R = a.R
    lo = max(a.shift, t - b.upto)
    hi = min(a.upto, t - b.shift)
    for m in range(a.shift, min(lo, hi + 1)):
        if not R.is_zero(a.c[m - a.shift]):
            raise OrderExhausted(
                f"u^{t - m} of a kernel factor lies beyond its recorded order")
    for k in range(b.shift, min(t - a.upto, b.upto + 1)):
        if not R.is_zero(b.c[k - b.shift]):
            raise OrderExhausted(
                f"u^{t - k} of a kernel factor lies beyond its recorded order")
    acc = R.coerce(0)
    for m in range(lo, hi + 1):
        acc = acc + a.c[m - a.shift] * b.c[t - m - b.shift]
    return acc


# -- stored correlators ---------------------------------------------------------


class OmegaForm:
    """One correlator differential, stored over the pole basis.

    ``terms`` maps a sorted multiset of ``(branch index, pole order)`` keys
    -- one key per slot -- to the coefficient of the sum over distinct
    arrangements of ``prod_i (z_i - a_i)^{-j_i} dz_i``.  Residues at the
    branch points vanish identically: no key has pole order one.
    """

    kind = "poles"
    __slots__ = ("g", "n", "terms", "_curve")

    def __init__(self, g, n, terms, curve):
        self.g = g
        self.n = n
        self.terms = terms
        self._curve = curve

    def max_pole_order(self):
        return max((j for m in self.terms for (_, j) in m), default=0)

    def density(self, *zs):
        """The form divided by dz_1 ... dz_n, at scalar arguments."""
        if len(zs) != self.n:
            raise ValueError(f"form has {self.n} slots, got {len(zs)} points")
        R = self._curve.R
        bp = self._curve.branch_points
        tot = R.coerce(0)
        for m, c in self.terms.items():
            s = R.coerce(0)
            for arr in sorted(set(permutations(m))):
                p = R.coerce(1)
                for z, (ai, j) in zip(zs, arr):
                    p = R.div(p, (R.coerce(z) - bp[ai]) ** j)
                s = s + p
            tot = tot + c * s
        return tot

    def __repr__(self):
        return (f"OmegaForm(g={self.g}, n={self.n}, {len(self.terms)} terms, "
                f"pole order <= {self.max_pole_order()})")


class _DiscForm:
    """The unstable one-point differential (V_1'(x_1) - y) dx_1."""

    kind = "disc"
    g, n = 0, 1
    terms = None

    def __init__(self, curve):
        self._curve = curve

    def density(self, z):
        c = self._curve
        if c.model is None:
            raise ValueError("disc density needs the potential attached to the curve")
        R = c.R
        zv = R.coerce(z)
        x1v = R.div(c.x1.num(zv), c.x1.den(zv))
        vp = R.coerce(0)
        for a in reversed(c.model.v_prime(1, R)):
            vp = vp * x1v + a
        yv = R.div(c.y.num(zv), c.y.den(zv))
        d = c.x1.deriv()
        return (vp - yv) * R.div(d.num(zv), d.den(zv))

    def __repr__(self):
        return "OmegaForm(g=0, n=1, disc)"


class _BergmanForm:
    """The unstable two-point differential dz1 dz2 / (z1 - z2)^2."""

    kind = "bergman"
    g, n = 0, 2
    terms = None

    def __init__(self, curve):
        self._curve = curve

    def density(self, z1, z2):
        R = self._curve.R
        return R.div(R.coerce(1), (R.coerce(z1) - R.coerce(z2)) ** 2)

    def __repr__(self):
        return "OmegaForm(g=0, n=2, bergman)"


class _Loc:
    """Per-branch-point caches shared by every (g, n) computation."""

    __slots__ = ("L", "umono", "wpow", "winv", "su", "sw", "kd", "res", "pair")

    def __init__(self, L):
        self.L = L
        self.umono = {}
        self.wpow = {1: L.w}
        self.winv = None
        self.su = {}
        self.sw = {}
        self.kd = {}
        self.res = {}
        self.pair = {}


class CorrelatorTable:
    """Memoized tower of correlators over one spectral curve.

    ``order`` is the truncation order of the local series at each branch
    point; the default leaves generous headroom for every correlator with
    g <= gmax and n <= nmax, and the strict series bookkeeping raises
    OrderExhausted rather than silently degrade if it is ever outrun.
    """

    def __init__(self, curve, gmax, nmax, order=None):
        self.curve = curve
        self.R = curve.R
        self.gmax = int(gmax)
        self.nmax = int(nmax)
        self.order = int(order) if order is not None else 6 * self.gmax + 2 * self.nmax + 4
        self._neghalf = self.R.from_fraction(Fraction(-1, 2))
        self._forms = {}
        self._locs = {}
        self._rho_cache = {}
        self._xpow = {}
        self._iota_cache = {}
        self._w01 = _DiscForm(curve)
        self._b02 = _BergmanForm(curve)

    # -- local series ----------------------------------------------------------

    def _loc(self, a):
        loc = self._locs.get(a)
        if loc is None:
            loc = _Loc(self.curve.local(a, self.order))
            self._locs[a] = loc
        return loc

    def _umono(self, a, k, scale=1):
        loc = self._loc(a)
        key = (k, scale)
        s = loc.umono.get(key)
        if s is None:
            R = self.R
            upto = self.order + 64          # monomials are exact to any order
            c = [R.coerce(0)] * (upto - k + 1)
            c[0] = R.coerce(scale)
            s = LocalSeries(R, c, k, upto, loc.L.w.point, trusted=True)
            loc.umono[key] = s
        return s

    def _wpow(self, a, j):
        loc = self._loc(a)
        s = loc.wpow.get(j)
        if s is None:
            s = self._wpow(a, j - j // 2) * self._wpow(a, j // 2)
            loc.wpow[j] = s
        return s

    def _series_u(self, a, spec):
        loc = self._loc(a)
        s = loc.su.get(spec)
        if s is not None:
            return s
        R = self.R
        kind = spec[0]
        if kind == "e":
            b, j = spec[1]
            if b == a:
                s = self._umono(a, -j)
            else:
                d = loc.L.w.point - self.curve.branch_points[b]
                base = LocalSeries.const(R, d, loc.L.w.upto, loc.L.w.point) + \
                    LocalSeries.u(R, loc.L.w.upto, loc.L.w.point)
                s = base.inverse() ** j
        elif kind == "b":
            k = spec[1]
            s = self._umono(a, k, k + 1)
        elif kind == "bb":
            # both kernel legs on one two-point differential: w'(u)/(u - w)^2
            s = loc.L.wp * ((self._umono(a, 1) - loc.L.w).inverse() ** 2)
        elif kind == "one":
            s = LocalSeries.const(R, 1, self.order + 64, loc.L.w.point)
        else:  # pragma: no cover
            raise ValueError(f"unknown series spec {spec!r}")
        loc.su[spec] = s.strip_zeros()
        return loc.su[spec]

    def _series_w(self, a, spec):
        # conjugate-leg factors; each carries the Jacobian w'(u) once
        loc = self._loc(a)
        s = loc.sw.get(spec)
        if s is not None:
            return s
        R = self.R
        kind = spec[0]
        if kind == "e":
            b, j = spec[1]
            if b == a:
                if loc.winv is None:
                    loc.winv = loc.L.w.inverse()
                s = (loc.winv ** j) * loc.L.wp
            else:
                d = loc.L.w.point - self.curve.branch_points[b]
                base = LocalSeries.const(R, d, loc.L.w.upto, loc.L.w.point) + loc.L.w
                s = (base.inverse() ** j) * loc.L.wp
        elif kind == "b":
            k = spec[1]
            s = (self._wpow(a, k) if k else
                 LocalSeries.const(R, 1, loc.L.w.upto, loc.L.w.point))
            s = s * loc.L.wp * R.coerce(k + 1)
        elif kind == "one":
            s = LocalSeries.const(R, 1, self.order + 64, loc.L.w.point)
        else:  # pragma: no cover
            raise ValueError(f"unknown series spec {spec!r}")
        loc.sw[spec] = s.strip_zeros()
        return loc.sw[spec]

    def _res_entry(self, a, j, su, sw):
        loc = self._loc(a)
        key = (j, su, sw)
        v = loc.res.get(key)
        if v is None:
            p = loc.pair.get((su, sw))
            if p is None:
                p = (self._series_u(a, su) * self._series_w(a, sw)).strip_zeros()
                loc.pair[(su, sw)] = p
            kd = loc.kd.get(j)
            if kd is None:
                kd = (loc.L.kappa * (self._umono(a, j) - self._wpow(a, j))).strip_zeros()
                loc.kd[j] = kd
            v = self._neghalf * _conv_coeff(kd, p, -1)
            loc.res[key] = v
        return v

    # -- the recursion ----------------------------------------------------------

    def omega(self, g, n):
        """The (g, n) correlator differential.

        (0, 1) and (0, 2) come back as the special disc/Bergman objects;
        every stable pair is an :class:`OmegaForm`.
        """
        g, n = int(g), int(n)
        if g < 0 or n < 1:
            raise ValueError("omega(g, n) needs g >= 0 and n >= 1")
        if (g, n) == (0, 1):
            return self._w01
        if (g, n) == (0, 2):
            return self._b02
        form = self._forms.get((g, n))
        if form is None:
            try:
                form = self._compute(g, n)
            except OrderExhausted as e:
                raise OrderExhausted(
                    f"series order {self.order} exhausted while computing "
                    f"omega({g},{n}); rebuild the table with a larger order") from e
            self._forms[(g, n)] = form
        return form

    def _compute(self, g, n):
        R = self.R
        zero = R.coerce(0)
        jb = 6 * g - 4 + 2 * n     # strict bound on every pole order at this level
        raw = {}
        for a in range(len(self.curve.branch_points)):
            agg = {}

            def add(su, sw, rest, c):
                d = agg.setdefault((su, sw), {})
                d[rest] = d.get(rest, zero) + c

            # one lower correlator carrying both kernel legs
            if g >= 1:
                if (g - 1, n + 1) == (0, 2):
                    add(("bb",), ("one",), (), R.coerce(1))
                else:
                    for m, s in self.omega(g - 1, n + 1).terms.items():
                        for v1 in _distinct(m):
                            m1 = _remove(m, v1)
                            for v2 in _distinct(m1):
                                add(("e", v1), ("e", v2), _remove(m1, v2), s)

            # ordered products of two lower correlators; the one-point disc
            # never enters, the two-point factor enters as the Bergman leg
            for h in range(0, g + 1):
                for sa in range(1, n + 1):
                    hb, sb = g - h, n + 1 - sa
                    left_b = (h, sa) == (0, 2)
                    right_b = (hb, sb) == (0, 2)
                    if not (left_b or 2 * h - 2 + sa >= 1):
                        continue
                    if not (right_b or 2 * hb - 2 + sb >= 1):
                        continue
                    if left_b and right_b:
                        for k1 in range(0, jb - 1):
                            key1 = (a, k1 + 2)
                            for k2 in range(0, jb - 1):
                                key2 = (a, k2 + 2)
                                c = R.coerce(_split_factor((key1,), (key2,)))
                                add(("b", k1), ("b", k2), _merge((key1,), (key2,)), c)
                    elif left_b:
                        for k2, s2 in self.omega(hb, sb).terms.items():
                            for v2 in _distinct(k2):
                                r2 = _remove(k2, v2)
                                for k in range(0, jb - 1):
                                    kb = (a, k + 2)
                                    c = s2 * R.coerce(_split_factor((kb,), r2))
                                    add(("b", k), ("e", v2), _merge((kb,), r2), c)
                    elif right_b:
                        for k1, s1 in self.omega(h, sa).terms.items():
                            for v1 in _distinct(k1):
                                r1 = _remove(k1, v1)
                                for k in range(0, jb - 1):
                                    kb = (a, k + 2)
                                    c = s1 * R.coerce(_split_factor(r1, (kb,)))
                                    add(("e", v1), ("b", k), _merge(r1, (kb,)), c)
                    else:
                        w2 = self.omega(hb, sb)
                        for k1, s1 in self.omega(h, sa).terms.items():
                            for v1 in _distinct(k1):
                                r1 = _remove(k1, v1)
                                for k2, s2 in w2.terms.items():
                                    for v2 in _distinct(k2):
                                        r2 = _remove(k2, v2)
                                        c = s1 * s2 * R.coerce(_split_factor(r1, r2))
                                        add(("e", v1), ("e", v2), _merge(r1, r2), c)

            for (su, sw), rests in agg.items():
                for j in range(1, jb):
                    rc = self._res_entry(a, j, su, sw)
                    if R.is_zero(rc):
                        continue
                    key0 = (a, j + 1)
                    for rest, c in rests.items():
                        k = (key0, rest)
                        raw[k] = raw.get(k, zero) + c * rc
        return self._symmetrize(g, n, raw)

    def _symmetrize(self, g, n, raw):
        R = self.R
        groups = {}
        for (k0, rest), c in raw.items():
            groups.setdefault(_merge(rest, (k0,)), {})[k0] = c
        terms = {}
        for m, decomp in groups.items():
            vals = [decomp.get(v, R.coerce(0)) for v in _distinct(m)]
            ref = vals[0]
            for other in vals[1:]:
                if R.exact:
                    ok = R.is_zero(ref - other)
                else:
                    scl = max(R.mag(ref), R.mag(other))
                    ok = R.mag(ref - other) <= 1e-8 * max(scl, 1.0)
                if not ok:
                    raise RuntimeError(
                        f"slot-exchange symmetry failed for omega({g},{n}) "
                        f"at pole multiset {m}: {vals!r}")
            if R.exact:
                avg = ref
            else:
                acc = R.coerce(0)
                for v in vals:
                    acc = acc + v
                avg = R.div(acc, R.coerce(len(vals)))
            if not R.is_zero(avg):
                terms[m] = avg
        return OmegaForm(g, n, terms, self.curve)

    # -- moments ----------------------------------------------------------------

    def _x1pow(self, k):
        f = self._xpow.get(k)
        if f is None:
            f = self.curve.x1 ** k
            self._xpow[k] = f
        return f

    def _pole_fn(self, v):
        a, j = v
        R = self.R
        alpha = self.curve.branch_points[a]
        den = Poly(R, [-alpha, R.coerce(1)]) ** j
        return RationalFn(Poly.const(R, R.coerce(1)), den, reduce=False)

    def _rho(self, k, v):
        val = self._rho_cache.get((k, v))
        if val is None:
            val = -residue(self._x1pow(k) * self._pole_fn(v), INF)
            self._rho_cache[(k, v)] = val
        return val

    def moment(self, g, powers):
        """Connected moment of traces of powers of the first matrix."""
        ks = [int(k) for k in powers]
        if not ks or any(k < 1 for k in ks):
            raise ValueError("moment powers must be positive integers")
        g = int(g)
        n = len(ks)
        R = self.R
        if (g, n) == (0, 1):
            c = self.curve
            if c.model is None:
                raise ValueError("the planar one-point moment needs the potential; "
                                 "attach a model to the curve")
            return residue(self._x1pow(ks[0]) * c.y * c.x1.deriv(), INF)
        if (g, n) == (0, 2):
            return self._moment_02(ks[0], ks[1])
        return self.moment_form(self.omega(g, n), ks)

    def moment_form(self, form, powers):
        """Pair a stored correlator (or a variation of one) with trace powers."""
        ks = [int(k) for k in powers]
        if len(ks) != form.n:
            raise ValueError(f"form has {form.n} slots, got {len(ks)} powers")
        R = self.R
        total = R.coerce(0)
        for m, c in form.terms.items():
            fac = 1
            for mult in _mults(m).values():
                fac *= factorial(mult)
            s = R.coerce(0)
            for arr in permutations(m):
                p = R.coerce(1)
                for k, v in zip(ks, arr):
                    p = p * self._rho(k, v)
                s = s + p
            total = total + c * R.div(s, R.coerce(fac))
        return total

    def _moment_02(self, k1, k2):
        # inner slot first: against the z-plane double pole the large-z
        # extraction keeps only the polynomial part of x1^k2, differentiated
        R = self.R
        f2 = self._x1pow(k2)
        inner = RationalFn((f2.num // f2.den).deriv())
        part = -residue(self._x1pow(k1) * inner, INF)
        # the base-plane double pole dx dx'/(x - x')^2 is removed from the
        # two-point correlator; its extraction is an exact form in x1 and
        # integrates to zero, but it is subtracted honestly here
        sub = self._x1pow(k1 + k2 - 1) * self.curve.x1.deriv() * R.coerce(k2)
        part_x = -residue(sub, INF)
        return part - part_x

    # -- free energies ----------------------------------------------------------

    def free_energy(self, g):
        """F_g for g >= 2, from the one-point correlator paired with
        the primitive of y dx_1 at each branch point."""
        g = int(g)
        if g < 2:
            raise ValueError("the residue formula yields F_g for genus g >= 2 only")
        form = self.omega(g, 1)
        R = self.R
        acc = R.coerce(0)
        for m, c in form.terms.items():
            ((a, j),) = m
            acc = acc + c * self._loc(a).L.phi.coeff(j - 1)
        return R.div(acc, R.coerce(2 * g - 2))

    # -- loop insertion -----------------------------------------------------------

    def _parse_param(self, parameter):
        parts = str(parameter).strip().split(":")
        kind = parts[0]
        c = self.curve
        if kind == "g":
            if len(parts) != 3:
                raise ValueError("potential parameter is g:<site>:<power>")
            k, j = int(parts[1]), int(parts[2])
            if c.model is None:
                raise ValueError("potential variations need model data on the curve")
            if not 1 <= k <= c.model.n:
                raise ValueError(f"site index {k} out of range 1..{c.model.n}")
            if j < 1:
                raise ValueError("potential power must be >= 1")
            return ("g", k, j)
        if kind == "lambda":
            if len(parts) != 2:
                raise ValueError("external parameter is lambda:<index>")
            i = int(parts[1])
            if not 1 <= i <= len(c.zetas):
                raise ValueError(f"marked point index {i} out of range 1..{len(c.zetas)}")
            return ("lambda", i)
        if kind == "c":
            if len(parts) != 2:
                raise ValueError("coupling parameter is c:<link>")
            k = int(parts[1])
            if c.model is None:
                raise ValueError("coupling variations need model data on the curve")
            if not 1 <= k <= c.model.n - 1:
                raise ValueError(f"coupling index {k} out of range 1..{c.model.n - 1}")
            return ("c", k)
        if kind == "t":
            if len(parts) != 3:
                raise ValueError("filling parameter is t:<index|inf>:<index|inf>; only "
                                 "the difference of two fillings is a flat direction")
            ends = []
            for p in parts[1:]:
                if p == "inf":
                    ends.append(None)
                else:
                    i = int(p)
                    if not 1 <= i <= len(c.zetas):
                        raise ValueError(
                            f"marked point index {i} out of range 1..{len(c.zetas)}")
                    ends.append(i)
            if ends[0] == ends[1]:
                raise ValueError("filling variation needs two distinct endpoints")
            return ("t", ends[0], ends[1])
        raise ValueError(f"unknown variation parameter {parameter!r}")

    def _iota(self, pkey, v):
        val = self._iota_cache.get((pkey, v))
        if val is not None:
            return val
        R = self.R
        c = self.curve
        e = self._pole_fn(v)
        kind = pkey[0]
        if kind == "g":
            _, k, j = pkey
            xk = c.xs[k - 1] ** j
            if k == 1:
                val = residue(xk * e, INF)
            else:
                val = R.coerce(0)
                for z in c.zetas:
                    val = val + residue(xk * e, z)
            val = R.div(val, R.coerce(j))
        elif kind == "lambda":
            _, i = pkey
            val = residue(c.xs[-2] * e, c.zetas[i - 1])
        elif kind == "c":
            _, k = pkey
            prod = c.xs[k - 1] * c.xs[k] * e
            val = R.coerce(0)
            for z in c.zetas:
                val = val + residue(prod, z)
        else:  # t-pair: primitive of the pole differential, integrated e1 -> e2
            _, e1, e2 = pkey
            a, j = v
            alpha = c.branch_points[a]

            def prim(end):
                if end is None:
                    return R.coerce(0)      # the primitive vanishes at infinity
                p = R.coerce(c.zetas[end - 1]) - alpha
                return R.div(p ** (1 - j), R.coerce(1 - j))

            val = prim(e2) - prim(e1)
        self._iota_cache[(pkey, v)] = val
        return val

    def variation(self, parameter, target):
        """Derivative of a correlator or free energy along one model direction.

        ``target`` is ``"F:<g>"`` or ``"omega:<g>:<n>"`` (tuples accepted).
        The derivative of omega_n^(g) is assembled from omega_{n+1}^(g) by
        closing one slot with the insertion weights of ``parameter``.
        """
        pkey = self._parse_param(parameter)
        tkind, tg, tn = _parse_target(target)
        R = self.R
        if tkind == "F":
            src = self.omega(tg, 1)
            acc = R.coerce(0)
            for m, s in src.terms.items():
                acc = acc + s * self._iota(pkey, m[0])
            return acc
        src = self.omega(tg, tn + 1)
        out = {}
        zero = R.coerce(0)
        for m, s in src.terms.items():
            for v in _distinct(m):
                w = self._iota(pkey, v)
                if R.is_zero(w):
                    continue
                rest = _remove(m, v)
                out[rest] = out.get(rest, zero) + s * w
        out = {k: v for k, v in out.items() if not R.is_zero(v)}
        return OmegaForm(tg, tn, out, self.curve)


def _parse_target(target):
    if isinstance(target, OmegaForm):
        return ("omega", target.g, target.n)
    if isinstance(target, (tuple, list)):
        parts = [str(p) for p in target]
    else:
        parts = str(target).strip().split(":")
    if parts[0] == "F" and len(parts) == 2:
        g = int(parts[1])
        if g < 2:
            raise ValueError("free-energy targets start at genus two")
        return ("F", g, 0)
    if parts[0] == "omega" and len(parts) == 3:
        g, n = int(parts[1]), int(parts[2])
        if g < 0 or n < 1 or (g == 0 and n < 3):
            raise ValueError("variation targets must be stable correlators")
        return ("omega", g, n)
    raise ValueError(f"unknown variation target {target!r}: use F:<g> or omega:<g>:<n>")


# -- sheet sums -----------------------------------------------------------------


class SheetSumRow:
    __slots__ = ("x", "total", "scale", "ok")

    def __init__(self, x, total, scale, ok):
        self.x = x
        self.total = total
        self.scale = scale
        self.ok = ok

    def __repr__(self):
        tag = "ok" if self.ok else "FAIL"
        return f"SheetSumRow(x={self.x!r}, |sum|={self.total:.3e}, scale={self.scale:.3e}, {tag})"


class SheetSumReport:
    __slots__ = ("h", "rows", "tol")

    def __init__(self, h, rows, tol):
        self.h = h
        self.rows = rows
        self.tol = tol

    @property
    def ok(self):
        return all(r.ok for r in self.rows)

    def __repr__(self):
        good = sum(r.ok for r in self.rows)
        return f"SheetSumReport(h={self.h}, {good}/{len(self.rows)} samples vanish)"


def _cuts(curve):
    # real branch values, paired in ascending order into cut intervals
    vals = []
    for a in curve.branch_points:
        za = complex(a)
        num, den = curve.x1.num, curve.x1.den
        v = complex(num(za)) / complex(den(za))
        if abs(v.imag) <= 1e-9 * (1.0 + abs(v)):
            vals.append(v.real)
    vals.sort()
    return [(vals[i], vals[i + 1]) for i in range(0, len(vals) - 1, 2)]


def sheet_sum_check(table, h, samples=None, tol=1e-8):
    """Sum of omega_1^(h)/dx_1 over all preimages of a base point.

    For h >= 1 the sum over the full fiber of x_1 vanishes; this evaluates it
    at sample base points and reports each magnitude against the size of the
    individual sheet contributions.  Real samples inside a branch cut are
    rejected, since there the fiber degenerates on the cut.
    """
    h = int(h)
    if h < 1:
        raise ValueError("sheet sums need h >= 1")
    curve = table.curve
    form = table.omega(h, 1)
    bp = [complex(a) for a in curve.branch_points]
    cuts = _cuts(curve)
    if samples is None:
        spread = max((abs(v) for pair in cuts for v in pair), default=1.0)
        samples = [2.0 * spread + 1.0, -2.0 * spread - 1.5, 3.0 * spread + 2.25]
    num, den = curve.x1.num, curve.x1.den
    numc = [complex(v) for v in num.c]
    denc = [complex(v) for v in den.c]
    dnum, dden = curve.x1.deriv().num, curve.x1.deriv().den
    rows = []
    FR = FloatRing()
    for x in samples:
        xv = complex(x)
        if abs(xv.imag) <= 1e-12:
            for lo, hi in cuts:
                if lo - 1e-12 <= xv.real <= hi + 1e-12:
                    raise ValueError(
                        f"preimages on cut: sample x={x!r} lies inside the branch cut "
                        f"[{lo:.6g}, {hi:.6g}]")
        co = [a - xv * b for a, b in
              zip(numc, denc + [0j] * (len(numc) - len(denc)))]
        try:
            roots = poly_roots(Poly(FR, co))
        except MultipleRootError as e:
            raise ValueError(f"preimages on cut: the fiber over x={x!r} degenerates "
                             f"({e})") from e
        total = 0j
        scale = 0.0
        for z in roots:
            zv = complex(z)
            dens = 0j
            for m, c in form.terms.items():
                ((ai, j),) = m
                dens += complex(c) / (zv - bp[ai]) ** j
            x1p = complex(dnum(zv)) / complex(dden(zv))
            term = dens / x1p
            total += term
            scale = max(scale, abs(term))
        rows.append(SheetSumRow(x, abs(total), scale,
                                abs(total) <= tol * max(scale, 1e-300)))
    return SheetSumReport(h, rows, tol)


# -- module-level conveniences ----------------------------------------------------


def omega(table, g, n):
    return table.omega(g, n)


def free_energy(table, g):
    return table.free_energy(g)


def variation(table, parameter, target):
    return table.variation(parameter, target)


def moments(table, g, spec):
    ks = []
    for item in spec:
        if isinstance(item, (tuple, list)):
            idx, k = item
            if int(idx) != 1:
                raise ValueError("moments attach to traces of the first matrix only")
            ks.append(int(k))
        else:
            ks.append(int(item))
    return table.moment(g, ks)
