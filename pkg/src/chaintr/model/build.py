"""Curve construction: Newton solve of the cleared divisor conditions.

The genus-zero ansatz x_k = X_k(z) / P(z)^{s_k}, P(z) = z prod_{i>=2}(z - zeta_i),
turns the chain's saddle conditions into polynomial identities in z.  Those
identities, together with the evaluation and residue pins at the marked
points, form a square-ish system (always with exactly one redundant row) in
the X_k coefficients and the free marked points.  A closed-form quadratic
chain seeds the solve; non-quadratic targets are reached by continuation in
an overall coupling dial for the floating ring, and by direct Newton (which
must terminate exactly) over the exact rings.
"""

from fractions import Fraction

import numpy as np

from ..algebra import (INF, Dual, FloatRing, Poly, RationalFn, RingError,
                       SeriesRing, TruncSeries, local_expand)
from ..curve import SpectralCurve
from .chain import ChainModel, _series_target


class SolverError(Exception):
    """The curve solve failed in a way more input data cannot fix."""


class _StageFail(Exception):
    """One continuation stage refused to converge (internal; bisected away)."""


# -- coefficient-list polynomials ------------------------------------------------
# Plain lists, lowest degree first.  Entries are ring scalars or Duals; all
# arithmetic goes through operator dispatch so gradients ride along for free.


def _pl_add(R, a, b):
    z = R.coerce(0)
    m = max(len(a), len(b))
    return [(a[i] if i < len(a) else z) + (b[i] if i < len(b) else z)
            for i in range(m)]


def _pl_sub(R, a, b):
    z = R.coerce(0)
    m = max(len(a), len(b))
    return [(a[i] if i < len(a) else z) - (b[i] if i < len(b) else z)
            for i in range(m)]


def _pl_scale(a, s):
    return [v * s for v in a]


def _pl_mul(R, a, b):
    z = R.coerce(0)
    out = [z] * (len(a) + len(b) - 1)
    for i, av in enumerate(a):
        for j, bv in enumerate(b):
            out[i + j] = out[i + j] + av * bv
    return out


def _pl_pow(R, a, m):
    out = [R.coerce(1)]
    for _ in range(m):
        out = _pl_mul(R, out, a)
    return out


def _pl_deriv(R, a):
    return [a[k] * R.coerce(k) for k in range(1, len(a))]


def _pl_eval(R, a, v):
    acc = R.coerce(0)
    for c in reversed(a):
        acc = acc * v + c
    return acc


def _at(lst, i, z):
    return lst[i] if i < len(lst) else z


# -- the nonlinear system ---------------------------------------------------------


class _System:
    """Residual rows and forward-mode Jacobian for one coupling stage."""

    def __init__(self, R, model, prof, vcoeffs):
        self.R = R
        self.model = model
        self.prof = prof
        self.vc = vcoeffs          # vcoeffs[k-1][j] = g_{j+1}^{(k)} at this stage
        self.n = model.n
        self.sc = prof.s_count
        self.cs = [R.coerce(model.coupling(k)) for k in range(model.n + 1)]
        self.T = R.coerce(model.T)
        ext = model.ext()
        self.lams = [R.coerce(l) for l, _ in ext]
        self.fs = [R.coerce(f) for _, f in ext]
        self.lens = [prof.x_degree(k) + 1 for k in range(1, model.n + 2)]
        self.nunk = (self.lens[0] - 1) + sum(self.lens[1:]) + (self.sc - 1)

    def unpack(self, state, jac):
        R = self.R
        one = R.coerce(1)
        if jac:
            vals = [Dual(v, {i: one}) for i, v in enumerate(state)]
        else:
            vals = list(state)
        X = []
        idx = self.lens[0] - 1
        X.append(vals[:idx] + [one])    # lead of X_1 pinned: the monic gauge
        for L in self.lens[1:]:
            X.append(vals[idx:idx + L])
            idx += L
        zetas = [R.coerce(0)] + vals[idx:]
        return X, zetas

    def rows(self, state, jac=False):
        R = self.R
        z0 = R.coerce(0)
        prof = self.prof
        n, sc = self.n, self.sc
        X, zetas = self.unpack(state, jac)
        P = [R.coerce(1)]
        for zv in zetas:
            P = _pl_mul(R, P, [-zv, R.coerce(1)])
        ppow = {0: [R.coerce(1)], 1: P}

        def getp(m):
            while m not in ppow:
                top = max(ppow)
                ppow[top + 1] = _pl_mul(R, ppow[top], P)
            return ppow[m]

        rows = []
        # interior saddle identities, cleared of P powers
        for k in range(2, n + 1):
            dk = self.model.d[k - 1]
            sk = prof.s_k(k)
            skm, skp = prof.s_k(k - 1), prof.s_k(k + 1)
            g = self.vc[k - 1]
            xp = [[R.coerce(1)]]
            for _ in range(dk):
                xp.append(_pl_mul(R, xp[-1], X[k - 1]))
            rhs = None
            for j in range(dk + 1):
                term = _pl_scale(_pl_mul(R, xp[j], getp((dk - j) * sk)), g[j])
                rhs = term if rhs is None else _pl_add(R, rhs, term)
            lhs = _pl_add(R, _pl_scale(X[k - 2], self.cs[k - 1]),
                          _pl_scale(_pl_mul(R, X[k], getp(skm - skp)),
                                    self.cs[k]))
            diff = _pl_sub(R, rhs, lhs)
            top = prof.r_k(k + 1) + sc * skm
            rows.extend(_at(diff, m, z0) for m in range(top + 1))
        # the infinity condition on x_1 (c_12 x_2 = V_1' - T/x_1 + O(1/z^2)),
        # multiplied through by x_1 and cleared
        d1 = self.model.d[0]
        s1 = prof.s_k(1)
        s2 = prof.s_k(2)
        s0 = d1 * s1
        g1 = self.vc[0]
        e = _pl_scale(_pl_mul(R, _pl_mul(R, X[0], X[1]), getp(s0 - s2)),
                      self.cs[1])
        xp = [X[0]]
        for _ in range(d1):
            xp.append(_pl_mul(R, xp[-1], X[0]))
        for j in range(d1 + 1):
            e = _pl_sub(R, e, _pl_scale(_pl_mul(R, xp[j], getp((d1 - j) * s1)),
                                        g1[j]))
        e = _pl_add(R, e, _pl_scale(getp(s0 + s1), self.T))
        m0 = 1 + sc * (s1 + s0)
        rows.extend(_at(e, m, z0) for m in range(m0 - 1, m0 + d1 + 1))
        # evaluation and residue pins at the marked points
        dP = _pl_deriv(R, P)
        dXn1 = _pl_deriv(R, X[n])
        for i in range(sc):
            rows.append(_pl_eval(R, X[n], zetas[i]) - self.lams[i])
        for i in range(sc):
            rows.append(_pl_eval(R, X[n - 1], zetas[i])
                        * _pl_eval(R, dXn1, zetas[i])
                        - self.T * self.fs[i] * _pl_eval(R, dP, zetas[i]))
        return rows


# -- stage potentials and the quadratic seed ------------------------------------


def _stage_coeffs(model, R, tau):
    """V' coefficients with every non-quadratic term dialed by tau.

    g_2 is blended toward a stand-in of 1 when the target has none, so the
    tau = 0 system is always an honest quadratic chain; at tau = 1 the
    returned coefficients equal the target's exactly.
    """
    tR = R.coerce(tau)
    out = []
    for i in range(1, model.n + 1):
        a = list(model.v_prime(i, R).c)
        ghat = a[1] if not R.is_zero(a[1]) else R.coerce(1)
        out.append([a[0] * tR, ghat + (a[1] - ghat) * tR]
                   + [v * tR for v in a[2:]])
    return out


def _gaussian_seed(R, prof, model, g2hat):
    """Closed-form solution of the quadratic (tau = 0) system, already packed.

    Linear second-order recurrences p_k, q_k propagate the slope and the
    pole data down the chain; their Casoratian q_k p_{k+1} - p_k q_{k+1}
    telescopes to 1/c_{k,k+1}, which is what makes the residue pins and the
    vanishing of the last function's poles automatic.
    """
    n, sc = model.n, prof.s_count
    cs = [R.coerce(model.coupling(k)) for k in range(n + 1)]
    T = R.coerce(model.T)
    ext = model.ext()
    lams = [R.coerce(l) for l, _ in ext]
    fs = [R.coerce(f) for _, f in ext]
    p = [R.coerce(0), R.coerce(1)]
    q = [R.coerce(1), R.coerce(0)]
    for k in range(1, n + 1):
        p.append(R.div(g2hat[k - 1] * p[k] - cs[k - 1] * p[k - 1], cs[k]))
        q.append(R.div(g2hat[k - 1] * q[k] - cs[k - 1] * q[k - 1], cs[k]))
    pn1 = p[n + 1]
    if R.is_zero(pn1):
        raise SolverError("quadratic seed degenerates (chain transfer has a kernel)")
    b1 = R.div(lams[0], pn1)
    zetas = [R.div(l - lams[0], pn1) for l in lams]
    ratio = R.div(q[n + 1], pn1)
    gam = [T * f for f in fs]
    P = [R.coerce(1)]
    for zv in zetas:
        P = _pl_mul(R, P, [-zv, R.coerce(1)])
    pdiv = []
    for i in range(sc):
        q_i = [R.coerce(1)]
        for j, zv in enumerate(zetas):
            if j != i:
                q_i = _pl_mul(R, q_i, [-zv, R.coerce(1)])
        pdiv.append(q_i)
    state = []
    for k in range(1, n + 2):
        sk = prof.s_k(k)
        xk = _pl_mul(R, [b1 * p[k], p[k]], _pl_pow(R, P, sk))
        if k <= n:
            for i in range(sc):
                cki = gam[i] * (q[k] - ratio * p[k])
                xk = _pl_add(R, xk,
                             _pl_scale(_pl_mul(R, _pl_pow(R, P, sk - 1),
                                               pdiv[i]), cki))
        want = prof.x_degree(k) + 1
        xk = xk + [R.coerce(0)] * (want - len(xk))
        if k == 1:
            if not R.is_zero(xk[-1] - R.coerce(1)):
                raise SolverError("seed misses the monic pin on X_1")
            state.extend(xk[:-1])
        else:
            state.extend(xk)
    state.extend(zetas[1:])
    return state


# -- linear cores ------------------------------------------------------------------


def _ring_solve(R, A, b):
    """Gauss-Jordan over an exact ring; pivots must be units."""
    n = len(b)
    M = [A[i][:] + [b[i]] for i in range(n)]
    for col in range(n):
        piv = None
        for ri in range(col, n):
            v = M[ri][col]
            ok = v.is_unit() if isinstance(v, TruncSeries) else not R.is_zero(v)
            if ok:
                piv = ri
                break
        if piv is None:
            raise SolverError("linearized curve conditions are singular")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [R.div(v, pv) for v in M[col]]
        for ri in range(n):
            if ri == col:
                continue
            f = M[ri][col]
            if R.is_zero(f):
                continue
            row, prow = M[ri], M[col]
            M[ri] = [row[j] - f * prow[j] for j in range(n + 1)]
    return [M[i][n] for i in range(n)]


def _normal_step(R, drows, U):
    """Newton correction via the normal equations (exact rings).

    The one redundant residual row is a row redundancy only, so J^T J keeps
    full rank and, at a quadratic-chain base point, unit pivots.
    """
    z = R.coerce(0)
    A = [[z] * U for _ in range(U)]
    b = [z] * U
    for r in drows:
        val = getattr(r, "val", r)
        grad = getattr(r, "grad", None)
        if not grad:
            continue
        items = list(grad.items())
        for i, gi in items:
            b[i] = b[i] - val * gi
            Ai = A[i]
            for j, gj in items:
                Ai[j] = Ai[j] + gi * gj
    return _ring_solve(R, A, b)


# -- Newton drivers ---------------------------------------------------------------

# exact iterates on a non-terminating run (irrational target, or linear-rate
# creep into a double root) roughly square their fraction sizes per step, so a
# generous cap cuts the run off after a handful of extra iterations
_BIT_CAP = 1 << 16


def _state_bits(v):
    c = getattr(v, "c", None)
    if c is not None:
        return max((_state_bits(a) for a in c), default=0)
    n = getattr(v, "numerator", None)
    if n is None:
        return 0
    return n.bit_length() + v.denominator.bit_length()


def _newton_ring(sys, state, cap, failmsg):
    R = sys.R
    cur = list(state)
    for _ in range(cap + 1):
        rows = sys.rows(cur)
        if all(R.is_zero(v) for v in rows):
            return cur
        delta = _normal_step(R, sys.rows(cur, jac=True), sys.nunk)
        cur = [cur[i] + delta[i] for i in range(sys.nunk)]
        if max(map(_state_bits, cur)) > _BIT_CAP:
            raise SolverError(failmsg)
    rows = sys.rows(cur)
    if all(R.is_zero(v) for v in rows):
        return cur
    raise SolverError(failmsg)


def _newton_float(sys, state, max_iter=60):
    cur = list(state)
    rn = None
    for _ in range(max_iter):
        drows = sys.rows(cur, jac=True)
        vals = [getattr(r, "val", r) for r in drows]
        rn = max(abs(v) for v in vals)
        J = np.zeros((len(drows), sys.nunk), dtype=complex)
        for ri, r in enumerate(drows):
            for k, gv in getattr(r, "grad", {}).items():
                J[ri, k] = gv
        scale = max(1.0, float(np.abs(J).max()) if J.size else 1.0)
        if rn <= 1e-11 * scale:
            return cur
        delta = np.linalg.lstsq(J, -np.array(vals, dtype=complex), rcond=None)[0]
        step = 1.0
        for _h in range(9):
            cand = [cur[i] + step * complex(delta[i]) for i in range(sys.nunk)]
            rn2 = max(abs(v) for v in sys.rows(cand))
            if rn2 < rn:
                cur = cand
                break
            step *= 0.5
        else:
            raise _StageFail(f"stuck at residual {rn:.3e}")
    raise _StageFail(f"no convergence after {max_iter} steps (residual {rn:.3e})")


def _float_homotopy(model, R, prof):
    g2h = [c[1] for c in _stage_coeffs(model, R, Fraction(0))]
    state = _gaussian_seed(R, prof, model, g2h)
    sys0 = _System(R, model, prof, _stage_coeffs(model, R, Fraction(0)))
    r0 = max(abs(v) for v in sys0.rows(state))
    if r0 > 1e-8:
        raise SolverError(f"quadratic seed fails its own equations ({r0:.3e})")
    done = Fraction(0)
    pending = [Fraction(i, 16) for i in range(1, 17)]
    while pending:
        t = pending[0]
        sys_t = _System(R, model, prof, _stage_coeffs(model, R, t))
        try:
            state = _newton_float(sys_t, state)
        except _StageFail:
            if t - done <= Fraction(1, 256):
                raise SolverError(
                    f"continuation stalled at coupling fraction {done}; "
                    "the target couplings likely sit past a critical point")
            pending.insert(0, (done + t) / 2)
            continue
        done = t
        pending.pop(0)
    return state


# -- series-ring admissibility ----------------------------------------------------


def _series_check(model, R):
    tgt = _series_target(R.param)
    if tgt is None:
        raise SolverError(
            "the series parameter must name a potential coefficient, "
            "e.g. g4 or g4_2")
    j, site = tgt
    if j < 3:
        raise SolverError("series deformations must dial a g_j with j >= 3")
    if not 1 <= site <= model.n:
        raise SolverError("series parameter names a site outside the chain")
    if j > model.d[site - 1] + 1:
        raise SolverError("series parameter names a coefficient the model does not store")
    for i in range(1, model.n + 1):
        pot = model.potentials[i - 1]
        if pot[0] != 0:
            raise SolverError("series builds need g_1 = 0 on every site")
        if pot[1] == 0:
            raise SolverError("series builds need a Gaussian base: g_2 must be nonzero")
        for jj in range(3, len(pot) + 1):
            if (i, jj) != (site, j) and pot[jj - 1] != 0:
                raise SolverError(
                    "series builds must be Gaussian away from the deformation slot")


# -- gauge ------------------------------------------------------------------------


def _symmetrize(R, prof, xlists, zetas):
    """Rescale z so the 1/z tail of x_1 matches its leading slope."""
    s1 = prof.s_k(1)
    sc = prof.s_count
    x1 = RationalFn(Poly(R, xlists[0]),
                    Poly.from_roots(R, zetas) ** s1)
    exp = local_expand(x1, INF, 1)
    a, c = exp.coeff(-1), exp.coeff(1)
    if R.is_zero(c):
        raise SolverError("symmetric gauge undefined: x_1 has no 1/z tail")
    try:
        rho = R.sqrt(R.div(c, a))
    except RingError as e:
        raise SolverError(f"symmetric gauge unavailable in this ring: {e}") from e
    rinv = R.inv(rho)
    new_zetas = [zv * rinv for zv in zetas]
    out = []
    for k, lst in enumerate(xlists, start=1):
        fac = rinv ** (sc * prof.s_k(k))
        row = []
        rj = R.coerce(1)
        for v in lst:
            row.append(v * rj * fac)
            rj = rj * rho
        out.append(row)
    return out, new_zetas


# -- entry point -------------------------------------------------------------------


def build_curve(model: ChainModel, ring=None, gauge=None) -> SpectralCurve:
    """Solve the divisor conditions and return the parametrized curve.

    gauge defaults to "symmetric" on the floating ring and "monic" on the
    exact ones (a symmetric exact gauge needs the rescale to be rational).
    """
    from ..algebra import RationalRing, parse_ring
    if ring is None:
        R = RationalRing()
    elif isinstance(ring, str):
        R = parse_ring(ring)
    else:
        R = ring
    prof = model.profile()
    if isinstance(R, SeriesRing):
        _series_check(model, R)
        g2h = [c[1] for c in _stage_coeffs(model, R, Fraction(0))]
        seed = _gaussian_seed(R, prof, model, g2h)
        sys1 = _System(R, model, prof, _stage_coeffs(model, R, Fraction(1)))
        state = _newton_ring(sys1, seed, R.order.bit_length() + 3,
                             "series Newton failed to close at the requested order")
    elif R.exact:
        g2h = [c[1] for c in _stage_coeffs(model, R, Fraction(0))]
        seed = _gaussian_seed(R, prof, model, g2h)
        sys1 = _System(R, model, prof, _stage_coeffs(model, R, Fraction(1)))
        state = _newton_ring(sys1, seed, 8,
                             "Newton over the exact ring did not terminate; the "
                             "curve coefficients are likely irrational — build "
                             "with the float ring instead")
    else:
        state = _float_homotopy(model, R, prof)
        sys1 = _System(R, model, prof, _stage_coeffs(model, R, Fraction(1)))
    xlists, zetas = sys1.unpack(state, jac=False)
    if gauge is None:
        gauge = "monic" if R.exact else "symmetric"
    if gauge == "symmetric":
        xlists, zetas = _symmetrize(R, prof, xlists, zetas)
    elif gauge != "monic":
        raise ValueError(f"unknown gauge {gauge!r}")
    P = Poly.from_roots(R, zetas)
    Xs = tuple(Poly(R, lst) for lst in xlists)
    xs = tuple(RationalFn(Xs[k - 1], P ** prof.s_k(k))
               for k in range(1, model.n + 2))
    y = xs[1] * RationalFn.const(R, R.coerce(model.coupling(1)))
    return SpectralCurve(R, xs, y, zetas=tuple(zetas), profile=prof,
                         model=model, cleared=(Xs, P))
