"""The plane algebraic curve swept out by (x_1(z), x_2(z)).

Elimination of z by linear algebra: every candidate monomial x_1^a x_2^b,
cleared of P(z) denominators, is a polynomial in z, and the plane relation
is the (unique, for a healthy curve) kernel vector of the resulting
coefficient matrix.
"""

import random
from fractions import Fraction

import numpy as np

from ..algebra import MultiPoly
from ..curve import SingularCurveError


def _nullspace_exact(rows, ncols):
    """Kernel basis of a Fraction matrix via reduced row echelon form."""
    m = [list(r) for r in rows]
    pivots = []
    rr = 0
    for col in range(ncols):
        piv = next((i for i in range(rr, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rr], m[piv] = m[piv], m[rr]
        pv = m[rr][col]
        m[rr] = [v / pv for v in m[rr]]
        for i in range(len(m)):
            if i != rr and m[i][col] != 0:
                f = m[i][col]
                m[i] = [m[i][j] - f * m[rr][j] for j in range(ncols)]
        pivots.append(col)
        rr += 1
        if rr == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis


def _nullspace_float(rows, ncols):
    a = np.array(rows, dtype=complex)
    if a.shape[0] < ncols:
        a = np.vstack([a, np.zeros((ncols - a.shape[0], ncols))])
    _, s, vh = np.linalg.svd(a)
    smax = s[0] if len(s) else 0.0
    null = [vh[i] for i in range(ncols)
            if i >= len(s) or s[i] <= 1e-8 * max(smax, 1e-300)]
    return null


def _relation_basis(curve, dx, dy):
    R = curve.R
    Xs, P = curve.cleared
    prof = curve.profile
    s1, s2 = prof.s_k(1), prof.s_k(2)
    ppow = {0: P ** 0}

    def getp(k):
        if k not in ppow:
            ppow[k] = getp(k - 1) * P
        return ppow[k]

    x1p = [Xs[0] ** 0]
    for _ in range(dx):
        x1p.append(x1p[-1] * Xs[0])
    x2p = [Xs[1] ** 0]
    for _ in range(dy):
        x2p.append(x2p[-1] * Xs[1])
    cols = []
    deg = 0
    index = []
    for a in range(dx + 1):
        for b in range(dy + 1):
            q = x1p[a] * x2p[b] * getp(s1 * (dx - a) + s2 * (dy - b))
            cols.append(q)
            deg = max(deg, q.degree)
            index.append((a, b))
    rows = [[c.coeff(k) for c in cols] for k in range(deg + 1)]
    if R.exact:
        basis = _nullspace_exact(rows, len(cols))
    else:
        basis = _nullspace_float(rows, len(cols))
    return basis, index


def compute_E0(curve):
    """Eliminate z: the polynomial relation satisfied by (x_1, x_2).

    Degrees follow the divisor count, (d_1 + D_1, 1 + D_2); a single-site
    chain realizes a smaller x_1-degree (the generic count includes sheets
    the one-site curve does not have), found by shrinking until the
    relation is unique.
    """
    if curve.cleared is None or curve.model is None:
        raise ValueError("compute_E0 needs a chain-built curve")
    R = curve.R
    model = curve.model
    prof = curve.profile
    dx = model.d[0] + prof.D1
    dy = 1 + prof.D2
    while True:
        basis, index = _relation_basis(curve, dx, dy)
        if len(basis) == 1:
            break
        if len(basis) == 0:
            raise SingularCurveError(
                f"no plane relation at degrees ({dx},{dy}): degenerate curve")
        if model.n >= 2:
            raise SingularCurveError(
                f"plane relation not unique at degrees ({dx},{dy}): "
                "degenerate curve")
        dx -= 1
        if dx < 1:
            raise SingularCurveError("plane relation collapsed below degree 1")
    vec = basis[0]
    # normalize: unit coefficient on the highest monomial of the top x_2 row
    if R.exact:
        lead = next(vec[i] for i in reversed(range(len(vec)))
                    if index[i][1] == dy and vec[i] != 0)
        coeffs = [v / lead for v in vec]
    else:
        mags = [abs(vec[i]) if index[i][1] == dy else -1.0
                for i in range(len(vec))]
        big = max(mags)
        lead = next(vec[i] for i in reversed(range(len(vec)))
                    if index[i][1] == dy and abs(vec[i]) >= 1e-8 * big)
        coeffs = [complex(v / lead) for v in vec]
        top = max(abs(v) for v in coeffs)
        coeffs = [0.0 if abs(v) <= 1e-12 * top else v for v in coeffs]
    e0 = MultiPoly(R, ("x1", "x2"),
                   {index[i]: R.coerce(coeffs[i]) for i in range(len(coeffs))
                    if not (coeffs[i] == 0)})
    if model.n >= 2:
        if e0.degree("x1") != dx or e0.degree("x2") != dy:
            raise SingularCurveError(
                f"plane relation degrees ({e0.degree('x1')},{e0.degree('x2')}) "
                f"fall short of ({dx},{dy}): degenerate curve")
    _verify_on_curve(curve, e0)
    return e0


def _verify_on_curve(curve, e0, npts=20, tol=1e-9):
    R = curve.R
    rng = random.Random(90217)
    for _ in range(npts):
        z = R.coerce(Fraction(rng.randint(23, 997), rng.randint(7, 19)))
        x1v, x2v = curve.xs[0](z), curve.xs[1](z)
        val = e0.subs({"x1": x1v, "x2": x2v})
        if R.exact:
            ok = R.is_zero(val)
        else:
            scale = sum(R.mag(c) * R.mag(x1v) ** e[0] * R.mag(x2v) ** e[1]
                        for e, c in e0.terms.items())
            ok = R.mag(val) <= tol * max(scale, 1e-300)
        if not ok:
            raise SingularCurveError(
                f"plane relation fails on the curve at z = {z!r}")
