"""Root finding for dense polynomials over the supported coefficient rings."""
from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .poly import Poly
from .rings import RingError, SeriesRing, TruncSeries


class IrrationalRootError(RingError):
    """Exact factorization hit a factor with no rational root."""


class MultipleRootError(RingError):
    """A simple root was required but a higher-multiplicity root was found."""


def poly_roots(p: Poly, *, multiplicities=False, require_simple=False):
    """All roots of p in the coefficient ring's closure of choice.

    rational -> exact Fraction roots (IrrationalRootError if any factor has none);
    float    -> complex roots via companion matrix, Newton-polished, clustered;
    series   -> t-adic Newton lifts of the simple rational roots at t^0.

    Returns a list of roots repeated per multiplicity, or (root, multiplicity)
    pairs when multiplicities=True.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no well-defined root set")
    R = p.R
    if isinstance(R, SeriesRing):
        pairs = _series_roots(p)
    elif R.exact:
        pairs = _rational_roots(p)
    else:
        pairs = _float_roots(p)
    if require_simple and any(m > 1 for _, m in pairs):
        raise MultipleRootError("repeated root where a simple root is required")
    if multiplicities:
        return pairs
    return [r for r, m in pairs for _ in range(m)]


# -- exact -----------------------------------------------------------------------


def _divisors(n: int):
    n = abs(n)
    out = set()
    i = 1
    while i <= isqrt(n):
        if n % i == 0:
            out.add(i)
            out.add(n // i)
        i += 1
    return sorted(out)


def _rational_roots(p: Poly):
    R = p.R
    work = list(p.c)
    pairs = []
    # strip roots at zero first
    v = 0
    while R.is_zero(work[0]) and len(work) > 1:
        work.pop(0)
        v += 1
    if v:
        pairs.append((R.coerce(0), v))
    while len(work) > 1:
        q = Poly(R, work, trusted=True)
        r = _one_rational_root(q)
        if r is None:
            raise IrrationalRootError(f"no rational root of {q!r}")
        m = 0
        root = R.coerce(r)
        while True:
            quo, rem = _deflate(work, root, R)
            if rem != R.coerce(0):
                break
            work = quo
            m += 1
            if len(work) == 1:
                break
        pairs.append((root, m))
    return sorted(pairs, key=lambda t: (t[0], -t[1]))


def _deflate(coeffs, r, R):
    """Synthetic division by (z - r): returns (quotient coeffs ascending, remainder)."""
    acc = R.coerce(0)
    out = []
    for c in reversed(coeffs):
        acc = acc * r + c if out else c
        out.append(acc)
    # out holds remainder-style Horner values in descending order
    rem = out[-1]
    quo = list(reversed(out[:-1]))
    return quo, rem


def _one_rational_root(p: Poly):
    from math import lcm
    den = lcm(*[c.denominator for c in p.c]) if len(p.c) > 1 else p.c[0].denominator
    ints = [int(c * den) for c in p.c]
    from math import gcd
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    a0, an = ints[0], ints[-1]
    if a0 == 0:
        return Fraction(0)
    for num in _divisors(a0):
        for dq in _divisors(an):
            for s in (1, -1):
                cand = Fraction(s * num, dq)
                if _eval_int_poly(ints, cand) == 0:
                    return cand
    return None


def _eval_int_poly(ints, x: Fraction):
    acc = Fraction(0)
    for c in reversed(ints):
        acc = acc * x + c
    return acc


# -- float ------------------------------------------------------------------------


# numerical error of an m-fold root scales like eps^(1/m): ~1e-8 for doubles,
# ~1e-5 for triples, so the cluster radius must sit above that, not at ring eps
def _float_roots(p: Poly, cluster_tol=3e-5):
    import numpy as np
    cs = [complex(v) for v in p.c]
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    arr = np.array(list(reversed(cs)), dtype=complex)
    raw = np.roots(arr)
    dp = p.deriv()
    polished = []
    for r in raw:
        z = complex(r)
        for _ in range(4):
            d = complex(dp(z))
            if abs(d) < 1e-14:
                break
            z = z - complex(p(z)) / d
        polished.append(z)
    # greedy clustering into multiplicity groups
    used = [False] * len(polished)
    pairs = []
    for i, z in enumerate(polished):
        if used[i]:
            continue
        group = [z]
        used[i] = True
        tol = cluster_tol * max(1.0, abs(z))
        for j in range(i + 1, len(polished)):
            if not used[j] and abs(polished[j] - z) < tol:
                group.append(polished[j])
                used[j] = True
        center = sum(group) / len(group)
        if abs(center.imag) < 1e-10 * max(1.0, abs(center)):
            center = complex(center.real, 0.0)
        pairs.append((center, len(group)))
    return sorted(pairs, key=lambda t: (t[0].real, t[0].imag))


# -- series -----------------------------------------------------------------------


def _series_roots(p: Poly):
    R: SeriesRing = p.R
    from .rings import RationalRing
    Q = RationalRing()
    p0 = Poly(Q, [c.c[0] for c in p.c])
    if p0.is_zero() or p0.degree < p.degree:
        raise RingError("leading coefficient not a unit at order zero")
    base = _rational_roots(p0)
    dp = p.deriv()
    pairs = []
    for r0, m in base:
        if m > 1:
            raise MultipleRootError("cannot lift a repeated order-zero root")
        root = R.coerce(r0)
        # Newton in the t-adic topology: quadratic convergence
        steps = max(1, R.order.bit_length() + 1)
        for _ in range(steps):
            d = dp(root)
            if not d.is_unit():
                raise RingError("derivative not a unit during t-adic lift")
            root = root - p(root) * d.inverse()
        pairs.append((root, 1))
    return pairs
