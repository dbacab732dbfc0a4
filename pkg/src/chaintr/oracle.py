"""Combinatorial ground truth for the chain model, independent of the curve.

Two oracles live here.  ``wick_moments`` evaluates connected trace moments by
brute-force Wick pairing: every perfect matching of the trace half-edges is a
ribbon graph, weighted by entries of the inverse quadratic form of the chain,
and classified by the genus of the glued surface.  ``gaussian_exact_lnZ`` is
the closed-form finite-N Gaussian partition function; a high-precision fit of
its large-N expansion recovers the stable free energies.

Nothing in this module touches the spectral curve or the recursion — that is
the point.
"""
from __future__ import annotations

from fractions import Fraction
from math import prod

from .model import ChainModel

_HALF_EDGE_CAP = 16
_INSERTION_CAP = 3


class OracleLimit(ValueError):
    """Requested enumeration exceeds the desk-scale size limits."""


# -- chain propagator ----------------------------------------------------------

def chain_propagator(model: ChainModel):
    """Inverse of the quadratic form C (g_2 on the diagonal, -c off it).

    <(M_i)_ab (M_j)_cd> = (T/N) (C^-1)_ij delta_ad delta_bc; returned as a
    dense matrix of exact entries.
    """
    n = model.n
    C = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        g2 = model.g(i + 1, 2)
        if g2 == 0:
            raise OracleLimit(f"site {i + 1} has no quadratic term; "
                              "the pairing oracle needs a Gaussian backbone")
        C[i][i] = g2
        if i + 1 < n:
            c = model.coupling(i + 1)
            C[i][i + 1] = -c
            C[i + 1][i] = -c
    # exact Gauss-Jordan; n is tiny
    A = [row[:] + [Fraction(1) if j == i else Fraction(0) for j in range(n)]
         for i, row in enumerate(C)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise OracleLimit("chain quadratic form is singular")
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [v / pv for v in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [row[n:] for row in A]


# -- ribbon-graph enumeration ----------------------------------------------------

def _matchings(elems):
    if not elems:
        yield ()
        return
    a = elems[0]
    for i in range(1, len(elems)):
        rest = elems[1:i] + elems[i + 1:]
        for sub in _matchings(rest):
            yield ((a, elems[i]),) + sub


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _census(vertices):
    """Connected pairings of the given vertices, graded by genus.

    ``vertices`` is a list of (site, valence).  Yields (genus, edges) for each
    perfect matching of the half-edges that connects all vertices, where
    ``edges`` lists the site pairs to be weighted by the propagator.
    """
    sites, owner, succ = [], [], []
    for v, (site, k) in enumerate(vertices):
        base = len(owner)
        for j in range(k):
            sites.append(site)
            owner.append(v)
            succ.append(base + (j + 1) % k)
    total = len(owner)
    if total % 2:
        return
    if total > _HALF_EDGE_CAP:
        raise OracleLimit(f"{total} half-edges exceed the cap of {_HALF_EDGE_CAP}")
    V = len(vertices)
    E = total // 2
    for m in _matchings(tuple(range(total))):
        parent = list(range(V))
        mate = [0] * total
        for a, b in m:
            mate[a], mate[b] = b, a
            ra, rb = _find(parent, owner[a]), _find(parent, owner[b])
            if ra != rb:
                parent[ra] = rb
        if len({_find(parent, v) for v in range(V)}) != 1:
            continue
        # faces: cycles of h -> succ[mate[h]]
        seen = [False] * total
        F = 0
        for h in range(total):
            if seen[h]:
                continue
            F += 1
            while not seen[h]:
                seen[h] = True
                h = succ[mate[h]]
        chi = V - E + F
        yield (2 - chi) // 2, tuple((sites[a], sites[b]) for a, b in m)


def genus_counts(model: ChainModel, traces):
    """Number of connected pure-backbone pairings per genus (no insertions)."""
    out = {}
    for g, _ in _census([(int(s), int(k)) for s, k in traces]):
        out[g] = out.get(g, 0) + 1
    return out


def _vertex_menu(model: ChainModel):
    """Insertion vertex types: (site, valence k, coupling g_k) for k != 2."""
    menu = []
    for i in range(1, model.n + 1):
        for k, gk in enumerate(model.potentials[i - 1], start=1):
            if k != 2 and gk != 0:
                menu.append((i, k, gk))
    return menu


def _multisets(menu, cap):
    """All insertion multisets of size <= cap, with their symmetry weight."""
    yield (), Fraction(1)

    def grow(start, chosen):
        if len(chosen) == cap:
            return
        for idx in range(start, len(menu)):
            nxt = chosen + (idx,)
            w = Fraction(1)
            for j in set(nxt):
                m = nxt.count(j)
                site, k, gk = menu[j]
                w *= Fraction(-1) ** m * (Fraction(gk) / k) ** m / prod(range(1, m + 1))
            yield nxt, w
            yield from grow(idx, nxt)

    yield from grow(0, ())


def wick_moments(model: ChainModel, traces, genus, insertions=_INSERTION_CAP):
    """Connected moment <prod tr M_i^k>_c at the given genus, by enumeration.

    Normalized as the coefficient of (N/T)^(2-2g-n): directly comparable to
    the engine's moments.  Non-quadratic couplings enter as insertion
    vertices, expanded through order ``insertions`` (at most third).
    """
    if model.external and any(l != 0 for l, _ in model.external):
        raise OracleLimit("the pairing oracle does not handle external fields")
    if not 0 <= insertions <= _INSERTION_CAP:
        raise OracleLimit(f"insertion order must lie in 0..{_INSERTION_CAP}")
    traces = [(int(s), int(k)) for s, k in traces]
    if not traces:
        raise OracleLimit("need at least one trace")
    for s, k in traces:
        if not 1 <= s <= model.n:
            raise OracleLimit(f"trace site {s} outside 1..{model.n}")
        if k < 1:
            raise OracleLimit("trace powers must be >= 1")
    n = len(traces)
    cinv = chain_propagator(model)
    T = Fraction(model.T) if isinstance(model.T, (int, Fraction)) else model.T
    menu = _vertex_menu(model)
    backbone = sum(k for _, k in traces)
    acc = Fraction(0)
    for chosen, mult in _multisets(menu, insertions):
        p = len(chosen)
        verts = traces + [(menu[j][0], menu[j][1]) for j in chosen]
        if backbone + sum(menu[j][1] for j in chosen) > _HALF_EDGE_CAP:
            raise OracleLimit("insertions push the half-edge count past the cap")
        E = (backbone + sum(menu[j][1] for j in chosen)) // 2
        tpow = E - p + 2 - 2 * genus - n
        for g, edges in _census(verts):
            if g != genus:
                continue
            w = mult
            for a, b in edges:
                w *= cinv[a - 1][b - 1]
            acc += w * T ** tpow
    return acc


# -- exact finite-N Gaussian partition function ----------------------------------

def gaussian_exact_lnZ(N: int, T=1, dps: int = 60):
    """ln of the eigenvalue-normalized Gaussian partition function.

    Z(N) = (1/N!) * int prod dl Delta(l)^2 exp(-(N/T) sum l^2/2)
         = (T/N)^(N^2/2) (2 pi)^(N/2) prod_{k=1}^{N-1} k!

    High-precision value; the large-N expansion of this normalization carries
    the stable free energies as coefficients of (N/T)^(2-2g).
    """
    import mpmath as mp
    if not 1 <= N <= 256:
        raise OracleLimit("N outside 1..256")
    with mp.workdps(dps):
        acc = mp.mpf(0)
        for k in range(1, N):
            acc += mp.log(mp.factorial(k))
        acc += mp.mpf(N) / 2 * mp.log(2 * mp.pi)
        acc += mp.mpf(N) ** 2 / 2 * mp.log(mp.mpf(T) / N)
        return +acc


def gaussian_free_energy_fit(T=1, n_lo: int = 12, n_hi: int = 96, dps: int = 60):
    """Fit the large-N expansion of gaussian_exact_lnZ; return {2: F2, 3: F3}.

    The basis spans the non-topological part (N^2 ln N, N^2, N, ln N, 1) plus
    inverse powers through N^-8; odd inverse powers are honesty terms — the
    expansion is even, so their fitted coefficients must come out ~0 (the
    report carries their worst leak).  F_g is the (N/T)^(2-2g) coefficient.
    The window starts high enough that the first neglected order N^-10 sits
    below the fit's resolution.
    """
    import mpmath as mp
    with mp.workdps(dps):
        basis = [
            lambda x: x ** 2 * mp.log(x),
            lambda x: x ** 2,
            lambda x: x,
            lambda x: mp.log(x),
            lambda x: mp.mpf(1),
            lambda x: 1 / x,
            lambda x: x ** -2,
            lambda x: x ** -3,
            lambda x: x ** -4,
            lambda x: x ** -5,
            lambda x: x ** -6,
            lambda x: x ** -8,
        ]
        rows, rhs = [], []
        for N in range(n_lo, n_hi + 1):
            x = mp.mpf(N)
            rows.append([f(x) for f in basis])
            rhs.append(gaussian_exact_lnZ(N, T=T, dps=dps))
        A = mp.matrix(rows)
        b = mp.matrix(rhs)
        coef = mp.qr_solve(A, b)[0]
        tt = mp.mpf(T)
        return {2: coef[6] * tt ** -2, 3: coef[8] * tt ** -4,
                "odd_leak": max(abs(coef[5]), abs(coef[7]), abs(coef[9]))}
