"""Chain-of-matrices model data and the polynomial recursions attached to it."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra import MultiPoly, Poly, Ring, SeriesRing


class SchemaError(ValueError):
    """Model description violates the input schema or its invariants."""


def parse_coeff(v):
    """Accept 'p/q' strings, ints (exact) and floats (inexact)."""
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as e:
            raise SchemaError(f"bad rational literal {v!r}") from e
    if isinstance(v, bool):
        raise SchemaError("boolean is not a number")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return v
    if isinstance(v, Fraction):
        return v
    raise SchemaError(f"unsupported numeric value {v!r}")


@dataclass(frozen=True)
class DivisorProfile:
    """Pole orders of the x_k on the genus-zero curve.

    x_k has a pole of order r_k at infinity and order s_k at each of the
    marked points; the chain structure makes both multiplicative in the
    potential degrees.
    """
    n: int
    d: tuple
    s_count: int          # number of distinct external eigenvalues
    r: tuple = field(init=False)   # r[k] for k = 1..n+1 at index k-1
    s: tuple = field(init=False)   # s[k] likewise
    D1: int = field(init=False)
    D2: int = field(init=False)

    def __post_init__(self):
        d, n = self.d, self.n
        r = [1]
        for k in range(1, n + 1):
            r.append(r[-1] * d[k - 1])
        s = [0] * (n + 1)
        s[n] = 0
        if n >= 1:
            s[n - 1] = 1
        for k in range(n - 2, -1, -1):       # s_k = d_{k+1} * s_{k+1} (0-based: d[k+1])
            s[k] = d[k + 1] * s[k + 1]
        object.__setattr__(self, "r", tuple(r))
        object.__setattr__(self, "s", tuple(s))
        D1 = self.s_count
        for dd in d[2:]:
            D1 *= dd
        D2 = self.s_count
        for dd in d[1:]:
            D2 *= dd
        object.__setattr__(self, "D1", D1)
        object.__setattr__(self, "D2", D2)

    def r_k(self, k):
        return self.r[k - 1]

    def s_k(self, k):
        return self.s[k - 1]

    @property
    def sheets(self):
        return self.D2 + 1

    def x_degree(self, k):
        """Numerator degree of x_k when cleared by P^{s_k}."""
        return self.r_k(k) + self.s_count * self.s_k(k)


@dataclass(frozen=True)
class FillingData:
    epsilons: tuple
    genus_zero: bool = True

    def __post_init__(self):
        if self.genus_zero and len(self.epsilons) != 1:
            raise SchemaError("genus-zero mode has exactly one cut")


@dataclass(frozen=True)
class ChainModel:
    """n matrices in a chain; site potentials V_i, nearest couplings, and an
    optional external field attached past the last site.

    potentials[i] lists g_k^{(i+1)} for k = 1..d+1 (V' coefficients in
    ascending powers); the boundary couplings c_{0,1} and c_{n,n+1} are 1.
    """
    n: int
    potentials: tuple
    couplings: tuple
    T: object
    external: tuple = ()

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise SchemaError("n must be an integer >= 1")
        if len(self.potentials) != self.n:
            raise SchemaError("potentials must list one coefficient array per site")
        pots = tuple(tuple(parse_coeff(v) for v in p) for p in self.potentials)
        for i, p in enumerate(pots):
            if len(p) < 2:
                raise SchemaError(f"site {i + 1}: potential degree d must be >= 1")
            if p[-1] == 0:
                raise SchemaError(f"site {i + 1}: leading coefficient g_(d+1) must be nonzero")
        cpl = tuple(parse_coeff(v) for v in self.couplings)
        if len(cpl) != self.n - 1:
            raise SchemaError("couplings must list c_(i,i+1) for i = 1..n-1")
        if any(c == 0 for c in cpl):
            raise SchemaError("couplings must be nonzero")
        T = parse_coeff(self.T)
        if not (T > 0):
            raise SchemaError("T must be positive")
        ext = tuple((parse_coeff(l), parse_coeff(f)) for l, f in self.external)
        if ext:
            if any(f <= 0 for _, f in ext):
                raise SchemaError("external fractions must be positive")
            tot = sum(f for _, f in ext)
            ok = tot == 1 if all(isinstance(f, Fraction) for _, f in ext) \
                else abs(float(tot) - 1.0) < 1e-9
            if not ok:
                raise SchemaError("external fractions must sum to 1")
            lams = [l for l, _ in ext]
            if len(set(map(float, lams))) != len(lams):
                raise SchemaError("external eigenvalues must be distinct")
        object.__setattr__(self, "potentials", pots)
        object.__setattr__(self, "couplings", cpl)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "external", ext)

    # -- derived structure ---------------------------------------------------
    @property
    def d(self):
        return tuple(len(p) - 1 for p in self.potentials)

    def ext(self):
        """External data with the empty field normalized to a single zero eigenvalue."""
        return self.external if self.external else ((Fraction(0), Fraction(1)),)

    @property
    def s_count(self):
        return len(self.ext())

    def coupling(self, k):
        """c_{k,k+1} with the fixed boundary values c_{0,1} = c_{n,n+1} = 1."""
        if k == 0 or k == self.n:
            return Fraction(1)
        if 1 <= k < self.n:
            return self.couplings[k - 1]
        raise IndexError(f"coupling index {k} outside 0..n")

    def g(self, i, j):
        """g_j^{(i)}, defaulting to 0 past the stored degree."""
        p = self.potentials[i - 1]
        return p[j - 1] if 1 <= j <= len(p) else Fraction(0)

    def profile(self) -> DivisorProfile:
        return DivisorProfile(self.n, self.d, self.s_count)

    def filling(self) -> FillingData:
        return FillingData((self.T,))

    def v_prime(self, i, R: Ring) -> Poly:
        """V_i'(x) as a polynomial over R; the series ring substitutes its
        named coupling g<j>_<i> (site 1 may be written g<j>) as value * t."""
        coeffs = [R.coerce(v) for v in self.potentials[i - 1]]
        if isinstance(R, SeriesRing):
            tgt = _series_target(R.param)
            if tgt is not None:
                j, site = tgt
                if site == i and 1 <= j <= len(coeffs):
                    coeffs[j - 1] = coeffs[j - 1] * R.t
        return Poly(R, coeffs, trusted=True)

    def v_poly(self, i, R: Ring) -> Poly:
        """V_i itself (zero constant term): sum g_k x^k / k."""
        vp = self.v_prime(i, R)
        out = [R.coerce(0)]
        for k, c in enumerate(vp.c):
            out.append(c * R.from_fraction(Fraction(1, k + 1)))
        return Poly(R, out, trusted=True)

    def S_poly(self, R: Ring) -> Poly:
        """Minimal polynomial of the external field: prod (z - lambda_i)."""
        return Poly.from_roots(R, [R.coerce(l) for l, _ in self.ext()])

    def Q_poly(self, R: Ring) -> MultiPoly:
        """(S(z) - S(w))/(z - w) / c_{n,n+1} as a polynomial in z, w."""
        S = self.S_poly(R)
        terms = {}
        for k, a in enumerate(S.c):
            if k == 0:
                continue
            for i in range(k):        # (z^k - w^k)/(z - w)
                e = (i, k - 1 - i)
                terms[e] = terms[e] + a if e in terms else a
        return MultiPoly(R, ("z", "w"), terms)

    # -- serialization ---------------------------------------------------------
    @classmethod
    def from_json(cls, doc: dict) -> "ChainModel":
        if not isinstance(doc, dict):
            raise SchemaError("model document must be a JSON object")
        missing = {"n", "potentials", "couplings", "T"} - set(doc)
        if missing:
            raise SchemaError(f"missing model fields: {sorted(missing)}")
        ext = doc.get("external", [])
        if not isinstance(ext, list):
            raise SchemaError("external must be an array of {lambda, fraction}")
        try:
            pairs = tuple((e["lambda"], e["fraction"]) for e in ext)
        except (TypeError, KeyError) as e:
            raise SchemaError("external entries need lambda and fraction") from e
        if not isinstance(doc["potentials"], list) or \
                not all(isinstance(p, list) for p in doc["potentials"]):
            raise SchemaError("potentials must be an array of coefficient arrays")
        return cls(n=doc["n"], potentials=tuple(tuple(p) for p in doc["potentials"]),
                   couplings=tuple(doc.get("couplings", [])), T=doc["T"],
                   external=pairs)

    @classmethod
    def load(cls, path) -> "ChainModel":
        with open(path) as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as e:
                raise SchemaError(f"not valid JSON: {e}") from e
        return cls.from_json(doc)

    def to_json(self) -> dict:
        def num(v):
            return str(v) if isinstance(v, Fraction) else v
        return {
            "n": self.n,
            "potentials": [[num(v) for v in p] for p in self.potentials],
            "couplings": [num(v) for v in self.couplings],
            "T": num(self.T),
            "external": [{"lambda": num(l), "fraction": num(f)}
                         for l, f in self.external],
        }


def _series_target(param: str):
    """Parse a coupling name g<j> or g<j>_<i>; None if it is not one."""
    if not param.startswith("g"):
        return None
    body = param[1:]
    site = 1
    if "_" in body:
        body, s = body.split("_", 1)
        if not s.isdigit():
            return None
        site = int(s)
    if not body.isdigit():
        return None
    return int(body), site


# -- chain polynomial recursions -----------------------------------------------


def f_poly(i: int, j: int, model: ChainModel, R: Ring) -> MultiPoly:
    """Chain minor polynomial in x_i..x_j via the three-term recursion
    c_{k-1,k} f_{k,j} = V_k'(x_k) f_{k+1,j} - c_{k,k+1} x_k x_{k+1} f_{k+2,j},
    with f_{j+1,j} = 1 and f_{j+2,j} = 0."""
    if not (1 <= i and j <= model.n):
        raise IndexError("f_poly needs 1 <= i and j <= n")
    vars = tuple(f"x{k}" for k in range(min(i, j + 1), j + 1))
    one = MultiPoly.const(R, vars, 1)
    if i > j:
        return one if i == j + 1 else MultiPoly(R, vars, {})
    F_next, F_next2 = one, MultiPoly(R, vars, {})
    for k in range(j, i - 1, -1):
        xk = MultiPoly.var(R, vars, f"x{k}")
        vk = model.v_prime(k, R)
        acc = MultiPoly.const(R, vars, 0)
        for m, cm in enumerate(vk.c):
            acc = acc + (xk ** m) * cm
        term = acc * F_next
        if not F_next2.is_zero():
            xk1 = MultiPoly.var(R, vars, f"x{k + 1}")
            term = term - xk * xk1 * F_next2 * R.coerce(model.coupling(k))
        cinv = R.inv(R.coerce(model.coupling(k - 1)))
        F_next, F_next2 = term * cinv, F_next
    return F_next


def hat_x_sequence(x1, x2, model: ChainModel, R: Ring):
    """x-hat_3 .. x-hat_{n+1} built from the chain constraints, over any
    expression type closed under ring ops (rational functions, series, ...)."""
    if model.n < 2:
        raise ValueError("hat_x_sequence needs n >= 2")
    seq = [x1, x2]
    for k in range(3, model.n + 2):
        vk = model.v_prime(k - 1, R)
        nxt = vk(seq[-1]) - seq[-2] * R.coerce(model.coupling(k - 2))
        nxt = nxt * R.inv(R.coerce(model.coupling(k - 1)))
        seq.append(nxt)
    return seq[2:]
