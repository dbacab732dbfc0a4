"""Sparse multivariate polynomials, just enough for chain-determinant expressions."""
from __future__ import annotations

from .rings import Ring


class MultiPoly:
    """sum over monomials: {exponent tuple -> coefficient}, fixed variable order."""

    __slots__ = ("R", "vars", "terms")

    def __init__(self, R: Ring, vars: tuple, terms=None):
        self.R = R
        self.vars = tuple(vars)
        t = {}
        for e, v in (terms or {}).items():
            e = tuple(e)
            if len(e) != len(self.vars):
                raise ValueError("exponent tuple length mismatch")
            v = v if not isinstance(v, (int, float, str)) else R.coerce(v)
            if not R.is_zero(v, 0 if R.exact else 0.0):
                t[e] = v
        self.terms = t

    @classmethod
    def const(cls, R, vars, v):
        return cls(R, vars, {(0,) * len(vars): R.coerce(v)})

    @classmethod
    def var(cls, R, vars, name):
        e = [0] * len(vars)
        e[tuple(vars).index(name)] = 1
        return cls(R, vars, {tuple(e): R.coerce(1)})

    def is_zero(self):
        return not self.terms

    def _co(self, other):
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise ValueError("mixed variable contexts")
            return other
        return MultiPoly.const(self.R, self.vars, other)

    def __add__(self, other):
        o = self._co(other)
        t = dict(self.terms)
        for e, v in o.terms.items():
            t[e] = t[e] + v if e in t else v
        return MultiPoly(self.R, self.vars, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.R, self.vars, {e: -v for e, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._co(other)
        t = {}
        for e1, v1 in self.terms.items():
            for e2, v2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = v1 * v2
                t[e] = t[e] + p if e in t else p
        return MultiPoly(self.R, self.vars, t)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.const(self.R, self.vars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        d = self - self._co(other)
        return all(self.R.is_zero(v) for v in d.terms.values())

    def degree(self, name):
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def coeff(self, exps):
        return self.terms.get(tuple(exps), self.R.coerce(0))

    def subs(self, values: dict):
        """Evaluate with var -> object; objects only need +, * and int powers."""
        res = None
        for e, cv in self.terms.items():
            term = None
            for i, k in enumerate(e):
                if k == 0:
                    continue
                f = values[self.vars[i]] ** k if k > 1 else values[self.vars[i]]
                term = f if term is None else term * f
            term = cv if term is None else term * cv
            res = term if res is None else res + term
        if res is None:
            return self.R.coerce(0)
        return res

    def map_ring(self, S: Ring, f=None):
        g = f or (lambda v: S.coerce(v))
        return MultiPoly(S, self.vars, {e: g(v) for e, v in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms):
            mono = "*".join(f"{n}^{k}" if k > 1 else n
                            for n, k in zip(self.vars, e) if k)
            c = self.terms[e]
            bits.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)
