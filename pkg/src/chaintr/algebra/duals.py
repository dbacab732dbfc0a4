"""Forward-mode dual numbers with sparse gradients, over any scalar ring."""
from __future__ import annotations


class Dual:
    """value + sum_k grad[k] * eps_k, with eps_i eps_j = 0."""

    __slots__ = ("val", "grad")

    def __init__(self, val, grad=None):
        self.val = val
        self.grad = grad or {}

    @classmethod
    def var(cls, R, value, key):
        return cls(R.coerce(value) if isinstance(value, (int, float, str)) else value,
                   {key: R.coerce(1)})

    def _co(self, other):
        return other if isinstance(other, Dual) else Dual(other, {})

    def __add__(self, other):
        o = self._co(other)
        g = dict(self.grad)
        for k, v in o.grad.items():
            g[k] = g[k] + v if k in g else v
        return Dual(self.val + o.val, g)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.val, {k: -v for k, v in self.grad.items()})

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._co(other)
        g = {k: v * o.val for k, v in self.grad.items()}
        for k, v in o.grad.items():
            t = self.val * v
            g[k] = g[k] + t if k in g else t
        return Dual(self.val * o.val, g)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._co(other)
        q = self.val / o.val
        g = {k: v / o.val for k, v in self.grad.items()}
        for k, v in o.grad.items():
            t = q * v / o.val
            g[k] = g[k] - t if k in g else -t
        return Dual(q, g)

    def __rtruediv__(self, other):
        return self._co(other) / self

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("dual powers must be nonnegative integers")
        out = Dual(self.val * 0 + 1, {})
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __repr__(self):
        return f"Dual({self.val}, {self.grad})"
