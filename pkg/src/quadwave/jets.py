"""Truncated Taylor (jet) arithmetic.

A ``Jet`` stores the Taylor coefficients ``c_k = f^(k)(x0)/k!`` of a function
at a point, up to a fixed order.  Arithmetic on jets propagates derivatives
through closed-form expressions exactly (up to roundoff), which is how the
residual tests obtain analytic derivatives of the profiles, coefficients and
Wronskians without hand-differentiating anything.

Coefficients may be real or complex.  Non-integer powers and logs require a
positive real value at the expansion point.
"""

from __future__ import annotations

import math


class Jet:
    """Taylor polynomial of fixed length ``order + 1``."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = list(coeffs)

    @classmethod
    def var(cls, x0, order: int) -> "Jet":
        """The identity function expanded at x0."""
        c = [x0] + [0.0] * order
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def const(cls, value, order: int) -> "Jet":
        return cls([value] + [0.0] * order)

    @property
    def order(self) -> int:
        return len(self.c) - 1

    @property
    def value(self):
        return self.c[0]

    def derivative(self, k: int = 1):
        """The k-th derivative value f^(k)(x0)."""
        if k > self.order:
            raise ValueError(f"jet of order {self.order} has no derivative {k}")
        return self.c[k] * math.factorial(k)

    def derivatives(self):
        """All stored derivatives [f, f', f'', ...]."""
        return [self.c[k] * math.factorial(k) for k in range(len(self.c))]

    def diff(self) -> "Jet":
        """Jet of f' (one order shorter)."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        return Jet([(k + 1) * self.c[k + 1] for k in range(self.order)])

    def _wrap(self, other):
        if isinstance(other, Jet):
            if other.order != self.order:
                raise ValueError("jet order mismatch")
            return other
        return Jet.const(other, self.order)

    def __add__(self, other):
        o = self._wrap(other)
        return Jet([a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return Jet([-a for a in self.c])

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._wrap(other)
        n = self.order
        out = [0.0] * (n + 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                out[i + j] += a * o.c[j]
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._wrap(other)
        if o.c[0] == 0:
            raise ZeroDivisionError("division by a jet vanishing at the point")
        n = self.order
        out = [0.0] * (n + 1)
        for k in range(n + 1):
            s = self.c[k]
            for j in range(k):
                s -= out[j] * o.c[k - j]
            out[k] = s / o.c[0]
        return Jet(out)

    def __rtruediv__(self, other):
        return Jet.const(other, self.order) / self

    def __pow__(self, expt):
        if isinstance(expt, int):
            if expt == 0:
                return Jet.const(1.0, self.order)
            if expt < 0:
                return 1.0 / (self ** (-expt))
            out = self
            for _ in range(expt - 1):
                out = out * self
            return out
        # real (or complex) exponent via exp(expt * log)
        return (self.log() * expt).exp()

    def exp(self) -> "Jet":
        n = self.order
        e0 = _scalar_exp(self.c[0])
        out = [e0] + [0.0] * n
        for k in range(1, n + 1):
            s = 0.0
            for j in range(1, k + 1):
                s += j * self.c[j] * out[k - j]
            out[k] = s / k
        return Jet(out)

    def log(self) -> "Jet":
        a0 = self.c[0]
        if isinstance(a0, complex) or a0 <= 0:
            raise ValueError("jet log requires a positive real value at the point")
        n = self.order
        out = [math.log(a0)] + [0.0] * n
        for k in range(1, n + 1):
            s = k * self.c[k]
            for j in range(1, k):
                s -= j * out[j] * self.c[k - j]
            out[k] = s / (k * a0)
        return Jet(out)

    def sqrt(self) -> "Jet":
        a0 = self.c[0]
        if isinstance(a0, complex) or a0 <= 0:
            raise ValueError("jet sqrt requires a positive real value at the point")
        n = self.order
        r0 = math.sqrt(a0)
        out = [r0] + [0.0] * n
        for k in range(1, n + 1):
            s = self.c[k]
            for j in range(1, k):
                s -= out[j] * out[k - j]
            out[k] = s / (2 * r0)
        return Jet(out)

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError("cannot extend a jet by truncation")
        return Jet(self.c[: order + 1])

    def compose_with(self, inner: "Jet") -> "Jet":
        """Jet of f(g(x)) given self = jet of f at g(x0) and inner = jet of g.

        ``inner.c[0]`` is ignored (it is the expansion point of self).
        """
        n = self.order
        shifted = Jet([0.0] + inner.c[1 : n + 1] + [0.0] * max(0, n - inner.order))
        out = Jet.const(self.c[n], n)
        for k in range(n - 1, -1, -1):
            out = out * shifted + self.c[k]
        return out

    def __repr__(self):
        return f"Jet({self.c})"


def _scalar_exp(x):
    if isinstance(x, complex):
        import cmath

        return cmath.exp(x)
    return math.exp(x)


def sqrt(x):
    """Square root that dispatches on jets, else defers to numpy."""
    if isinstance(x, Jet):
        return x.sqrt()
    import numpy as np

    return np.sqrt(x)


def d1(f, x: float, order: int = 1):
    """First derivative of a jet-compatible callable at x."""
    return f(Jet.var(x, order)).derivative(1)


def dk(f, x: float, k: int):
    """k-th derivative of a jet-compatible callable at x."""
    return f(Jet.var(x, k)).derivative(k)
