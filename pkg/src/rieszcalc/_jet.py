"""Second-order Taylor jets.

A :class:`Jet` carries ``(f, f', f'')`` of an analytic function at one or
more points. Rational expressions built from ``Jet.variable(s)`` with ``+``,
``-``, ``*`` and ``/`` therefore produce exact first and second derivatives,
with no finite differencing. Code that only needs values can run the same
expression on plain complex arrays.
"""

import numpy as np

MAX_ORDER = 2


class Jet:
    __slots__ = ("v", "d1", "d2")
    # numpy scalars must defer to the reflected operators below
    __array_ufunc__ = None

    def __init__(self, v, d1=0.0, d2=0.0):
        self.v = np.asarray(v, dtype=complex)
        self.d1 = np.asarray(d1, dtype=complex)
        self.d2 = np.asarray(d2, dtype=complex)

    @classmethod
    def variable(cls, s):
        s = np.asarray(s, dtype=complex)
        return cls(s, np.ones_like(s), np.zeros_like(s))

    @classmethod
    def constant(cls, c):
        return cls(c, 0.0, 0.0)

    def derivative(self, order):
        if order == 0:
            return self.v
        if order == 1:
            return self.d1
        if order == 2:
            return self.d2
        raise ValueError(f"jets carry derivatives up to order {MAX_ORDER}, got {order}")

    def __neg__(self):
        return Jet(-self.v, -self.d1, -self.d2)

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.v + other.v, self.d1 + other.d1, self.d2 + other.d2)
        return Jet(self.v + other, self.d1, self.d2)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return Jet(
                self.v * other.v,
                self.d1 * other.v + self.v * other.d1,
                self.d2 * other.v + 2 * self.d1 * other.d1 + self.v * other.d2,
            )
        return Jet(self.v * other, self.d1 * other, self.d2 * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.v / other, self.d1 / other, self.d2 / other)
        h = self.v / other.v
        h1 = (self.d1 - h * other.d1) / other.v
        h2 = (self.d2 - 2 * h1 * other.d1 - h * other.d2) / other.v
        return Jet(h, h1, h2)

    def __rtruediv__(self, other):
        return Jet.constant(other) / self
