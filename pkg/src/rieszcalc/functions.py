"""Analytic function handles with derivatives.

The functional calculus needs ``f`` and, on Jordan chains, its derivatives
at the eigenvalues. Every handle here exposes ``f(s)`` and
``f.derivative(s, order)``; ``max_order`` is ``None`` when any order is
available.
"""

from math import factorial

import numpy as np

from ._jet import Jet, MAX_ORDER


class AnalyticFunction:
    max_order = None

    def __call__(self, s):
        return self.derivative(s, 0)

    def limit_at_infinity(self):
        """Common limit as ``|Im s| -> inf`` inside the strip, or ``None``."""
        return None

    def derivative(self, s, order):
        raise NotImplementedError

    def _check_order(self, order):
        if order < 0:
            raise ValueError(f"derivative order must be >= 0, got {order}")
        if self.max_order is not None and order > self.max_order:
            raise ValueError(f"{type(self).__name__} provides derivatives up to order "
                             f"{self.max_order}, got {order}")


class RationalExpression(AnalyticFunction):
    """Base for functions written as one rational expression in ``z``.

    Subclasses implement ``_expr(z)`` using only ``+ - * /``; derivatives
    up to second order come from evaluating it on a :class:`Jet`.
    """

    max_order = MAX_ORDER

    def _expr(self, z):
        raise NotImplementedError

    def derivative(self, s, order=0):
        self._check_order(order)
        s = np.asarray(s, dtype=complex)
        if order == 0:
            return self._expr(s)
        return self._expr(Jet.variable(s)).derivative(order)

    def jet(self, s):
        return self._expr(Jet.variable(np.asarray(s, dtype=complex)))


class Constant(AnalyticFunction):
    def __init__(self, value):
        self.value = complex(value)

    def derivative(self, s, order=0):
        self._check_order(order)
        s = np.asarray(s, dtype=complex)
        return np.full(s.shape, self.value if order == 0 else 0.0, dtype=complex)

    def limit_at_infinity(self):
        return self.value


class Polynomial(AnalyticFunction):
    """Polynomial with coefficients in increasing degree."""

    def __init__(self, coeffs):
        self.coeffs = np.atleast_1d(np.asarray(coeffs, dtype=complex))

    def derivative(self, s, order=0):
        self._check_order(order)
        c = np.polynomial.polynomial.polyder(self.coeffs, order) if order else self.coeffs
        return np.polynomial.polynomial.polyval(np.asarray(s, dtype=complex), c)

    def __mul__(self, other):
        return Polynomial(np.polynomial.polynomial.polymul(self.coeffs, other.coeffs))


class Resolvent(AnalyticFunction):
    """``s -> 1 / (lam - s)``; its calculus image is ``(lam I - A)^{-1}``."""

    def __init__(self, lam):
        self.lam = complex(lam)

    def derivative(self, s, order=0):
        self._check_order(order)
        s = np.asarray(s, dtype=complex)
        return factorial(order) / (self.lam - s) ** (order + 1)

    def limit_at_infinity(self):
        return 0.0


class StripFunction(AnalyticFunction):
    """A half-plane function pulled back to the strip: ``f(s) = g(s + alpha)``."""

    def __init__(self, underlying, alpha):
        self.underlying = underlying
        self.alpha = float(alpha)
        self.max_order = getattr(underlying, "max_order", None)

    def derivative(self, s, order=0):
        return self.underlying.derivative(np.asarray(s, dtype=complex) + self.alpha, order)

    def limit_at_infinity(self):
        return self.underlying.limit_at_infinity()


class Indicator(AnalyticFunction):
    """Locally constant function: ``1`` near ``points``, ``0`` elsewhere.

    Only meaningful for the exact calculus, where ``f`` is sampled at the
    eigenvalues alone.
    """

    def __init__(self, points, atol=1e-12):
        self.points = np.atleast_1d(np.asarray(points, dtype=complex))
        self.atol = atol

    def derivative(self, s, order=0):
        self._check_order(order)
        s = np.asarray(s, dtype=complex)
        if order > 0:
            return np.zeros(s.shape, dtype=complex)
        if self.points.size == 0:
            return np.zeros(s.shape, dtype=complex)
        hit = np.abs(s[..., None] - self.points).min(axis=-1) <= self.atol
        return hit.astype(complex)
