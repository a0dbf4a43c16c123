"""Right half-plane primitives: shift, Blaschke products, separation."""

import numpy as np

from ._validation import check_complex_vector, check_positive
from .exceptions import PoleError
from .functions import RationalExpression

POLE_GUARD = 1e-12


def shift_to_halfplane(lambdas, alpha):
    """Map strip eigenvalues ``|Re lambda| < alpha`` to ``mu = lambda + alpha``."""
    lam = check_complex_vector(lambdas, "lambdas")
    alpha = check_positive(alpha, "alpha")
    bad = np.nonzero(~(np.abs(lam.real) < alpha))[0]
    if bad.size:
        raise ValueError(f"lambda[{bad[0]}] = {lam[bad[0]]} lies outside the strip |Re| < {alpha}")
    return lam + alpha


class BlaschkeProduct(RationalExpression):
    """Finite product of factors ``(s - mu) / (s + conj(mu))`` with ``Re mu > 0``.

    Parameters
    ----------
    zeros : array_like of complex
    allow_repeated : bool
        Repeated zeros encode higher-order factors and must be requested
        explicitly.
    """

    def __init__(self, zeros, allow_repeated=False):
        z = check_complex_vector(zeros, "zeros")
        if np.any(z.real <= 0):
            raise ValueError("Blaschke zeros must lie in the open right half-plane")
        if not allow_repeated and z.size > 1:
            d = np.abs(z[:, None] - z[None, :])
            d[np.diag_indices_from(d)] = np.inf
            if d.min() == 0:
                raise ValueError("repeated Blaschke zeros; pass allow_repeated=True")
        self.zeros = z
        self.allow_repeated = allow_repeated

    def _guard(self, s):
        if self.zeros.size == 0:
            return
        poles = -np.conj(self.zeros)
        d = np.abs(np.asarray(s, dtype=complex)[..., None] - poles)
        if np.any(d <= POLE_GUARD):
            raise PoleError("evaluation within 1e-12 of a Blaschke pole")

    def _expr(self, z):
        out = 1.0 + 0.0 * z
        for mu in self.zeros:
            out = out * ((z - mu) / (z + np.conj(mu)))
        return out

    def derivative(self, s, order=0):
        self._guard(s)
        return super().derivative(s, order)

    def limit_at_infinity(self):
        return 1.0

    def jet(self, s):
        self._guard(s)
        return super().jet(s)


def blaschke_eval(b, s):
    return b(s)


def blaschke_deriv(b, s, order=1):
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    return b.derivative(s, order)


def separation(zeros):
    """Euclidean and pseudo-hyperbolic separation of a finite sequence.

    Returns
    -------
    euclidean : float
        ``min |mu_n - mu_m|``.
    pseudo_hyperbolic : float
        ``min_n prod_{m != n} |(mu_n - mu_m) / (mu_n + conj(mu_m))|``, the
        finite Carleson constant.
    """
    mu = check_complex_vector(zeros, "zeros")
    if mu.size < 2:
        raise ValueError(f"separation needs at least 2 points, got {mu.size}")
    if np.any(mu.real <= 0):
        raise ValueError("points must lie in the open right half-plane")
    diff = mu[:, None] - mu[None, :]
    euclid = np.abs(diff)
    euclid[np.diag_indices_from(euclid)] = np.inf
    rho = np.abs(diff / (mu[:, None] + np.conj(mu)[None, :]))
    rho[np.diag_indices_from(rho)] = 1.0
    return float(euclid.min()), float(np.prod(rho, axis=1).min())
