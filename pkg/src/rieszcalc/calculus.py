"""Bounded functional calculus of a group generator on a strip.

For ``f`` bounded and analytic on ``|Re s| < alpha`` the calculus is

    f(A) = 1/(2 pi i) int_Gamma f(z) / (z^2 - omega^2) (zI - A)^{-1} dz (A^2 - omega^2)

with ``Gamma`` the two vertical lines ``Re z = -omega1`` (downwards) and
``Re z = omega1`` (upwards), ``max |Re lambda| < omega1 < alpha < omega``.
:class:`ContourCalculus` truncates the lines to ``|Im z| <= R`` and applies
composite Gauss-Legendre panels. :func:`fcalc_exact` is the independent
oracle: it acts on each Jordan chain by the Taylor coefficients of ``f``.
"""

import functools
from dataclasses import dataclass
from math import factorial

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_positive, check_square_matrix
from .exceptions import ContourError, PoleError, SpanError
from .functions import Resolvent

SPAN_COND_LIMIT = 1e12
EIGEN_CLEARANCE = 1e-8


def resolvent(a, z):
    """``(zI - A)^{-1}`` by dense LU, with a residual check."""
    a = check_square_matrix(a, "operator")
    m = complex(z) * np.eye(a.shape[0]) - a
    try:
        x = np.linalg.solve(m, np.eye(a.shape[0]))
    except np.linalg.LinAlgError as exc:
        raise PoleError(f"z = {z} is an eigenvalue (singular system)") from exc
    resid = np.linalg.norm(m @ x - np.eye(a.shape[0]), 2)
    if not np.all(np.isfinite(x)) or resid > 1e-10 * np.linalg.norm(x, 2):
        raise PoleError(f"z = {z} is numerically an eigenvalue (residual {resid:.3g})")
    return x


def _taylor_block(f, lam, length):
    coeffs = [complex(np.asarray(f.derivative(np.array([lam]), j))[0]) / factorial(j)
              for j in range(length)]
    t = np.zeros((length, length), dtype=complex)
    for j in range(length):
        for m in range(j + 1):
            t[m, j] = coeffs[j - m]
    return t


def _check_span(spectrum):
    phi = spectrum.chain_matrix()
    if phi.shape[1] != spectrum.dim:
        raise SpanError(f"chains hold {phi.shape[1]} vectors in dimension {spectrum.dim}")
    cond = np.linalg.cond(phi)
    if not cond < SPAN_COND_LIMIT:
        raise SpanError(f"chain matrix is numerically singular (condition {cond:.3g})")
    return phi


def fcalc_exact(a, spectrum, f):
    """``f(A)`` assembled from the chains: ``f(A) phi_j = sum_m f^(j-m)(lam)/(j-m)! phi_m``."""
    a = check_square_matrix(a, "operator")
    if a.shape[0] != spectrum.dim:
        raise ValueError(f"operator dim {a.shape[0]} != spectrum dim {spectrum.dim}")
    phi = _check_span(spectrum)
    t = np.zeros_like(phi)
    for ch, sl in zip(spectrum.chains, spectrum.chain_slices()):
        t[sl, sl] = _taylor_block(f, ch.eigenvalue, len(ch))
    return np.linalg.solve(phi.T, (phi @ t).T).T


def chain_square_identity_residual(a, spectrum, omega):
    """Max residual of ``(A^2 - w^2) phi_j = (lam^2 - w^2) phi_j + 2 lam phi_{j-1} + phi_{j-2}``."""
    a = check_square_matrix(a, "operator")
    sq = a @ a - omega ** 2 * np.eye(a.shape[0])
    worst = 0.0
    for ch in spectrum.chains:
        lam, v = ch.eigenvalue, ch.vectors
        for j in range(len(ch)):
            rhs = (lam ** 2 - omega ** 2) * v[j]
            if j >= 1:
                rhs = rhs + 2 * lam * v[j - 1]
            if j >= 2:
                rhs = rhs + v[j - 2]
            worst = max(worst, float(np.linalg.norm(sq @ v[j] - rhs)))
    return worst


TAIL_PANELS = 8


@dataclass(frozen=True)
class ContourSpec:
    """Two-line contour ``Re z = +-omega1``, ``|Im z| <= R``.

    ``tail="truncate"`` drops ``|Im z| > R``; ``tail="map"`` also integrates
    the rest of each line through ``Im z = +-R / v``, ``0 < v <= 1``, on
    ``TAIL_PANELS`` Gauss-Legendre panels, which removes the truncation
    error for functions that are analytic at infinity. ``tail="close"``
    joins the truncated lines by the segments ``Im z = +-R`` into a
    rectangle; by Cauchy's theorem this equals the limit ``R -> inf`` of
    the two lines, including for polynomial ``f`` where the line integrals
    only converge symmetrically.
    """

    omega1: float
    omega: float
    R: float = 200.0
    nodes_per_unit: int = 20
    tail: str = "truncate"

    def __post_init__(self):
        for name in ("omega1", "omega", "R"):
            check_positive(getattr(self, name), name)
        if int(self.nodes_per_unit) < 2:
            raise ValueError("nodes_per_unit must be >= 2")
        if self.tail not in ("truncate", "map", "close"):
            raise ValueError(f"tail must be 'truncate', 'map' or 'close', got {self.tail!r}")

    @classmethod
    def default(cls, spectrum, a=None, R=200.0, nodes_per_unit=20, tail="truncate"):
        """``omega = alpha + 1`` and ``omega1`` halfway between the spectrum and ``alpha``."""
        re_max = _max_abs_re(spectrum, a)
        return cls((re_max + spectrum.alpha) / 2, spectrum.alpha + 1.0, R, nodes_per_unit, tail)

    def validate(self, spectrum, a=None):
        re_max = _max_abs_re(spectrum, a)
        alpha = spectrum.alpha
        if not (re_max < self.omega1 < alpha < self.omega):
            raise ContourError(
                f"need max|Re lambda| < omega1 < alpha < omega, got {re_max:g}, "
                f"{self.omega1:g}, {alpha:g}, {self.omega:g}")
        if not spectrum.omega0 < self.omega1:
            raise ContourError(f"need omega0 < omega1, got {spectrum.omega0:g} >= {self.omega1:g}")
        if self.omega1 - re_max <= EIGEN_CLEARANCE:
            raise ContourError("contour passes within 1e-8 of an eigenvalue")
        im_max = _max_abs_im(spectrum, a)
        if not self.R > im_max + EIGEN_CLEARANCE:
            raise ContourError(f"height R={self.R:g} does not clear the spectrum "
                               f"(max |Im lambda| = {im_max:g})")


def _max_abs_re(spectrum, a=None):
    lam = list(spectrum.eigenvalues)
    if a is not None:
        lam += list(np.linalg.eigvals(check_square_matrix(a, "operator")))
    return float(np.max(np.abs(np.real(lam)))) if lam else 0.0


def _panels(edges, order):
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    return (mid[:, None] + half[:, None] * x[None, :]).ravel(), (half[:, None] * w[None, :]).ravel()


def _max_abs_im(spectrum, a=None):
    lam = list(spectrum.eigenvalues)
    if a is not None:
        lam += list(np.linalg.eigvals(check_square_matrix(a, "operator")))
    return float(np.max(np.abs(np.imag(lam)))) if lam else 0.0


def _line_rule(R, order, tail="truncate"):
    r, wr = _panels(np.linspace(-R, R, int(np.ceil(2 * R)) + 1), order)
    if tail == "map":
        v, wv = _panels(np.linspace(0.0, 1.0, TAIL_PANELS + 1), order)
        rt, wt = R / v, wv * R / v ** 2
        r = np.concatenate([-rt[::-1], r, rt])
        wr = np.concatenate([wt[::-1], wr, wt])
    return r, wr


def _contour_nodes(spec, order, sign):
    """Quadrature nodes ``z`` and complex weights ``dz / (2 pi i)`` for both lines."""
    r, wr = _line_rule(spec.R, order, spec.tail)
    z = np.concatenate([spec.omega1 + 1j * r, -spec.omega1 - 1j * r])
    dz = np.concatenate([1j * wr, -1j * wr])
    if spec.tail == "close":
        x, wx = _panels(np.linspace(-spec.omega1, spec.omega1,
                                    int(np.ceil(2 * spec.omega1)) + 1), order)
        # top edge right to left, bottom edge left to right
        z = np.concatenate([z, x + 1j * spec.R, x - 1j * spec.R])
        dz = np.concatenate([dz, -wx, wx])
    return z, sign * dz / (2j * np.pi)


def _kernel_stack(a, z, weights, omega):
    n = a.shape[0]
    eye = np.eye(n)
    sq = a @ a - omega ** 2 * eye
    shifted = z[:, None, None] * eye[None] - a[None]
    res = np.linalg.solve(shifted, np.broadcast_to(eye, shifted.shape))
    scal = weights / (z ** 2 - omega ** 2)
    return scal[:, None, None] * (res @ sq)


@functools.cache
def orientation_sign():
    """Orientation of the two-line contour, fixed by the resolvent identity.

    With ``A = diag(i, -i)`` the calculus image of ``1 / (3 - s)`` must be
    ``(3I - A)^{-1}``; whichever sign of ``dz`` reproduces it is used
    everywhere.
    """
    a = np.diag([1j, -1j])
    spec = ContourSpec(0.5, 2.0, 50.0, 8)
    z, wts = _contour_nodes(spec, spec.nodes_per_unit, 1.0)
    approx = np.tensordot(Resolvent(3.0)(z), _kernel_stack(a, z, wts, spec.omega), axes=1)
    exact = np.linalg.inv(3.0 * np.eye(2) - a)
    if np.abs(approx - exact).max() < 1e-3:
        return 1.0
    if np.abs(approx + exact).max() < 1e-3:
        return -1.0
    raise RuntimeError("contour orientation calibration failed")


@dataclass
class CalculusResult:
    matrix: np.ndarray
    est_tail_error: float
    est_quadrature_error: float
    sup_f: float
    norm_ratio: float


class ContourCalculus(BaseEstimator):
    """Contour-integral functional calculus for one operator.

    ``fit`` precomputes the quadrature kernels ``w_k (z_k^2 - omega^2)^{-1}
    (z_k I - A)^{-1} (A^2 - omega^2)`` on the full rule and on a half-order
    rule used for the quadrature error estimate. ``apply(f)`` is then a
    weighted sum of kernels, so many functions can share one fit.

    Parameters
    ----------
    omega1, omega : float or None
        Contour abscissa and shift; ``None`` picks the defaults of
        :meth:`ContourSpec.default`.
    height : float
        Truncation ``R`` of the lines.
    density : int
        Gauss-Legendre nodes per unit panel.
    tail : {"truncate", "map", "close"}
        See :class:`ContourSpec`. Outside ``"truncate"`` the tail estimate is
        zero and the half-order comparison covers the extra nodes as well.
    """

    def __init__(self, omega1=None, omega=None, height=200.0, density=20, tail="truncate"):
        self.omega1 = omega1
        self.omega = omega
        self.height = height
        self.density = density
        self.tail = tail

    def fit(self, a, spectrum):
        a = check_square_matrix(a, "operator")
        if a.shape[0] != spectrum.dim:
            raise ValueError(f"operator dim {a.shape[0]} != spectrum dim {spectrum.dim}")
        default = ContourSpec.default(spectrum, a, self.height, self.density)
        spec = ContourSpec(self.omega1 if self.omega1 is not None else default.omega1,
                           self.omega if self.omega is not None else default.omega,
                           self.height, self.density, self.tail)
        spec.validate(spectrum, a)
        sign = orientation_sign()
        self.spec_ = spec
        self.nodes_, w = _contour_nodes(spec, spec.nodes_per_unit, sign)
        self.kernels_ = _kernel_stack(a, self.nodes_, w, spec.omega)
        coarse = max(spec.nodes_per_unit // 2, 1)
        self.coarse_nodes_, wc = _contour_nodes(spec, coarse, sign)
        self.coarse_kernels_ = _kernel_stack(a, self.coarse_nodes_, wc, spec.omega)
        sq_norm = np.linalg.norm(a @ a - spec.omega ** 2 * np.eye(a.shape[0]), 2)
        reach = max(np.linalg.norm(a, 2), spec.omega, spec.omega1)
        if spec.tail != "truncate":
            self.tail_factor_ = 0.0
        else:
            self.tail_factor_ = (sq_norm / (np.pi * (spec.R - reach) ** 2)
                                 if spec.R > reach else np.inf)
        return self

    def apply(self, f, tol=None):
        """``f(A)`` with tail and quadrature error estimates.

        When ``f`` reports a limit ``L`` at infinity the calculus is applied
        to ``f - L`` and ``L I`` added back; constants map to multiples of
        the identity, and the remainder decays fast enough that the
        truncated lines miss little. Raises ``ContourError`` when ``tol``
        is given and the tail estimate exceeds it.
        """
        check_is_fitted(self)
        limit = getattr(f, "limit_at_infinity", lambda: None)()
        limit = 0.0 if limit is None else complex(limit)
        eye = np.eye(self.kernels_.shape[1])
        fz = np.asarray(f(self.nodes_), dtype=complex) - limit
        mat = np.tensordot(fz, self.kernels_, axes=1) + limit * eye
        fc = np.asarray(f(self.coarse_nodes_), dtype=complex) - limit
        coarse = np.tensordot(fc, self.coarse_kernels_, axes=1) + limit * eye
        tail = float(np.abs(fz).max()) * self.tail_factor_
        if tol is not None and tail > tol:
            raise ContourError(f"truncation height R={self.spec_.R} too small: "
                               f"tail estimate {tail:.3g} > {tol:.3g}")
        quad = float(np.abs(mat - coarse).max())
        sup_f = float(np.abs(fz + limit).max())
        ratio = float(np.linalg.norm(mat, 2) / sup_f) if sup_f > 0 else 0.0
        return CalculusResult(mat, tail, quad, sup_f, ratio)

    def apply_many(self, fs):
        """Matrices ``f(A)`` for a list of functions, without error estimates."""
        return np.array([self.apply(f).matrix for f in fs])


def fcalc_contour(a, spectrum, f, spec=None, tol=None):
    """One-shot contour calculus; see :class:`ContourCalculus`."""
    if spec is None:
        spec = ContourSpec.default(spectrum, a)
    calc = ContourCalculus(spec.omega1, spec.omega, spec.R, spec.nodes_per_unit, spec.tail)
    return calc.fit(a, spectrum).apply(f, tol=tol)


@dataclass(frozen=True)
class Lemma21Report:
    """Per-chain residuals of the contour calculus against the Taylor action."""

    residuals: tuple  # (chain index, vector index, residual)
    max_residual: float
    worst_chain: int
    tol: float

    @property
    def passed(self):
        return self.max_residual <= self.tol


def verify_lemma21(a, spectrum, f, spec=None, tol=1e-6, calculus=None):
    """Check ``f(A) phi_j = sum_m f^(j-m)(lam)/(j-m)! phi_m`` with the contour ``f(A)``.

    A fitted :class:`ContourCalculus` may be passed to reuse its kernels.
    """
    if calculus is None:
        mat = fcalc_contour(a, spectrum, f, spec).matrix
    else:
        mat = calculus.apply(f).matrix
    residuals = []
    for k, ch in enumerate(spectrum.chains):
        t = _taylor_block(f, ch.eigenvalue, len(ch))
        v = ch.vectors.T
        diff = mat @ v - v @ t
        for j in range(len(ch)):
            residuals.append((k, j, float(np.linalg.norm(diff[:, j]))))
    worst = max(residuals, key=lambda r: r[2]) if residuals else (-1, -1, 0.0)
    return Lemma21Report(tuple(residuals), worst[2], worst[0], float(tol))
