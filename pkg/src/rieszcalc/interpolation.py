"""Bounded analytic interpolation on the right half-plane.

Finite Nevanlinna-Pick: for nodes ``mu_k`` with ``Re mu_k > 0`` and targets
``a_k``, a function ``g`` analytic on the half-plane with ``sup |g| <= c``
and ``g(mu_k) = a_k`` exists iff the Pick matrix
``[(c^2 - a_i conj(a_j)) / (mu_i + conj(mu_j))]`` is positive semidefinite.
:func:`np_min_norm` finds the smallest such ``c`` and :func:`np_interpolant`
builds an interpolant by the Schur recursion, peeling one node per step
with half-plane Blaschke factors.

:func:`grouped_interpolant` combines four such interpolants so that points
sharing a ball get the same value and a vanishing derivative:

    g = g1 + B1 g2 + B1^2 g3 + B1^2 B2 g4

where ``B1`` vanishes at the first point of each ball and ``B2`` at the
second one.
"""

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_complex_vector, check_positive
from .exceptions import InfeasibleError, RecursionStepError
from .functions import RationalExpression
from .halfplane import BlaschkeProduct, separation
from .linalg import is_psd

BOUNDARY_TOL = 1e-12
NODE_RESIDUAL_TOL = 1e-8


def _check_problem(nodes, targets):
    mu = check_complex_vector(nodes, "nodes")
    a = check_complex_vector(targets, "targets")
    if mu.size != a.size:
        raise ValueError(f"{mu.size} nodes but {a.size} targets")
    if np.any(mu.real <= 0):
        raise ValueError("interpolation nodes must lie in the open right half-plane")
    if mu.size > 1:
        d = np.abs(mu[:, None] - mu[None, :])
        d[np.diag_indices_from(d)] = np.inf
        if d.min() == 0:
            raise ValueError("interpolation nodes must be pairwise distinct")
    return mu, a


def pick_matrix(nodes, targets, c):
    mu, a = _check_problem(nodes, targets)
    c = float(c)
    return (c * c - a[:, None] * np.conj(a)[None, :]) / (mu[:, None] + np.conj(mu)[None, :])


def np_min_norm(nodes, targets, tol=1e-10):
    """Smallest bound ``c`` admitting an interpolant, by bisection.

    ``c`` is feasible when the Pick matrix passes :func:`linalg.is_psd`.
    The search starts at ``max |a_k|`` (a lower bound for any interpolant)
    and stops when the bracket is below ``tol * max(1, c)``; the upper,
    feasible end is returned.
    """
    mu, a = _check_problem(nodes, targets)
    if mu.size == 0:
        raise ValueError("empty interpolation problem")
    tol = check_positive(tol, "tol")
    lo = float(np.abs(a).max())
    if lo == 0.0:
        return 0.0
    if is_psd(pick_matrix(mu, a, lo)):
        return lo
    hi = 2.0 * lo
    while not is_psd(pick_matrix(mu, a, hi)):
        lo, hi = hi, 2.0 * hi
    while hi - lo > tol * max(1.0, lo):
        mid = 0.5 * (lo + hi)
        if is_psd(pick_matrix(mu, a, mid)):
            hi = mid
        else:
            lo = mid
    return hi


class Interpolant(RationalExpression):
    """Rational Schur-recursion interpolant bounded by ``scale`` on the half-plane.

    With ``u_k = (s - z_k) / (s + conj(z_k))`` the normalized function is
    rebuilt from the innermost term ``tail`` by
    ``f <- (w_k + u_k f) / (1 + conj(w_k) u_k f)`` for ``k = n-1, ..., 0``
    and returned as ``scale * f``.
    """

    def __init__(self, nodes, params, scale, tail=0.0):
        self.nodes = np.asarray(nodes, dtype=complex)
        self.params = np.asarray(params, dtype=complex)
        self.scale = float(scale)
        self.tail = complex(tail)

    @classmethod
    def zero(cls):
        return cls([], [], 0.0, 0.0)

    def _expr(self, z):
        f = 0.0 * z + self.tail
        for zk, wk in zip(self.nodes[::-1], self.params[::-1]):
            uf = (z - zk) / (z + np.conj(zk)) * f
            f = (uf + wk) / (uf * np.conj(wk) + 1.0)
        return f * self.scale

    def limit_at_infinity(self):
        # every Blaschke factor tends to 1
        f = self.tail
        for wk in self.params[::-1]:
            f = (f + wk) / (f * np.conj(wk) + 1.0)
        return complex(f * self.scale)


def np_interpolant(nodes, targets, c):
    """Interpolant of norm at most ``c`` with ``g(nodes[k]) = targets[k]``.

    ``c`` should exceed :func:`np_min_norm` by a small factor (callers in
    this package use 1.2); at the exact minimum the recursion ends in a
    unimodular constant when the data allow it and otherwise fails.

    Raises
    ------
    InfeasibleError
        The Pick matrix at ``c`` is not positive semidefinite.
    RecursionStepError
        A recursion step produced a Schur parameter outside the unit disc,
        which signals numerically coincident nodes.
    """
    mu, a = _check_problem(nodes, targets)
    c = float(c)
    if c < 0 or not np.isfinite(c):
        raise ValueError(f"c must be a nonnegative finite number, got {c}")
    if np.abs(a).max(initial=0.0) == 0.0:
        return Interpolant.zero() if c == 0 else Interpolant([], [], c, 0.0)
    if c == 0 or not is_psd(pick_matrix(mu, a, c)):
        raise InfeasibleError(f"no interpolant with norm <= {c:.12g} (Pick matrix indefinite)")

    z, w = mu.copy(), a / c
    zs, ws, tail = [], [], 0.0
    step = 0
    while z.size:
        w1 = w[0]
        if abs(w1) >= 1.0 - BOUNDARY_TOL:
            if abs(w1) > 1.0 + 1e-9 or np.any(np.abs(w[1:] - w1) > NODE_RESIDUAL_TOL):
                raise RecursionStepError(
                    f"Schur parameter of modulus {abs(w1):.15g} at node {z[0]}", step)
            tail = w1 / abs(w1)
            break
        zs.append(z[0])
        ws.append(w1)
        rest_w, rest_z = w[1:], z[1:]
        num = (rest_w - w1) / (1.0 - np.conj(w1) * rest_w)
        u = (rest_z - z[0]) / (rest_z + np.conj(z[0]))
        w, z = num / u, rest_z
        step += 1

    g = Interpolant(zs, ws, c, tail)
    resid = np.abs(g(mu) - a)
    if resid.max() > NODE_RESIDUAL_TOL * max(1.0, c):
        raise RecursionStepError(
            f"node residual {resid.max():.3g} after construction", int(np.argmax(resid)))
    g.node_residual = float(resid.max())
    return g


class PickInterpolator(BaseEstimator):
    """Estimator front end for Nevanlinna-Pick interpolation.

    Parameters
    ----------
    c_factor : float
        The interpolant is built with bound ``c_factor * c_star``.
    tol : float
        Bisection tolerance of :func:`np_min_norm`.

    Attributes
    ----------
    c_star_ : float
        Minimal feasible bound for the fitted data.
    c_ : float
        Bound actually used.
    interpolant_ : Interpolant
    """

    def __init__(self, c_factor=1.2, tol=1e-10):
        self.c_factor = c_factor
        self.tol = tol

    def fit(self, X, y):
        mu, a = _check_problem(X, y)
        if self.c_factor < 1:
            raise ValueError(f"c_factor must be >= 1, got {self.c_factor}")
        self.c_star_ = np_min_norm(mu, a, self.tol)
        self.c_ = self.c_factor * self.c_star_
        self.interpolant_ = np_interpolant(mu, a, self.c_)
        return self

    def predict(self, X):
        check_is_fitted(self)
        return self.interpolant_(check_complex_vector(X, "X"))

    def derivative(self, X, order=1):
        check_is_fitted(self)
        return self.interpolant_.derivative(check_complex_vector(X, "X"), order)


# ------------------------------------------------------------ grouped

class GroupedInterpolant(RationalExpression):
    def __init__(self, g1, g2, g3, g4, bl1, bl2):
        self.g1, self.g2, self.g3, self.g4 = g1, g2, g3, g4
        self.bl1, self.bl2 = bl1, bl2

    def _expr(self, z):
        b1 = self.bl1._expr(z)
        b1sq = b1 * b1
        return (self.g1._expr(z) + b1 * self.g2._expr(z) + b1sq * self.g3._expr(z)
                + b1sq * self.bl2._expr(z) * self.g4._expr(z))

    def derivative(self, s, order=0):
        self.bl1._guard(s)
        self.bl2._guard(s)
        return super().derivative(s, order)

    def limit_at_infinity(self):
        return sum(g.limit_at_infinity() for g in self.stages)

    @property
    def stages(self):
        return (self.g1, self.g2, self.g3, self.g4)


def _stage(nodes, targets, c_factor):
    if nodes.size == 0:
        return Interpolant.zero(), 0.0
    if not np.all(np.isfinite(targets)):
        raise RecursionStepError("non-finite stage targets (a second point coincides with a "
                                 "zero of the first Blaschke product)", 0)
    c_star = np_min_norm(nodes, targets)
    return np_interpolant(nodes, targets, c_factor * c_star), c_star


@dataclass
class GroupedResult:
    interpolant: GroupedInterpolant
    first: np.ndarray
    second: np.ndarray
    second_balls: np.ndarray
    stage_c_star: tuple
    stage_targets: tuple = field(repr=False)


def ball_representatives(d, shift=0.0, atol=1e-12):
    """First and (distinct) second point of every ball, shifted by ``shift``.

    Returns ``(first, second, second_balls)`` where ``second`` only lists
    the balls in ``second_balls`` that hold a second distinct point.
    """
    pts = np.asarray(d.points, dtype=complex) + shift
    first, second, second_balls = [], [], []
    for n, g in enumerate(d.groups):
        vals = pts[list(g.members)]
        xi = vals[0]
        others = vals[np.abs(vals - xi) > atol * max(1.0, abs(xi))]
        if others.size and np.any(np.abs(others - others[0]) > atol * max(1.0, abs(xi))):
            raise ValueError(f"ball {n} holds more than two distinct points; "
                             "the grouped construction covers two per ball")
        first.append(xi)
        if others.size:
            second.append(others[0])
            second_balls.append(n)
    return (np.array(first, dtype=complex), np.array(second, dtype=complex),
            np.array(second_balls, dtype=int))


def grouped_interpolant(d, targets, c_factor=1.2, shift=0.0):
    """Interpolant with ``g = targets[n]`` and ``g' = 0`` on every point of ball ``n``.

    Parameters
    ----------
    d : Decomposition
        Balls with at most two distinct points each.
    targets : array_like
        One value per ball.
    c_factor : float
        Every stage is built with ``c_factor`` times its minimal norm.
    shift : float
        Added to ``d.points`` before interpolating, so a decomposition of
        strip eigenvalues can be used with ``shift = alpha``.

    Returns
    -------
    GroupedResult
    """
    a = check_complex_vector(targets, "targets")
    if a.size != len(d.groups):
        raise ValueError(f"{len(d.groups)} balls but {a.size} targets")
    if c_factor < 1.1:
        raise ValueError(f"c_factor must be >= 1.1, got {c_factor}")
    xi, gamma, gballs = ball_representatives(d, shift)
    if np.any(xi.real <= 0) or np.any(gamma.real <= 0):
        raise ValueError("ball points must lie in the open right half-plane (check shift)")
    for name, seq in (("first", xi), ("second", gamma)):
        if seq.size > 1 and not separation(seq)[0] > 0:
            raise ValueError(f"{name} points of the balls are not separated")

    bl1 = BlaschkeProduct(xi)
    bl2 = BlaschkeProduct(gamma)

    # values
    g1, c1 = _stage(xi, a, c_factor)
    # flat at the first points
    t2 = -g1.derivative(xi, 1) / bl1.derivative(xi, 1)
    g2, c2 = _stage(xi, t2, c_factor)

    if gamma.size:
        ag = a[gballs]
        b1 = bl1.jet(gamma)
        j1, j2 = g1.jet(gamma), g2.jet(gamma)
        # values at the second points
        t3 = (ag - j1.v - b1.v * j2.v) / b1.v ** 2
        g3, c3 = _stage(gamma, t3, c_factor)
        j3 = g3.jet(gamma)
        # flat at the second points
        slope = (j1.d1 + b1.d1 * j2.v + b1.v * j2.d1
                 + 2 * b1.v * b1.d1 * j3.v + b1.v ** 2 * j3.d1)
        t4 = -slope / (b1.v ** 2 * bl2.derivative(gamma, 1))
        g4, c4 = _stage(gamma, t4, c_factor)
    else:
        t3 = t4 = np.zeros(0, dtype=complex)
        g3, c3 = Interpolant.zero(), 0.0
        g4, c4 = Interpolant.zero(), 0.0

    g = GroupedInterpolant(g1, g2, g3, g4, bl1, bl2)
    return GroupedResult(g, xi, gamma, gballs, (c1, c2, c3, c4), (a, t2, t3, t4))


class GroupedInterpolator(BaseEstimator):
    """Estimator that groups points into balls and flattens the interpolant on each.

    ``fit(X, y)`` takes one target per point; points in the same ball must
    share a target.

    Parameters
    ----------
    merge_dist : float
        Single-linkage merge distance for the ball decomposition (``K = 2``).
    c_factor : float

    Attributes
    ----------
    decomposition_ : Decomposition
    interpolant_ : GroupedInterpolant
    result_ : GroupedResult
    """

    def __init__(self, merge_dist=0.5, c_factor=1.2):
        self.merge_dist = merge_dist
        self.c_factor = c_factor

    def fit(self, X, y):
        from .gaps import decompose

        mu = check_complex_vector(X, "X", min_length=1)
        y = check_complex_vector(y, "y")
        if y.size != mu.size:
            raise ValueError(f"{mu.size} points but {y.size} targets")
        self.decomposition_ = decompose(mu, 2, self.merge_dist)
        ball_targets = []
        for n, g in enumerate(self.decomposition_.groups):
            vals = y[list(g.members)]
            if np.any(vals != vals[0]):
                raise ValueError(f"points in ball {n} have different targets")
            ball_targets.append(vals[0])
        self.result_ = grouped_interpolant(self.decomposition_, ball_targets, self.c_factor)
        self.interpolant_ = self.result_.interpolant
        return self

    def predict(self, X):
        check_is_fitted(self)
        return self.interpolant_(check_complex_vector(X, "X"))

    def derivative(self, X, order=1):
        check_is_fitted(self)
        return self.interpolant_.derivative(check_complex_vector(X, "X"), order)


# ------------------------------------------------------------ diagnostics

def sample_sup(f, nodes, n=1000, margin=1.0):
    """Sampled ``sup |f|`` on the imaginary axis and on interior vertical lines.

    The sample covers the imaginary-part range of ``nodes`` widened by
    ``margin`` plus a logarithmic tail, on the lines ``Re s`` in
    ``{0, min Re nodes / 2, max Re nodes, 2 max Re nodes}``.
    """
    mu = np.atleast_1d(np.asarray(nodes, dtype=complex))
    lo, hi = (mu.imag.min(), mu.imag.max()) if mu.size else (0.0, 0.0)
    per = max(n // 4, 8)
    core = np.linspace(lo - margin, hi + margin, per // 2)
    tail = np.geomspace(1.0, 1e6, per // 4)
    ys = np.concatenate([core, hi + margin + tail, lo - margin - tail])
    re_max = mu.real.max() if mu.size else 1.0
    re_min = mu.real.min() if mu.size else 1.0
    xs = np.array([0.0, re_min / 2, re_max, 2 * re_max])
    s = (xs[:, None] + 1j * ys[None, :]).ravel()
    return float(np.abs(f(s)).max())


def quotient_bound_ratio(f, blaschke, ball, ell=1, grid=40, zero_tol=1e-6):
    """Empirical ratio ``sup |f / B^ell| / sup |f|`` over a polar grid of the ball.

    The designated zero is the zero of ``blaschke`` closest to the ball
    centre; ``f`` must vanish there to order ``ell``. Sample points within
    ``1e-9`` of a zero of ``blaschke`` are skipped.
    """
    if ell not in (1, 2):
        raise ValueError(f"ell must be 1 or 2, got {ell}")
    zeros = blaschke.zeros
    if zeros.size == 0:
        raise ValueError("Blaschke product has no zeros")
    mu = zeros[np.argmin(np.abs(zeros - ball.center))]
    if abs(mu - ball.center) > ball.radius:
        raise ValueError("no zero of the Blaschke product lies in the ball")
    if abs(complex(np.asarray(f(np.array([mu])))[0])) > zero_tol:
        raise ValueError(f"f does not vanish at the designated zero {mu}")
    if ell == 2:
        if hasattr(f, "derivative"):
            df = complex(np.asarray(f.derivative(np.array([mu]), 1))[0])
        else:
            h = 1e-4
            df = complex((f(np.array([mu + h])) - f(np.array([mu - h])))[0] / (2 * h))
        if abs(df) > zero_tol:
            raise ValueError(f"f' does not vanish at the designated zero {mu}")

    radii = ball.radius * (np.arange(grid) + 0.5) / grid
    angles = 2 * np.pi * (np.arange(grid) + 0.5) / grid
    s = (ball.center + radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    s = s[np.abs(s[:, None] - zeros[None, :]).min(axis=1) > 1e-9]
    fv = np.asarray(f(s), dtype=complex)
    sup_f = np.abs(fv).max()
    if sup_f == 0:
        return 0.0
    return float(np.abs(fv / blaschke(s) ** ell).max() / sup_f)
