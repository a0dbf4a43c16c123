"""Independent reference computations used by the tests.

Each oracle avoids the code path it checks: LAPACK instead of the Jacobi
sweeps, eigendecomposition instead of chains, a generalized eigenproblem
instead of bisection, finite differences instead of jets.
"""

import itertools

import numpy as np
import scipy.linalg


def brute_gap(values):
    values = list(values)
    return min(abs(a - b) for a, b in itertools.combinations(values, 2))


def svd_frame_bounds(vectors):
    sv = np.linalg.svd(np.asarray(vectors, dtype=complex).T, compute_uv=False)
    return sv[-1] ** 2, sv[0] ** 2


def pick_cstar(nodes, targets):
    """Smallest c with ``c^2 C - W C W^H`` semidefinite, ``C`` the Cauchy matrix."""
    mu = np.asarray(nodes, dtype=complex)
    a = np.asarray(targets, dtype=complex)
    cauchy = 1.0 / (mu[:, None] + np.conj(mu)[None, :])
    rhs = a[:, None] * cauchy * np.conj(a)[None, :]
    ev = scipy.linalg.eigh(rhs, cauchy, eigvals_only=True)
    return float(np.sqrt(max(ev[-1], 0.0)))


def eig_function(a, f):
    """``V f(D) V^{-1}`` for a diagonalizable matrix."""
    lam, v = np.linalg.eig(np.asarray(a, dtype=complex))
    return (v * f(lam)) @ np.linalg.inv(v)


def central_difference(f, s, h=1e-5, order=1):
    s = np.asarray(s, dtype=complex)
    if order == 1:
        return (f(s + h) - f(s - h)) / (2 * h)
    return (f(s + h) - 2 * f(s) + f(s - h)) / h ** 2


def blaschke_direct(zeros, s):
    out = 1.0 + 0j
    for mu in zeros:
        out *= (s - mu) / (s + np.conj(mu))
    return out


def winding_number(values):
    """Winding number of a closed polyline of complex values around 0."""
    ang = np.unwrap(np.angle(np.append(values, values[0])))
    return int(round((ang[-1] - ang[0]) / (2 * np.pi)))


def oblique_projection(range_vec, null_vec):
    """Projection onto ``span(range_vec)`` along ``span(null_vec)`` in C^2."""
    m = np.column_stack([range_vec, null_vec])
    return m @ np.diag([1.0, 0.0]) @ np.linalg.inv(m)
