"""Dense linear-algebra kernels.

One-sided Jacobi singular values, batched power-iteration spectral norms and
a pivoted Cholesky semidefiniteness test. These are small, dependency-free
routines; the test-suite cross-checks each against LAPACK.
"""

import logging

import numpy as np

from .exceptions import ConvergenceError

logger = logging.getLogger(__name__)


def jacobi_singular_values(a, tol=1e-12, max_sweeps=60):
    """Singular values of a complex matrix by one-sided (Hestenes) Jacobi.

    Columns are rotated pairwise until every pair is orthogonal to relative
    precision ``tol``; the singular values are then the column norms. Each
    sweep only visits pairs whose cosine exceeded ``tol`` at the start of
    the sweep, which makes block-diagonal inputs cheap.

    Parameters
    ----------
    a : array_like, shape (m, n)
    tol : float
        Relative orthogonality threshold. Singular values are accurate to
        roughly ``tol**2`` relative.
    max_sweeps : int

    Returns
    -------
    ndarray
        The ``min(m, n)`` singular values in descending order.
    """
    a = np.array(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {a.shape}")
    m, n = a.shape
    if m < n:
        a = a.conj().T
        m, n = n, m
    if n == 0:
        return np.zeros(0)
    scale = np.abs(a).max()
    if scale == 0:
        return np.zeros(n)
    a = a / scale

    for sweep in range(max_sweeps):
        gram = a.conj().T @ a
        norms = np.sqrt(np.abs(np.real(np.diag(gram))))
        denom = np.outer(norms, norms)
        with np.errstate(divide="ignore", invalid="ignore"):
            cosines = np.where(denom > 0, np.abs(gram) / denom, 0.0)
        p_idx, q_idx = np.nonzero(np.triu(cosines > tol, k=1))
        if p_idx.size == 0:
            break
        for p, q in zip(p_idx.tolist(), q_idx.tolist()):
            ap = a[:, p].copy()
            aq = a[:, q].copy()
            alpha = np.vdot(ap, ap).real
            beta = np.vdot(aq, aq).real
            gamma = np.vdot(ap, aq)
            g = abs(gamma)
            if g <= tol * np.sqrt(alpha * beta) or g == 0.0:
                continue
            phase = gamma / g
            zeta = (beta - alpha) / (2.0 * g)
            t = np.copysign(1.0, zeta) / (abs(zeta) + np.hypot(1.0, zeta))
            c = 1.0 / np.hypot(1.0, t)
            s = c * t
            aq_rot = aq * np.conj(phase)
            a[:, p] = c * ap - s * aq_rot
            a[:, q] = s * ap + c * aq_rot
    else:
        raise ConvergenceError(f"one-sided Jacobi did not converge in {max_sweeps} sweeps")

    sv = np.linalg.norm(a, axis=0) * scale
    return np.sort(sv)[::-1]


def spectral_norm(matrices, rtol=1e-10, max_iter=10_000, seed=0):
    """Spectral norms of one or a stack of square matrices.

    Power iteration on ``P^H P`` run on the whole batch at once. A matrix
    that has not converged after ``max_iter`` iterations is reported in the
    log and its norm recomputed with :func:`jacobi_singular_values`.

    Parameters
    ----------
    matrices : array_like, shape (n, n) or (b, n, n)
    rtol : float
        Relative change of the Rayleigh quotient that counts as converged.
    max_iter : int
    seed : int
        Seed of the (fixed) start vector.

    Returns
    -------
    float or ndarray of shape (b,)
    """
    mats = np.asarray(matrices, dtype=complex)
    single = mats.ndim == 2
    if single:
        mats = mats[None]
    b, n, _ = mats.shape
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x = np.broadcast_to(x / np.linalg.norm(x), (b, n)).copy()

    result = np.zeros(b)
    active = np.arange(b)
    prev = np.full(b, -1.0)
    for _ in range(max_iter):
        if active.size == 0:
            break
        m = mats[active]
        y = np.einsum("bij,bj->bi", m, x[active])
        lam = np.einsum("bi,bi->b", y.conj(), y).real
        z = np.einsum("bji,bj->bi", m.conj(), y)
        znorm = np.linalg.norm(z, axis=1)
        zero = znorm == 0
        znorm[zero] = 1.0
        x[active] = z / znorm[:, None]
        done = zero | (np.abs(lam - prev[active]) <= rtol * np.maximum(lam, 1e-300))
        result[active[done]] = lam[done]
        prev[active] = lam
        active = active[~done]
    if active.size:
        logger.warning("power iteration hit the cap of %d iterations for %d matrices; "
                       "falling back to Jacobi SVD", max_iter, active.size)
        for k in active:
            result[k] = jacobi_singular_values(mats[k])[0] ** 2
    norms = np.sqrt(np.maximum(result, 0.0))
    return float(norms[0]) if single else norms


def is_psd(h, rtol=1e-12):
    """Positive-semidefiniteness test by diagonally pivoted Cholesky.

    The factorization stops once every remaining diagonal entry is within
    ``rtol * trace`` of zero; the matrix is declared PSD if no pivot went
    below ``-rtol * trace`` and the leftover Schur complement is negligible.
    """
    h = np.array(h, dtype=complex)
    n = h.shape[0]
    scale = max(float(np.abs(np.real(np.trace(h)))), float(np.abs(h).max()), 1e-300)
    tol = rtol * scale
    for k in range(n):
        diag = np.real(np.diag(h)[k:])
        j = k + int(np.argmax(diag))
        pivot = diag[j - k]
        if pivot < -tol:
            return False
        if pivot <= tol:
            rest = h[k:, k:]
            return bool(np.abs(rest).max() <= tol) and bool(np.real(np.diag(rest)).min() >= -tol)
        if j != k:
            h[[k, j]] = h[[j, k]]
            h[:, [k, j]] = h[:, [j, k]]
        col = h[k + 1:, k] / pivot
        h[k + 1:, k + 1:] -= np.outer(col, h[k, k + 1:])
    return True
