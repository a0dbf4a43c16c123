"""Truncated generators and their eigenstructure.

An :class:`OperatorMatrix` is a dense ``N x N`` truncation of a group
generator. A :class:`Spectrum` lists its Jordan chains
``(A - lambda) phi_j = phi_{j-1}`` together with the strip half-width
``alpha`` that contains every eigenvalue. Chains are never extracted
automatically from a matrix: they come from a file or from one of the
corpus generators below, and :func:`verify_chains` checks them.

Spectrum file format (JSON; complex numbers are ``[re, im]`` pairs)::

    {"dim": N, "alpha": a, "omega0": w,
     "chains": [{"lambda": [re, im], "vectors": [[[re, im], ...], ...]}, ...]}

Operator file format::

    {"dim": N, "entries": [[[re, im], ...], ...]}
"""

import json
from dataclasses import dataclass, field

import numpy as np

from ._validation import as_complex, check_square_matrix, readonly
from .exceptions import ConditioningError, SpectrumError

UNIT_TOL = 1e-12
RENORMALIZE_TOL = 1e-6


@dataclass(frozen=True)
class OperatorMatrix:
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", readonly(check_square_matrix(self.entries, "operator")))

    @property
    def dim(self):
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


@dataclass(frozen=True)
class EigenChain:
    """Eigenvalue with its chain ``phi_0, ..., phi_j`` stored as rows of ``vectors``."""

    eigenvalue: complex
    vectors: np.ndarray

    def __post_init__(self):
        lam = as_complex(self.eigenvalue, "eigenvalue")
        vecs = np.atleast_2d(np.asarray(self.vectors, dtype=complex))
        if vecs.ndim != 2 or vecs.shape[0] == 0:
            raise SpectrumError(f"chain vectors must be a nonempty 2-d array, got shape {vecs.shape}")
        if not np.all(np.isfinite(vecs)):
            raise SpectrumError("chain vectors contain non-finite entries")
        norm0 = np.linalg.norm(vecs[0])
        if abs(norm0 - 1.0) > UNIT_TOL:
            raise SpectrumError(f"non-unit eigenvector (norm {norm0:.17g})")
        object.__setattr__(self, "eigenvalue", lam)
        object.__setattr__(self, "vectors", readonly(vecs))

    def __len__(self):
        return self.vectors.shape[0]

    @property
    def dim(self):
        return self.vectors.shape[1]


@dataclass(frozen=True)
class Spectrum:
    dim: int
    alpha: float
    omega0: float = 0.0
    chains: tuple = field(default_factory=tuple)

    def __post_init__(self):
        dim = int(self.dim)
        alpha = float(self.alpha)
        omega0 = float(self.omega0)
        if dim < 1:
            raise SpectrumError(f"dim must be positive, got {dim}")
        if not (np.isfinite(alpha) and alpha > 0):
            raise SpectrumError(f"alpha must be positive, got {alpha}")
        if not (np.isfinite(omega0) and omega0 >= 0):
            raise SpectrumError(f"omega0 must be nonnegative, got {omega0}")
        chains = tuple(self.chains)
        total = 0
        for k, ch in enumerate(chains):
            if not isinstance(ch, EigenChain):
                raise SpectrumError("expected an EigenChain", chain=k)
            if ch.dim != dim:
                raise SpectrumError(f"vector length {ch.dim} != dim {dim}", chain=k)
            if not abs(ch.eigenvalue.real) < alpha:
                raise SpectrumError(
                    f"eigenvalue outside strip (|Re| = {abs(ch.eigenvalue.real):g} >= alpha = {alpha:g})",
                    chain=k)
            total += len(ch)
        if total > dim:
            raise SpectrumError(f"total chain length {total} exceeds dim {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "omega0", omega0)
        object.__setattr__(self, "chains", chains)

    @property
    def eigenvalues(self):
        """One eigenvalue per chain."""
        return np.array([ch.eigenvalue for ch in self.chains], dtype=complex)

    def multiset(self):
        """Eigenvalues counted with algebraic multiplicity.

        Returns
        -------
        values : ndarray of complex
            Each chain's eigenvalue repeated ``len(chain)`` times.
        owner : ndarray of int
            Index of the chain each entry comes from.
        """
        values, owner = [], []
        for k, ch in enumerate(self.chains):
            values.extend([ch.eigenvalue] * len(ch))
            owner.extend([k] * len(ch))
        return np.array(values, dtype=complex), np.array(owner, dtype=int)

    def chain_matrix(self):
        """All chain vectors as the columns of one ``N x sum(len)`` matrix."""
        if not self.chains:
            return np.zeros((self.dim, 0), dtype=complex)
        return np.concatenate([ch.vectors for ch in self.chains], axis=0).T

    def chain_slices(self):
        out, start = [], 0
        for ch in self.chains:
            out.append(slice(start, start + len(ch)))
            start += len(ch)
        return out

    def is_simple(self):
        return all(len(ch) == 1 for ch in self.chains)

    def sorted(self):
        order = sorted(range(len(self.chains)),
                       key=lambda k: (self.chains[k].eigenvalue.imag, self.chains[k].eigenvalue.real))
        return Spectrum(self.dim, self.alpha, self.omega0, tuple(self.chains[k] for k in order))


# ---------------------------------------------------------------- file I/O

def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def _unpair(p, what):
    try:
        return as_complex(p, what)
    except (TypeError, ValueError) as exc:
        raise SpectrumError(f"bad complex number for {what}: {p!r}") from exc


def _dumps(obj):
    return (json.dumps(obj, separators=(",", ":"), allow_nan=False) + "\n").encode()


def load_spectrum(content):
    """Parse and validate spectrum-file content (``bytes`` or ``str``).

    A leading eigenvector whose norm is within ``1e-6`` of one is
    renormalized; anything further off is rejected as a modelling error.
    """
    try:
        data = json.loads(content)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SpectrumError(f"cannot parse spectrum file: {exc}") from exc
    if not isinstance(data, dict):
        raise SpectrumError("spectrum file must hold a JSON object")
    for key in ("dim", "alpha", "chains"):
        if key not in data:
            raise SpectrumError(f"spectrum file lacks '{key}'")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise SpectrumError(f"dim must be an integer, got {dim!r}")
    chains = []
    for k, raw in enumerate(data["chains"]):
        try:
            lam = _unpair(raw["lambda"], "lambda")
            vecs = np.array([[_unpair(c, "vector entry") for c in v] for v in raw["vectors"]],
                            dtype=complex)
        except (KeyError, TypeError) as exc:
            raise SpectrumError(f"malformed chain entry: {exc}", chain=k) from exc
        if vecs.ndim != 2 or vecs.shape[0] == 0:
            raise SpectrumError("chain needs at least one vector", chain=k)
        norm0 = np.linalg.norm(vecs[0])
        if abs(norm0 - 1.0) > RENORMALIZE_TOL:
            raise SpectrumError(f"non-unit eigenvector (norm {norm0:.6g})", chain=k)
        if abs(norm0 - 1.0) > UNIT_TOL:
            vecs[0] = vecs[0] / norm0
        try:
            chains.append(EigenChain(lam, vecs))
        except SpectrumError as exc:
            raise SpectrumError(str(exc), chain=k) from exc
    return Spectrum(dim, data["alpha"], data.get("omega0", 0.0), tuple(chains))


def emit_spectrum(spectrum):
    """Serialize a spectrum; chains are sorted by ``(Im, Re)`` of the eigenvalue."""
    s = spectrum.sorted()
    obj = {
        "dim": s.dim,
        "alpha": s.alpha,
        "omega0": s.omega0,
        "chains": [
            {"lambda": _pair(ch.eigenvalue), "vectors": [[_pair(c) for c in v] for v in ch.vectors]}
            for ch in s.chains
        ],
    }
    return _dumps(obj)


def load_operator(content):
    try:
        data = json.loads(content)
        entries = np.array([[_unpair(c, "entry") for c in row] for row in data["entries"]],
                           dtype=complex)
    except (json.JSONDecodeError, KeyError, TypeError, UnicodeDecodeError) as exc:
        raise SpectrumError(f"cannot parse operator file: {exc}") from exc
    if entries.ndim != 2 or data.get("dim", entries.shape[0]) != entries.shape[0]:
        raise SpectrumError("operator dim does not match entries")
    return OperatorMatrix(entries)


def emit_operator(op):
    return _dumps({"dim": op.dim, "entries": [[_pair(c) for c in row] for row in op.entries]})


# ------------------------------------------------------------ corpus

def _upper_triangular_eigvec(a, b, d):
    """Unit eigenvector of ``[[a, b], [0, d]]`` for the eigenvalue ``d``."""
    v = np.array([b, d - a], dtype=complex)
    return v / np.linalg.norm(v)


def example_counterexample(k_max, alpha=1.0, k_min=1):
    """Block-diagonal generator with blocks ``[[k i, 1], [0, (k + 1/k) i]]``.

    Eigenvectors are solved from each 2x2 block: ``e_{2k-1}`` for ``k i``
    and ``(k e_{2k-1} + i e_{2k}) / sqrt(k^2 + 1)`` for ``(k + 1/k) i``.
    The gap between the two eigenvalues of block ``k`` is ``1/k`` while the
    angle between the eigenvectors closes, so the eigenvectors are not a
    Riesz basis although the blocks themselves are orthogonal.

    Blocks ``k = k_min .. k_max`` are included. With ``k_min <= 2`` the
    eigenvalue ``2i`` occurs in blocks 1 and 2; ``k_min = 3`` gives a
    spectrum whose clusters coincide with the blocks.
    """
    k_max, k_min = int(k_max), int(k_min)
    if k_min < 1 or k_max < k_min:
        raise ValueError(f"need 1 <= k_min <= k_max, got k_min={k_min}, k_max={k_max}")
    n = 2 * (k_max - k_min + 1)
    a = np.zeros((n, n), dtype=complex)
    chains = []
    for k in range(k_min, k_max + 1):
        lo = 2 * (k - k_min)
        hi = lo + 1
        lam1, lam2 = k * 1j, (k + 1.0 / k) * 1j
        a[lo, lo], a[lo, hi], a[hi, hi] = lam1, 1.0, lam2
        v1 = np.zeros(n, dtype=complex)
        v1[lo] = 1.0
        v2 = np.zeros(n, dtype=complex)
        v2[lo:hi + 1] = _upper_triangular_eigvec(lam1, 1.0, lam2)
        chains += [EigenChain(lam1, v1[None]), EigenChain(lam2, v2[None])]
    return OperatorMatrix(a), Spectrum(n, alpha, 0.0, tuple(chains)).sorted()


def example_perturbed_skew(n, gap, eps, seed, alpha=1.0, max_condition=10.0):
    """Diagonalizable generator ``V diag(i gap k) V^{-1}``, ``k = 1..n``.

    ``V = I + eps R`` with a seeded complex Gaussian ``R`` of unit spectral
    norm, followed by column normalization so the columns of ``V`` are the
    unit eigenvectors.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not gap > 0:
        raise ValueError(f"gap must be positive, got {gap}")
    rng = np.random.default_rng(seed)
    r = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    r /= np.linalg.norm(r, 2)
    v = np.eye(n) + eps * r
    norms = np.linalg.norm(v, axis=0)
    if np.any(norms == 0):
        raise ConditioningError("perturbation annihilates a column", np.inf)
    v = v / norms
    cond = np.linalg.cond(v)
    if not cond <= max_condition:
        raise ConditioningError(
            f"eps={eps} gives cond(V) = {cond:.4g} > {max_condition}", cond)
    lam = 1j * gap * np.arange(1, n + 1)
    a = (v * lam) @ np.linalg.inv(v)
    chains = tuple(EigenChain(lam[k], v[:, k][None]) for k in range(n))
    return OperatorMatrix(a), Spectrum(n, alpha, 0.0, chains)


def example_jordan(blocks, alpha=1.0):
    """Direct sum of Jordan blocks; ``blocks`` is a list of ``(eigenvalue, size)``."""
    sizes = [int(s) for _, s in blocks]
    n = sum(sizes)
    a = np.zeros((n, n), dtype=complex)
    chains, start = [], 0
    for (lam, size) in blocks:
        lam = complex(lam)
        idx = range(start, start + size)
        for i in idx:
            a[i, i] = lam
            if i + 1 < start + size:
                a[i, i + 1] = 1.0
        vecs = np.zeros((size, n), dtype=complex)
        for j, i in enumerate(idx):
            vecs[j, i] = 1.0
        chains.append(EigenChain(lam, vecs))
        start += size
    return OperatorMatrix(a), Spectrum(n, alpha, 0.0, tuple(chains))


def conjugate(a, spectrum, v):
    """Similar pair ``(V A V^{-1}, V phi)``.

    Each chain is mapped by ``V`` and rescaled as a whole so its first vector
    has unit norm again; a common scale keeps the chain relations intact.
    """
    a = check_square_matrix(a, "operator")
    v = check_square_matrix(v, "V")
    if v.shape != a.shape:
        raise SpectrumError(f"V has shape {v.shape}, operator {a.shape}")
    cond = np.linalg.cond(v)
    if not cond < 1e12:
        raise ConditioningError(f"V is numerically singular (condition {cond:.3g})", cond)
    chains = []
    for ch in spectrum.chains:
        w = ch.vectors @ v.T
        chains.append(EigenChain(ch.eigenvalue, w / np.linalg.norm(w[0])))
    b = np.linalg.solve(v.T, (v @ a).T).T
    return OperatorMatrix(b), Spectrum(spectrum.dim, spectrum.alpha, spectrum.omega0, tuple(chains))


# ------------------------------------------------------------ verification

@dataclass(frozen=True)
class ChainReport:
    residuals: tuple  # (chain index, vector index, residual norm)
    max_residual: float
    worst: tuple
    tol: float

    @property
    def passed(self):
        return self.max_residual <= self.tol


def verify_chains(a, spectrum, tol=1e-8):
    """Residuals ``||(A - lambda) phi_0||`` and ``||(A - lambda) phi_j - phi_{j-1}||``."""
    a = check_square_matrix(a, "operator")
    if a.shape[0] != spectrum.dim:
        raise SpectrumError(f"operator dim {a.shape[0]} != spectrum dim {spectrum.dim}")
    residuals = []
    for k, ch in enumerate(spectrum.chains):
        shifted = a - ch.eigenvalue * np.eye(a.shape[0])
        for j, v in enumerate(ch.vectors):
            r = shifted @ v
            if j > 0:
                r = r - ch.vectors[j - 1]
            residuals.append((k, j, float(np.linalg.norm(r))))
    if residuals:
        worst = max(residuals, key=lambda t: t[2])
    else:
        worst = (-1, -1, 0.0)
    return ChainReport(tuple(residuals), worst[2], worst[:2], float(tol))
