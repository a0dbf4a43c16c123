"""Riesz bases, Riesz families of projections and the Wermer subset scan.

A basis ``{phi_n}`` is a Riesz basis when
``m sum |c_n|^2 <= ||sum c_n phi_n||^2 <= M sum |c_n|^2``; at finite scale
the sharp ``m, M`` are the extreme squared singular values of the matrix
with the vectors as columns. A family of projections ``{P_n}`` summing to
the identity is a Riesz family when
``m1 ||x||^2 <= sum ||P_n x||^2 <= M1 ||x||^2``, which is equivalent to a
uniform bound ``M2`` on every subset sum ``||sum_{n in J} P_n||``.

Spectral projections are built three ways so each checks the others:

``exact``
    chain assembly ``Phi[:, J] (Phi^{-1})[J, :]``;
``contour``
    Cauchy integrals of the resolvent over circles around each group;
``interpolant``
    a bounded indicator-valued interpolant on the half-plane, pulled back
    to the strip and pushed through :class:`~rieszcalc.calculus.ContourCalculus`.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_square_matrix
from .calculus import ContourCalculus, _check_span
from .exceptions import ContourError, DecompositionError, GapError, SpectrumError
from .functions import StripFunction
from .gaps import decompose, uniform_gap
from .interpolation import Interpolant, grouped_interpolant, np_interpolant, np_min_norm
from .linalg import jacobi_singular_values, spectral_norm
from .spectrum import example_counterexample

logger = logging.getLogger(__name__)

IDEMPOTENCY_TOL = 1e-8
EXHAUSTIVE_LIMIT = 12
# relative accuracy of the interpolant path: stage values are summed with
# magnitudes up to the stage norms
ROUNDOFF = 1e-14


# ------------------------------------------------------------ frames

def frame_bounds(vectors):
    """Sharp lower and upper frame constants of a finite family.

    Parameters
    ----------
    vectors : array_like, shape (n_vectors, N)
        One vector per row.

    Returns
    -------
    m, M : float
        ``sigma_min(Phi)^2`` and ``sigma_max(Phi)^2`` with the vectors as
        the columns of ``Phi``, from one-sided Jacobi. For more vectors
        than dimensions the ``N`` nonzero singular values are used.
    """
    phi = np.asarray(vectors, dtype=complex)
    if phi.ndim == 1:
        phi = phi[None]
    if phi.ndim != 2 or phi.shape[0] == 0:
        raise ValueError("frame_bounds needs a nonempty list of vectors")
    sv = jacobi_singular_values(phi.T)
    return float(sv[-1] ** 2), float(sv[0] ** 2)


# ------------------------------------------------------------ projection families

class ProjectionFamily:
    """Projections ``P_n = U_n W_n^H`` stored by range and co-range factors.

    ``U_n`` and ``W_n`` are ``N x r_n`` with ``W_n^H U_n = I``; the factored
    form keeps large families cheap and makes ranks explicit.

    Parameters
    ----------
    ranges, coranges : sequence of ndarray
    groups : sequence of tuple, optional
        What each projection is indexed by (for instance the chain indices
        of a group); kept for reporting.
    """

    def __init__(self, ranges, coranges, groups=None):
        ranges = [np.atleast_2d(np.asarray(u, dtype=complex)) for u in ranges]
        coranges = [np.atleast_2d(np.asarray(w, dtype=complex)) for w in coranges]
        if not ranges:
            raise ValueError("a projection family needs at least one projection")
        if len(ranges) != len(coranges):
            raise ValueError("ranges and coranges differ in length")
        dim = ranges[0].shape[0]
        for n, (u, w) in enumerate(zip(ranges, coranges)):
            if u.shape != w.shape or u.shape[0] != dim:
                raise ValueError(f"projection {n}: factor shapes {u.shape}, {w.shape} "
                                 f"do not fit dimension {dim}")
            r = u.shape[1]
            defect = (np.linalg.norm(w.conj().T @ u - np.eye(r), 2) * np.linalg.norm(u, 2)
                      * np.linalg.norm(w, 2)) if r else 0.0
            if defect > IDEMPOTENCY_TOL * max(1.0, np.linalg.norm(u, 2) * np.linalg.norm(w, 2)):
                raise ValueError(f"projection {n} is not idempotent (defect {defect:.3g})")
        self.ranges = ranges
        self.coranges = coranges
        self.dim = dim
        self.groups = tuple(groups) if groups is not None else tuple(
            (n,) for n in range(len(ranges)))

    @classmethod
    def from_matrices(cls, projections, rank_tol=1e-10, groups=None):
        """Factor dense projections through their singular vectors."""
        ranges, coranges = [], []
        for n, p in enumerate(projections):
            p = check_square_matrix(p, f"projection {n}")
            if np.linalg.norm(p @ p - p, 2) > IDEMPOTENCY_TOL * max(1.0, np.linalg.norm(p, 2) ** 2):
                raise ValueError(f"projection {n} is not idempotent")
            u, s, vh = np.linalg.svd(p)
            r = int(np.sum(s > rank_tol * max(1.0, s[0] if s.size else 0.0)))
            ranges.append(u[:, :r] * s[:r])
            coranges.append(vh[:r].conj().T)
        return cls(ranges, coranges, groups)

    @classmethod
    def from_spectrum(cls, spectrum, groups):
        """Spectral projections onto the spans of chain groups along the others.

        Parameters
        ----------
        spectrum : Spectrum
            Chains spanning the space.
        groups : sequence of sequence of int
            Chain indices per projection; every chain in exactly one group.
        """
        phi = _check_span(spectrum)
        psi = np.linalg.inv(phi).conj().T
        slices = spectrum.chain_slices()
        seen = sorted(k for g in groups for k in g)
        if seen != list(range(len(spectrum.chains))):
            raise ValueError("every chain must belong to exactly one group")
        ranges, coranges = [], []
        for g in groups:
            cols = np.concatenate([np.arange(len(spectrum.chains[k]))
                                   + slices[k].start for k in g]).astype(int)
            ranges.append(phi[:, cols])
            coranges.append(psi[:, cols])
        return cls(ranges, coranges, [tuple(g) for g in groups])

    def __len__(self):
        return len(self.ranges)

    @property
    def ranks(self):
        return tuple(u.shape[1] for u in self.ranges)

    def projection(self, n):
        return self.ranges[n] @ self.coranges[n].conj().T

    @property
    def projections(self):
        return [self.projection(n) for n in range(len(self))]

    def subset_sum(self, subset):
        subset = list(subset)
        if not subset:
            return np.zeros((self.dim, self.dim), dtype=complex)
        u = np.concatenate([self.ranges[n] for n in subset], axis=1)
        w = np.concatenate([self.coranges[n] for n in subset], axis=1)
        return u @ w.conj().T

    def idempotency_defect(self):
        return max(float(np.linalg.norm(p @ p - p, 2)) for p in self.projections)

    def gram(self):
        """Hermitian ``sum_n P_n^H P_n``."""
        g = np.zeros((self.dim, self.dim), dtype=complex)
        for u, w in zip(self.ranges, self.coranges):
            g += w @ (u.conj().T @ u) @ w.conj().T
        return 0.5 * (g + g.conj().T)

    def identity_defect(self):
        """``||sum_n P_n - I||`` in the spectral norm."""
        return float(np.linalg.norm(self.subset_sum(range(len(self))) - np.eye(self.dim), 2))


def riesz_family_bounds(family):
    """Extreme eigenvalues ``(m1, M1)`` of ``sum_n P_n^H P_n``."""
    ev = np.linalg.eigvalsh(family.gram())
    return max(float(ev[0]), 0.0), max(float(ev[-1]), 0.0)


def block_groups(spectrum, block_size):
    """Group chains whose vectors live in the same coordinate block.

    Chain ``k`` is placed in block ``b`` when all its vectors vanish outside
    coordinates ``b * block_size .. (b + 1) * block_size - 1``. Groups come
    out in block order.
    """
    blocks = {}
    for k, ch in enumerate(spectrum.chains):
        support = np.nonzero(np.any(np.abs(ch.vectors) > 0, axis=0))[0]
        owners = set((support // block_size).tolist())
        if len(owners) != 1:
            raise ValueError(f"chain {k} spans coordinates of blocks {sorted(owners)}")
        blocks.setdefault(owners.pop(), []).append(k)
    return [tuple(blocks[b]) for b in sorted(blocks)]


def chain_groups(spectrum, d):
    """Chain indices per ball of a decomposition of ``spectrum.multiset()``.

    ``d = None`` makes every chain its own group.
    """
    if d is None:
        return [(k,) for k in range(len(spectrum.chains))]
    values, owner = spectrum.multiset()
    pts = np.asarray(d.points, dtype=complex)
    if pts.shape != values.shape or np.abs(pts - values).max(initial=0.0) > 1e-12:
        raise DecompositionError("decomposition points do not match the spectrum multiset")
    labels = d.labels()
    out = []
    for n, g in enumerate(d.groups):
        chains = sorted(set(owner[list(g.members)].tolist()))
        for k in chains:
            if np.any(labels[owner == k] != n):
                raise DecompositionError(f"chain {k} is split between balls")
        out.append(tuple(chains))
    return out


# ------------------------------------------------------------ Wermer scan

def _random_subsets(n, count, rng, seen):
    out, attempts = [], 0
    while len(out) < count and attempts < 20 * count + 100:
        attempts += 1
        mask = rng.random(n) < 0.5
        sub = tuple(np.nonzero(mask)[0].tolist())
        if sub and sub not in seen:
            seen.add(sub)
            out.append(sub)
    return out


def subset_plan(n, budget=4096, seed=0, exhaustive_limit=EXHAUSTIVE_LIMIT):
    """Subsets of ``range(n)`` scanned for the Wermer bound.

    All nonempty subsets in bitmask order when ``n <= exhaustive_limit``;
    otherwise singletons, prefixes, their complements and seeded random
    subsets until ``budget`` subsets are listed.

    Returns
    -------
    subsets : list of tuple
    exhaustive : bool
    """
    if n < 1:
        raise ValueError("need at least one group")
    if n <= exhaustive_limit:
        subsets = [tuple(i for i in range(n) if mask >> i & 1) for mask in range(1, 2 ** n)]
        return subsets, True
    full = set(range(n))
    structured = [(i,) for i in range(n)] + [tuple(range(k + 1)) for k in range(n)]
    structured += [tuple(sorted(full - set(s))) for s in list(structured)]
    seen, subsets = set(), []
    for s in structured:
        if s and s not in seen:
            seen.add(s)
            subsets.append(s)
    subsets += _random_subsets(n, budget - len(subsets), np.random.default_rng(seed), seen)
    return subsets, False


@dataclass
class WermerScan:
    M2: float
    subset: tuple
    exhaustive: bool
    subsets: list = field(repr=False)
    norms: np.ndarray = field(repr=False)


def wermer_scan(family, budget=4096, seed=0, chunk=64):
    """Largest observed ``||sum_{n in J} P_n||`` over :func:`subset_plan`.

    Outside the exhaustive regime the result is a lower bound on the true
    supremum over all subsets.
    """
    subsets, exhaustive = subset_plan(len(family), budget, seed)
    norms = np.empty(len(subsets))
    for start in range(0, len(subsets), chunk):
        batch = subsets[start:start + chunk]
        mats = np.array([family.subset_sum(s) for s in batch])
        norms[start:start + len(batch)] = spectral_norm(mats, seed=seed)
    best = int(np.argmax(norms))
    return WermerScan(float(norms[best]), subsets[best], exhaustive, subsets, norms)


def wermer_bound(family, budget=4096, seed=0):
    """``(M2_observed, argmax subset)``; see :func:`wermer_scan`."""
    scan = wermer_scan(family, budget, seed)
    return scan.M2, scan.subset


# ------------------------------------------------------------ projections

def _ball_geometry(spectrum, groups):
    """Centre and radius of a circle around each group's eigenvalues."""
    eig = spectrum.eigenvalues
    centres, inner = [], []
    for g in groups:
        vals = eig[list(g)]
        c = complex(vals.mean())
        centres.append(c)
        inner.append(float(np.abs(vals - c).max()))
    radii = []
    for n, g in enumerate(groups):
        others = np.array([k for k in range(eig.size) if k not in g], dtype=int)
        if others.size == 0:
            radii.append(inner[n] + 1.0)
            continue
        outer = float(np.abs(eig[others] - centres[n]).min())
        if not outer > inner[n]:
            raise ContourError(f"group {n}: another eigenvalue lies within the group's radius")
        radii.append(0.5 * (inner[n] + outer))
    return centres, radii


def _circle_projection(a, centre, radius, nodes, chunk=64):
    n = a.shape[0]
    eye = np.eye(n)
    theta = 2 * np.pi * np.arange(nodes) / nodes
    w = radius * np.exp(1j * theta)
    out = np.zeros((n, n), dtype=complex)
    for start in range(0, nodes, chunk):
        z = centre + w[start:start + chunk]
        res = np.linalg.solve(z[:, None, None] * eye - a, np.broadcast_to(eye, (z.size, n, n)))
        out += np.tensordot(w[start:start + chunk], res, axes=1)
    return out / nodes


def contour_projections(a, spectrum, groups, nodes=512, which=None):
    """Per-group Cauchy projections ``(1/2 pi i) int (zI - A)^{-1} dz``.

    Each circle is centred at the mean of the group's eigenvalues with
    radius halfway between the group's own spread and the nearest other
    eigenvalue; the trapezoidal rule converges geometrically on it.
    ``which`` restricts the output to some group indices.
    """
    a = check_square_matrix(a, "operator")
    centres, radii = _ball_geometry(spectrum, groups)
    which = range(len(groups)) if which is None else which
    return [_circle_projection(a, centres[n], radii[n], nodes) for n in which]


def indicator_interpolant(spectrum, groups, subset, c_factor=1.2):
    """Half-plane function equal to ``1`` on groups in ``subset``, ``0`` elsewhere.

    Eigenvalues are shifted by ``alpha``. Simple, singleton groups use one
    Nevanlinna-Pick interpolant; otherwise the grouped construction also
    flattens the derivative so Jordan chains of length two and clustered
    pairs are handled.

    Returns
    -------
    g : AnalyticFunction on the right half-plane
    c_star : float or tuple
        Minimal norm (per stage for the grouped construction).
    """
    from .gaps import BallGroup, Decomposition

    subset = set(subset)
    eig = spectrum.eigenvalues
    lengths = [len(ch) for ch in spectrum.chains]
    if max(lengths) > 2:
        raise ValueError("interpolant path covers Jordan chains of length at most 2")
    singleton = all(len(g) == 1 for g in groups) and max(lengths) == 1
    targets = np.array([1.0 if n in subset else 0.0 for n in range(len(groups))], dtype=complex)
    if singleton:
        mu = eig[[g[0] for g in groups]] + spectrum.alpha
        c_star = np_min_norm(mu, targets)
        if c_star == 0.0:
            return Interpolant.zero(), 0.0
        return np_interpolant(mu, targets, c_factor * c_star), c_star
    # ball points: each distinct eigenvalue once, first member flagged by chain length
    points, balls = [], []
    for g in groups:
        vals = []
        for k in g:
            if not any(abs(eig[k] - v) <= 1e-12 * max(1.0, abs(v)) for v in vals):
                vals.append(eig[k])
        if len(vals) > 2:
            raise ValueError("interpolant path covers at most two distinct eigenvalues per group")
        # a Jordan chain of length two must sit on a point whose derivative is flattened;
        # both ball points are flattened, so order does not matter
        members = tuple(range(len(points), len(points) + len(vals)))
        points.extend(vals)
        balls.append(BallGroup(complex(np.mean(vals)), 1.0, members))
    d = Decomposition(tuple(balls), 2, tuple(points))
    res = grouped_interpolant(d, targets, c_factor, shift=spectrum.alpha)
    return res.interpolant, res.stage_c_star


def spectral_projection(a, spectrum, subset, d=None, method="exact", **options):
    """Spectral projection onto the chains of the groups in ``subset``.

    Parameters
    ----------
    a : array_like or OperatorMatrix
    spectrum : Spectrum
        Chains spanning the space.
    subset : iterable of int
        Group indices ``J``.
    d : Decomposition or None
        Decomposition of ``spectrum.multiset()`` defining the groups;
        ``None`` gives one group per chain.
    method : {"exact", "contour", "interpolant"}
    options
        ``nodes`` for the circles; ``c_factor``, ``calculus`` (a fitted
        :class:`ContourCalculus`), ``height`` and ``density`` for the
        interpolant path.
    """
    a = check_square_matrix(a, "operator")
    groups = chain_groups(spectrum, d)
    subset = sorted(set(int(n) for n in subset))
    if any(n < 0 or n >= len(groups) for n in subset):
        raise ValueError(f"subset {subset} is not within the {len(groups)} groups")
    if method == "exact":
        return ProjectionFamily.from_spectrum(spectrum, groups).subset_sum(subset)
    if method == "contour":
        if not subset:
            return np.zeros_like(a, dtype=complex)
        return sum(contour_projections(a, spectrum, groups, options.get("nodes", 512), subset))
    if method == "interpolant":
        calc = options.get("calculus")
        if calc is None:
            calc = _pipeline_calculus(a, spectrum, options.get("height"),
                                      options.get("density", 20))
        g, _ = indicator_interpolant(spectrum, groups, subset, options.get("c_factor", 1.2))
        return calc.apply(StripFunction(g, spectrum.alpha)).matrix
    raise ValueError(f"unknown method {method!r}; use 'exact', 'contour' or 'interpolant'")


# ------------------------------------------------------------ pipelines

@dataclass
class RieszReport:
    """Bounds and consistency checks of one pipeline run.

    ``projection_error`` is the largest entrywise deviation of the
    interpolant-calculus projections from the exact ones (``None`` when
    that path was skipped); ``contour_error`` the same for the Cauchy
    circles. ``wermer_M2`` is exact only when ``exhaustive`` is true.
    ``passed`` compares the interpolant path against
    :attr:`interpolant_tol`, since interpolants of norm ``c`` cannot be
    summed more accurately than about ``1e-14 c``.
    """

    frame_lower: float
    frame_upper: float
    family_lower: float
    family_upper: float
    wermer_M2: float
    identity_defect: float
    ranks: tuple = ()
    n_groups: int = 0
    wermer_subset: tuple = ()
    exhaustive: bool = False
    projection_error: float = None
    contour_error: float = None
    max_interpolant_bound: float = None
    max_calculus_norm: float = None
    n_checked: int = 0
    tol: float = 1e-6
    subset_table: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        for name in ("frame_lower", "frame_upper", "family_lower", "family_upper",
                     "wermer_M2", "identity_defect"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be nonnegative")

    @property
    def interpolant_tol(self):
        """``tol``, raised to the roundoff floor ``1e-14 * max_interpolant_bound``."""
        return max(self.tol, ROUNDOFF * (self.max_interpolant_bound or 0.0))

    @property
    def passed(self):
        ok = self.identity_defect <= self.tol
        if self.contour_error is not None:
            ok = ok and self.contour_error <= self.tol
        if self.projection_error is not None:
            ok = ok and self.projection_error <= self.interpolant_tol
        return bool(ok)

    def to_dict(self):
        out = {k: v for k, v in self.__dict__.items() if k != "subset_table"}
        out["ranks"] = list(self.ranks)
        out["wermer_subset"] = list(self.wermer_subset)
        out["interpolant_tol"] = self.interpolant_tol
        out["passed"] = self.passed
        return out

    def subset_rows(self):
        """Rows ``(subset, norm, calculus_error)`` for CSV output."""
        return list(self.subset_table)


def _pipeline_calculus(a, spectrum, height=None, density=20):
    """Calculus with a mapped tail; ``height`` defaults to ``max |Im lambda| + 10``."""
    if height is None:
        height = float(np.ceil(np.abs(spectrum.eigenvalues.imag).max(initial=0.0))) + 10.0
    return ContourCalculus(height=height, density=density, tail="map").fit(a, spectrum)


def _interpolant_checks(a, spectrum, groups, family, subsets, c_factor, height, density):
    calc = _pipeline_calculus(a, spectrum, height, density)
    worst, worst_c, worst_norm = 0.0, 0.0, 0.0
    errors = {}
    for sub in subsets:
        g, c_star = indicator_interpolant(spectrum, groups, sub, c_factor)
        mat = calc.apply(StripFunction(g, spectrum.alpha)).matrix
        err = float(np.abs(mat - family.subset_sum(sub)).max())
        errors[tuple(sub)] = err
        worst = max(worst, err)
        worst_c = max(worst_c, c_factor * float(np.max(c_star)))
        worst_norm = max(worst_norm, float(np.linalg.norm(mat, 2)))
    return worst, worst_c, worst_norm, errors


def _table(scan, errors):
    return [(s, float(nrm), errors.get(s)) for s, nrm in zip(scan.subsets, scan.norms)]


def pipeline_theorem_1_1(a, spectrum, tol=1e-6, c_factor=1.2, height=None, density=20,
                         budget=4096, seed=0):
    """Riesz basis check for a simple spectrum with a uniform gap.

    For every scanned subset ``J`` the indicator of ``J`` on the shifted
    eigenvalues is interpolated with a bounded half-plane function, pushed
    through the strip calculus and compared with the exact eigenprojection.
    Frame bounds of the eigenvectors, family bounds of the rank-one
    eigenprojections and the Wermer scan complete the report.

    Raises
    ------
    SpectrumError
        An eigenvalue is not simple.
    GapError
        Two eigenvalues coincide (the uniform gap is zero); ``pair`` holds
        their chain indices.
    """
    a = check_square_matrix(a, "operator")
    if not spectrum.is_simple():
        raise SpectrumError("eigenvalues must be simple (a Jordan chain has length > 1)")
    eig = spectrum.eigenvalues
    if eig.size >= 2:
        gap, pair = uniform_gap(eig, return_pair=True)
        if not gap > 1e-12:
            raise GapError(f"uniform gap = {gap:.3g} at pair {pair} "
                           f"({eig[pair[0]]:.6g}, {eig[pair[1]]:.6g})", pair)
    groups = [(k,) for k in range(eig.size)]
    family = ProjectionFamily.from_spectrum(spectrum, groups)
    scan = wermer_scan(family, budget, seed)
    err, cmax, fmax, errors = _interpolant_checks(a, spectrum, groups, family, scan.subsets,
                                                  c_factor, height, density)
    m, big_m = frame_bounds(spectrum.chain_matrix().T)
    m1, big_m1 = riesz_family_bounds(family)
    return RieszReport(m, big_m, m1, big_m1, scan.M2, family.identity_defect(),
                       ranks=family.ranks, n_groups=len(groups), wermer_subset=scan.subset,
                       exhaustive=scan.exhaustive, projection_error=err,
                       max_interpolant_bound=cmax, max_calculus_norm=fmax,
                       n_checked=len(errors), tol=tol, subset_table=_table(scan, errors))


def pipeline_theorem_1_6(a, spectrum, K, merge_dist, tol=1e-6, c_factor=1.2, height=None,
                         density=20, budget=1024, seed=0, interpolant_limit=8):
    """Riesz family check for eigenvalues grouped into separated balls.

    The multiset of eigenvalues is decomposed with ``K`` and
    ``merge_dist``; the spectral projections of the balls are assembled
    exactly, by Cauchy circles and (when every ball holds at most two
    distinct points) by grouped interpolants through the calculus. The
    interpolant path checks every subset when there are at most
    ``interpolant_limit`` groups and the singletons otherwise.
    """
    a = check_square_matrix(a, "operator")
    values, _ = spectrum.multiset()
    d = decompose(values, K, merge_dist)
    groups = chain_groups(spectrum, d)
    family = ProjectionFamily.from_spectrum(spectrum, groups)
    if max(family.ranks) > d.K:
        raise DecompositionError(f"a group has rank {max(family.ranks)} > K = {d.K}")
    scan = wermer_scan(family, budget, seed)

    contour = contour_projections(a, spectrum, groups)
    c_err = max(float(np.abs(c - p).max()) for c, p in zip(contour, family.projections))

    err = cmax = fmax = None
    errors = {}
    if len(groups) <= interpolant_limit:
        subsets = subset_plan(len(groups))[0]
    else:
        subsets = [(n,) for n in range(len(groups))]
    try:
        err, cmax, fmax, errors = _interpolant_checks(a, spectrum, groups, family, subsets,
                                                      c_factor, height, density)
    except ValueError as exc:
        logger.info("interpolant path skipped: %s", exc)

    m, big_m = frame_bounds(spectrum.chain_matrix().T)
    m1, big_m1 = riesz_family_bounds(family)
    return RieszReport(m, big_m, m1, big_m1, scan.M2, family.identity_defect(),
                       ranks=family.ranks, n_groups=len(groups), wermer_subset=scan.subset,
                       exhaustive=scan.exhaustive, projection_error=err, contour_error=c_err,
                       max_interpolant_bound=cmax, max_calculus_norm=fmax,
                       n_checked=len(errors), tol=tol, subset_table=_table(scan, errors))


# ------------------------------------------------------------ counterexample study

@dataclass
class CounterexampleStudy:
    """Frame collapse of the block counterexample against its grouped family.

    ``rows`` holds ``(k, pair_lower, frame_lower, family_lower, family_upper)``:
    the lower frame bound of block ``k`` alone, of the whole truncation at
    ``K_max = k`` and, at checkpoint rows, the family bounds of the block
    projections (``None`` elsewhere).
    """

    rows: list
    full_frame_lower: float
    full_frame_upper: float
    family_lower: float
    family_upper: float
    identity_defect: float

    @property
    def monotone(self):
        m = [r[2] for r in self.rows]
        return all(b <= a for a, b in zip(m, m[1:]))

    def to_csv_rows(self):
        head = ["k", "pair_frame_lower", "frame_lower", "family_lower", "family_upper"]
        return [head] + [list(r) for r in self.rows]


def counterexample_study(k_max, checkpoints=(1, 2, 5, 10, 20, 50, 100, 200)):
    """Frame and grouped-family bounds of the truncations ``K_max = 1..k_max``.

    The generator is block diagonal, so the frame bounds of a truncation
    are the extremes over its blocks; the last row is confirmed by one
    Jacobi run on the full eigenvector matrix (``full_frame_*``).
    """
    k_max = int(k_max)
    a, s = example_counterexample(k_max)
    groups = block_groups(s, 2)
    phi = s.chain_matrix()
    rows, running = [], np.inf
    marks = {k for k in checkpoints if k <= k_max} | {k_max}
    for k, g in enumerate(groups, start=1):
        block = phi[2 * (k - 1):2 * k, list(g)]
        pair_m, _ = frame_bounds(block.T)
        running = min(running, pair_m)
        lo = hi = None
        if k in marks:
            _, sk = example_counterexample(k)
            fam = ProjectionFamily.from_spectrum(sk, block_groups(sk, 2))
            lo, hi = riesz_family_bounds(fam)
        rows.append((k, pair_m, running, lo, hi))
    full_m, full_big_m = frame_bounds(phi.T)
    family = ProjectionFamily.from_spectrum(s, groups)
    m1, big_m1 = riesz_family_bounds(family)
    return CounterexampleStudy(rows, full_m, full_big_m, m1, big_m1, family.identity_defect())
