"""Uniform gap and grouping of eigenvalues into separated balls.

Eigenvalues without a uniform gap can often still be split into balls that
hold at most ``K`` points each and stay a positive distance apart. The
grouping used here is single-linkage clustering with a user merge distance,
which is deterministic and fails in an exact, reportable way when a
cluster outgrows ``K``.
"""

import json
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_complex_vector, check_positive
from .exceptions import ClusterOverflowError, DecompositionError, GapError


def uniform_gap(lambdas, return_pair=False):
    """Minimum pairwise distance ``min |lambda_n - lambda_m|`` over ``n != m``.

    With ``return_pair=True`` the indices of a closest pair are returned as
    well (lowest indices first on ties).
    """
    lam = check_complex_vector(lambdas, "lambdas")
    if lam.size < 2:
        raise GapError(f"uniform gap needs at least 2 values, got {lam.size}")
    dist = np.abs(lam[:, None] - lam[None, :])
    dist[np.diag_indices_from(dist)] = np.inf
    flat = int(np.argmin(dist))
    i, j = divmod(flat, lam.size)
    gap = float(dist[i, j])
    if return_pair:
        return gap, (min(i, j), max(i, j))
    return gap


@dataclass(frozen=True)
class BallGroup:
    center: complex
    radius: float
    members: tuple

    def to_dict(self):
        return {"center": [self.center.real, self.center.imag], "radius": self.radius,
                "members": list(self.members)}


@dataclass(frozen=True)
class Decomposition:
    """Balls ``B(center, radius)`` partitioning the indices of ``points``."""

    groups: tuple
    K: int
    points: tuple

    @property
    def radius_bounds(self):
        radii = [g.radius for g in self.groups]
        return (min(radii), max(radii)) if radii else (0.0, 0.0)

    @property
    def min_inter_ball_gap(self):
        return _min_inter_ball_gap(self.groups)

    def labels(self):
        out = np.empty(len(self.points), dtype=int)
        for n, g in enumerate(self.groups):
            out[list(g.members)] = n
        return out

    def to_dict(self):
        return {"K": self.K, "groups": [g.to_dict() for g in self.groups]}

    def to_json(self):
        return json.dumps(self.to_dict(), separators=(",", ":"))


def _min_inter_ball_gap(groups):
    if len(groups) < 2:
        return np.inf
    c = np.array([g.center for g in groups])
    r = np.array([g.radius for g in groups])
    gaps = np.abs(c[:, None] - c[None, :]) - r[:, None] - r[None, :]
    gaps[np.diag_indices_from(gaps)] = np.inf
    return float(gaps.min())


def _single_linkage(points, merge_dist):
    n = points.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    close = np.abs(points[:, None] - points[None, :]) < merge_dist
    for i, j in zip(*np.nonzero(np.triu(close, k=1))):
        ri, rj = find(int(i)), find(int(j))
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    clusters = {}
    for i in range(n):
        clusters.setdefault(find(i), []).append(i)
    return list(clusters.values())


def decompose(lambdas, K, merge_dist):
    """Group eigenvalues into separated balls of at most ``K`` members.

    Points closer than ``merge_dist`` are merged transitively. Each cluster
    becomes a ball centred at its centroid with radius
    ``max(max member distance, merge_dist / 4)``. Groups and members are
    ordered by ``(Im, Re, original index)``.

    Raises
    ------
    ClusterOverflowError
        A cluster has more than ``K`` members.
    DecompositionError
        Two balls touch or overlap.
    """
    lam = check_complex_vector(lambdas, "lambdas", min_length=1)
    K = int(K)
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    merge_dist = check_positive(merge_dist, "merge_dist")

    def key(i):
        return (lam[i].imag, lam[i].real, i)

    clusters = [sorted(c, key=key) for c in _single_linkage(lam, merge_dist)]
    clusters.sort(key=lambda c: key(c[0]))
    groups = []
    for members in clusters:
        if len(members) > K:
            vals = ", ".join(f"{lam[i]:.6g}" for i in members)
            raise ClusterOverflowError(
                f"cluster of size {len(members)} exceeds K={K}: members {members} ({vals})",
                members=tuple(members), size=len(members))
        center = complex(lam[members].mean())
        radius = max(float(np.abs(lam[members] - center).max()), merge_dist / 4)
        groups.append(BallGroup(center, radius, tuple(members)))
    d = Decomposition(tuple(groups), K, tuple(complex(z) for z in lam))
    gap = d.min_inter_ball_gap
    if not gap > 0:
        raise DecompositionError(f"balls are not separated (minimum inter-ball gap {gap:.6g})")
    return d


@dataclass(frozen=True)
class HypothesisReport:
    inf_radius: float
    sup_radius: float
    max_members: int
    min_gap: float
    all_covered: bool
    passed: bool

    def to_dict(self):
        return {k: (v if not isinstance(v, float) or np.isfinite(v) else None)
                for k, v in self.__dict__.items()}


def verify_hypotheses(d, atol=1e-12):
    """Check the ball conditions of the grouped interpolation theorem.

    Radii bounded away from zero and infinity, every point in its ball, at
    most ``K`` points per ball, and a positive gap between any two balls.
    """
    inf_r, sup_r = d.radius_bounds
    max_members = max((len(g.members) for g in d.groups), default=0)
    gap = d.min_inter_ball_gap
    pts = np.asarray(d.points, dtype=complex)
    covered = sorted(i for g in d.groups for i in g.members) == list(range(len(pts)))
    for g in d.groups:
        if g.members and np.abs(pts[list(g.members)] - g.center).max() > g.radius + atol:
            covered = False
    ok = (inf_r > 0 and np.isfinite(sup_r) and 1 <= max_members <= d.K
          and gap > 0 and covered)
    return HypothesisReport(float(inf_r), float(sup_r), int(max_members), float(gap),
                            bool(covered), bool(ok))


class GapDecomposer(ClusterMixin, BaseEstimator):
    """Estimator wrapper around :func:`decompose`.

    Parameters
    ----------
    K : int
        Maximum number of eigenvalues (with multiplicity) per ball.
    merge_dist : float
        Single-linkage merge distance.

    Attributes
    ----------
    decomposition_ : Decomposition
    labels_ : ndarray of int
        Ball index of each input eigenvalue.
    uniform_gap_ : float
        Gap of the raw input (0 for repeated values).
    """

    def __init__(self, K=2, merge_dist=0.5):
        self.K = K
        self.merge_dist = merge_dist

    def fit(self, X, y=None):
        lam = check_complex_vector(X, "X", min_length=1)
        self.decomposition_ = decompose(lam, self.K, self.merge_dist)
        self.labels_ = self.decomposition_.labels()
        self.uniform_gap_ = uniform_gap(lam) if lam.size > 1 else np.inf
        return self

    def predict(self, X):
        """Ball containing each point, ``-1`` when it lies in none."""
        check_is_fitted(self)
        lam = check_complex_vector(X, "X")
        out = np.full(lam.size, -1)
        for n, g in enumerate(self.decomposition_.groups):
            out[(out < 0) & (np.abs(lam - g.center) <= g.radius)] = n
        return out
