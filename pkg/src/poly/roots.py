"""
Poly - Univariate Root Finder

Companion-matrix eigenvalues followed by Aberth-Ehrlich refinement.
Roots closer than the cluster radius (relative to the root scale) are
merged and reported with multiplicity.
"""

import logging
from typing import List, NamedTuple, Optional

import numpy as np

from src import config

logger = logging.getLogger(__name__)

ABERTH_MAX_ITER = 60


class RootCluster(NamedTuple):
    center: complex
    multiplicity: int
    radius: float


class RootSet(NamedTuple):
    """Multiset of roots (clusters expanded) with the cluster summary."""

    roots: np.ndarray
    clusters: List[RootCluster]
    residual: float


def trim_leading(coeffs: np.ndarray, rel_tol: float = 0.0) -> np.ndarray:
    """Drop leading coefficients that are zero (or below rel_tol * max)."""
    coeffs = np.asarray(coeffs, dtype=complex)
    scale = np.max(np.abs(coeffs)) if coeffs.size else 0.0
    i = 0
    while i < coeffs.size and abs(coeffs[i]) <= rel_tol * scale:
        i += 1
    return coeffs[i:]


def companion_roots(coeffs: np.ndarray) -> np.ndarray:
    """Eigenvalues of the companion matrix; coeffs highest degree first."""
    coeffs = np.asarray(coeffs, dtype=complex)
    n = coeffs.size - 1
    if n < 1:
        return np.empty(0, dtype=complex)
    companion = np.zeros((n, n), dtype=complex)
    companion[0, :] = -coeffs[1:] / coeffs[0]
    if n > 1:
        companion[1:, :-1] = np.eye(n - 1)
    return np.linalg.eigvals(companion)


def companion_roots_batch(coeffs: np.ndarray) -> np.ndarray:
    """Roots of many same-degree polynomials at once, shape (n, deg)."""
    coeffs = np.asarray(coeffs, dtype=complex)
    count, width = coeffs.shape
    deg = width - 1
    if deg < 1:
        return np.empty((count, 0), dtype=complex)
    companion = np.zeros((count, deg, deg), dtype=complex)
    companion[:, 0, :] = -coeffs[:, 1:] / coeffs[:, :1]
    if deg > 1:
        companion[:, 1:, :-1] = np.eye(deg - 1)
    return np.linalg.eigvals(companion)


def aberth_refine(
    coeffs: np.ndarray,
    roots: np.ndarray,
    active: Optional[np.ndarray] = None,
    tol: Optional[float] = None,
) -> np.ndarray:
    """Aberth-Ehrlich iterations on the active roots."""
    tol = config.TOL_ROOT if tol is None else tol
    roots = np.array(roots, dtype=complex)
    if roots.size == 0:
        return roots
    active = np.ones(roots.size, dtype=bool) if active is None else active.copy()
    deriv = np.polyder(coeffs)
    for _ in range(ABERTH_MAX_ITER):
        if not active.any():
            break
        values = np.polyval(coeffs, roots)
        slopes = np.polyval(deriv, roots)
        diff = roots[:, np.newaxis] - roots[np.newaxis, :]
        np.fill_diagonal(diff, np.inf)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            repulsion = np.sum(1.0 / diff, axis=1)
            ratio = values / slopes
            step = ratio / (1.0 - ratio * repulsion)
        step = np.where(np.isfinite(step) & active, step, 0.0)
        roots = roots - step
        converged = np.abs(step) <= tol * (1.0 + np.abs(roots))
        active &= ~converged
    return roots


def cluster_roots(roots: np.ndarray, radius: Optional[float] = None) -> List[RootCluster]:
    """Group roots closer than radius * (root scale)."""
    radius = config.CLUSTER_RADIUS if radius is None else radius
    n = roots.size
    if n == 0:
        return []
    scale = float(np.max(np.abs(roots)))
    threshold = radius * scale
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) <= threshold:
                parent[find(i)] = find(j)

    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    clusters = []
    for members in sorted(groups.values()):
        points = roots[members]
        center = complex(np.mean(points))
        spread = float(np.max(np.abs(points - center)))
        clusters.append(RootCluster(center, len(members), spread))
    return clusters


def solve(coeffs: np.ndarray, tol: Optional[float] = None) -> RootSet:
    """All roots of a univariate polynomial, clustered, with residual."""
    tol = config.TOL_ROOT if tol is None else tol
    coeffs = np.asarray(coeffs, dtype=complex)
    raw = companion_roots(coeffs)
    if raw.size == 0:
        return RootSet(raw, [], 0.0)

    clusters = cluster_roots(raw)
    roots = np.concatenate([np.full(c.multiplicity, c.center) for c in clusters])
    # clustered roots keep their mean; only isolated roots are refined
    isolated = np.concatenate(
        [np.full(c.multiplicity, c.multiplicity == 1) for c in clusters]
    )
    if isolated.any():
        roots = aberth_refine(coeffs, roots, active=isolated, tol=tol)
        refined, offset = [], 0
        for cluster in clusters:
            if cluster.multiplicity == 1:
                cluster = RootCluster(complex(roots[offset]), 1, 0.0)
            refined.append(cluster)
            offset += cluster.multiplicity
        clusters = refined

    residual = float(np.max(np.abs(np.polyval(coeffs, roots) / coeffs[0])))
    return RootSet(roots, clusters, residual)
