"""Centrality and cohesion measures on the unweighted skeleton of a CollabGraph."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csgraph

from . import kernels
from .graph import CollabGraph

EIG_TOL = 1e-10
EIG_MAX_ITER = 1000


class ConvergenceError(RuntimeError):
    def __init__(self, iterations: int, residual: float):
        super().__init__(
            f"eigenvector power iteration did not converge after {iterations} "
            f"iterations (last step difference {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


@dataclass(frozen=True)
class NodeMetrics:
    id: int
    email: str
    affiliation: str
    degree: int
    degree_centrality: float
    betweenness: float
    betweenness_normalized: float
    eigenvector: float
    clustering: float


@dataclass(frozen=True)
class MetricsReport:
    nodes: tuple[NodeMetrics, ...]
    node_count: int
    edge_count: int
    density: float
    global_clustering: float
    component_count: int


def degree_centrality(g: CollabGraph) -> tuple[np.ndarray, np.ndarray]:
    """Neighbour counts and the same divided by ``n - 1`` (0 when n < 2)."""
    indptr, _ = g.csr
    deg = np.diff(indptr)
    if g.n < 2:
        return deg, np.zeros(g.n)
    return deg, deg / (g.n - 1)


def betweenness_centrality(g: CollabGraph, normalized: bool = False) -> np.ndarray:
    """Shortest-path betweenness, each unordered endpoint pair counted once.

    Normalized values are divided by ``(n-1)(n-2)/2``, the number of pairs a
    node can sit between.
    """
    indptr, indices = g.csr
    bc = kernels.brandes(indptr, indices) / 2.0
    if normalized:
        n = g.n
        if n < 3:
            return np.zeros(n)
        bc = bc / ((n - 1) * (n - 2) / 2.0)
    return bc


def components(g: CollabGraph) -> tuple[int, np.ndarray]:
    if g.n == 0:
        return 0, np.zeros(0, dtype=np.int64)
    return csgraph.connected_components(g.adjacency(), directed=False)


def principal_component(g: CollabGraph) -> np.ndarray:
    """Node ids of the largest component; ties go to the component holding
    the smallest node id."""
    count, labels = components(g)
    if count == 0:
        return np.zeros(0, dtype=np.int64)
    sizes = np.bincount(labels)
    _, first = np.unique(labels, return_index=True)
    best = min(range(count), key=lambda c: (-sizes[c], first[c]))
    return np.flatnonzero(labels == best)


def eigenvector_centrality(g: CollabGraph, tol: float = EIG_TOL,
                           max_iter: int = EIG_MAX_ITER) -> np.ndarray:
    """Principal adjacency eigenvector by power iteration, scaled to max 1.

    Only the largest component gets non-zero scores. Iteration runs on
    ``A + I``, which has the same eigenvectors as ``A`` but keeps bipartite
    components (stars, paths, trees) from oscillating.
    """
    if tol <= 0 or max_iter < 1:
        raise ValueError("tol must be > 0 and max_iter >= 1")
    x_full = np.zeros(g.n)
    members = principal_component(g)
    if len(members) < 2:
        return x_full
    adj = g.adjacency()[members][:, members].astype(np.float64)
    x = np.full(len(members), 1.0 / np.sqrt(len(members)))
    ax = adj @ x
    for _ in range(max_iter):
        y = ax + x
        y /= np.linalg.norm(y)
        diff = np.max(np.abs(y - x))
        x = y
        ax = adj @ x
        if diff < tol:
            # also require the max-scaled vector to satisfy A x = lambda x to tol * lambda
            lam = x @ ax
            if np.max(np.abs(ax - lam * x)) / x.max() <= tol * lam:
                break
    else:
        raise ConvergenceError(max_iter, float(diff))
    x_full[members] = x / x.max()
    return x_full


def density(g: CollabGraph) -> float:
    n = g.n
    if n < 2:
        return 0.0
    return 2.0 * g.m / (n * (n - 1))


def triangles(g: CollabGraph) -> np.ndarray:
    """Number of triangles through each node."""
    if g.m == 0:
        return np.zeros(g.n, dtype=np.int64)
    a = g.adjacency()
    return np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() // 2


def clustering(g: CollabGraph) -> tuple[np.ndarray, float]:
    """Local clustering per node (0 below degree 2) and its mean over all nodes.

    The mean uses a correctly rounded sum, so it does not depend on summation order.
    """
    deg, _ = degree_centrality(g)
    tri = triangles(g)
    local = np.zeros(g.n)
    ok = deg >= 2
    local[ok] = 2.0 * tri[ok] / (deg[ok] * (deg[ok] - 1.0))
    return local, (math.fsum(local) / g.n if g.n else 0.0)


def graph_summary(g: CollabGraph, tol: float = EIG_TOL, max_iter: int = EIG_MAX_ITER) -> MetricsReport:
    deg, deg_c = degree_centrality(g)
    bc = betweenness_centrality(g)
    n = g.n
    bc_norm = bc / ((n - 1) * (n - 2) / 2.0) if n >= 3 else np.zeros(n)
    eig = eigenvector_centrality(g, tol, max_iter)
    local, global_c = clustering(g)
    rows = tuple(
        NodeMetrics(
            id=dev.id, email=dev.email, affiliation=dev.affiliation,
            degree=int(deg[i]), degree_centrality=float(deg_c[i]),
            betweenness=float(bc[i]), betweenness_normalized=float(bc_norm[i]),
            eigenvector=float(eig[i]), clustering=float(local[i]),
        )
        for i, dev in enumerate(g.nodes)
    )
    return MetricsReport(rows, n, g.m, density(g), global_c, components(g)[0])
