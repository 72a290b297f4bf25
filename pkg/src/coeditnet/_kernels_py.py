"""Pure-Python/numpy versions of the compiled kernels in ``_kernels.pyx``.

Betweenness follows exactly the same visiting and summation order as the
compiled version, so both produce bit-identical results.
"""

from __future__ import annotations

from collections import deque

import numpy as np


def brandes(indptr, indices) -> np.ndarray:
    """Unweighted Brandes accumulation summed over every source.

    Each unordered pair {s, t} contributes twice (once from each end).
    """
    indptr = [int(x) for x in indptr]
    indices = [int(x) for x in indices]
    n = len(indptr) - 1
    bc = [0.0] * n
    for s in range(n):
        dist = [-1] * n
        sigma = [0.0] * n
        delta = [0.0] * n
        dist[s] = 0
        sigma[s] = 1.0
        order = []
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            dv = dist[v]
            for j in range(indptr[v], indptr[v + 1]):
                w = indices[j]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue.append(w)
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
        for w in reversed(order):
            dw = dist[w]
            coeff = (1.0 + delta[w]) / sigma[w]
            for j in range(indptr[w], indptr[w + 1]):
                v = indices[j]
                if dist[v] == dw - 1:
                    delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    return np.array(bc, dtype=np.float64)


def fruchterman_reingold(pos, eu, ev, iterations: int, k: float, t0: float) -> np.ndarray:
    """Spring embedding inside the unit square.

    Repulsion k^2/d between every pair, attraction d^2/k along edges, step
    length capped by a temperature falling linearly from ``t0`` to 0.
    """
    pos = np.array(pos, dtype=np.float64, copy=True)
    eu = np.asarray(eu, dtype=np.int64)
    ev = np.asarray(ev, dtype=np.int64)
    n = len(pos)
    kk = k * k
    for it in range(iterations):
        t = t0 * (1.0 - it / iterations)
        delta = pos[:, None, :] - pos[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", delta, delta)
        np.maximum(d2, 1e-18, out=d2)
        disp = np.einsum("ij,ijk->ik", kk / d2, delta)
        if len(eu):
            dv = pos[eu] - pos[ev]
            f = np.sqrt(np.einsum("ij,ij->i", dv, dv)) / k
            pull = dv * f[:, None]
            for axis in (0, 1):
                disp[:, axis] -= np.bincount(eu, pull[:, axis], n)
                disp[:, axis] += np.bincount(ev, pull[:, axis], n)
        length = np.sqrt(np.einsum("ij,ij->i", disp, disp))
        moving = length > 0
        step = np.zeros(n)
        step[moving] = np.minimum(length[moving], t) / length[moving]
        pos += disp * step[:, None]
        np.clip(pos, 0.0, 1.0, out=pos)
    return pos
