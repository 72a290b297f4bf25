# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; see ``_kernels_py`` for the reference versions."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def brandes(indptr_in, indices_in):
    cdef cnp.int64_t[::1] indptr = np.ascontiguousarray(indptr_in, dtype=np.int64)
    cdef cnp.int64_t[::1] indices = np.ascontiguousarray(indices_in, dtype=np.int64)
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] bc = out
    cdef cnp.int64_t[::1] dist = np.empty(n, dtype=np.int64)
    cdef double[::1] sigma = np.empty(n, dtype=np.float64)
    cdef double[::1] delta = np.empty(n, dtype=np.float64)
    cdef cnp.int64_t[::1] order = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t s, i, j, head, tail, v, w
    cdef cnp.int64_t dv, dw
    cdef double coeff
    for s in range(n):
        for i in range(n):
            dist[i] = -1
            sigma[i] = 0.0
            delta[i] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        # order doubles as the BFS queue: [head, tail) is pending
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            dv = dist[v]
            for j in range(indptr[v], indptr[v + 1]):
                w = indices[j]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
        for i in range(tail - 1, -1, -1):
            w = order[i]
            dw = dist[w]
            coeff = (1.0 + delta[w]) / sigma[w]
            for j in range(indptr[w], indptr[w + 1]):
                v = indices[j]
                if dist[v] == dw - 1:
                    delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    return out


def fruchterman_reingold(pos_in, eu_in, ev_in, int iterations, double k, double t0):
    out = np.array(pos_in, dtype=np.float64, copy=True)
    cdef double[:, ::1] pos = out
    cdef cnp.int64_t[::1] eu = np.ascontiguousarray(eu_in, dtype=np.int64)
    cdef cnp.int64_t[::1] ev = np.ascontiguousarray(ev_in, dtype=np.int64)
    cdef Py_ssize_t n = pos.shape[0], m = eu.shape[0]
    cdef double[:, ::1] disp = np.zeros((n, 2), dtype=np.float64)
    cdef Py_ssize_t it, i, j, e, u, v
    cdef double t, dx, dy, d2, f, length, step, kk = k * k
    for it in range(iterations):
        t = t0 * (1.0 - <double>it / iterations)
        for i in range(n):
            disp[i, 0] = 0.0
            disp[i, 1] = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                dx = pos[i, 0] - pos[j, 0]
                dy = pos[i, 1] - pos[j, 1]
                d2 = dx * dx + dy * dy
                if d2 < 1e-18:
                    d2 = 1e-18
                f = kk / d2
                disp[i, 0] += dx * f
                disp[i, 1] += dy * f
                disp[j, 0] -= dx * f
                disp[j, 1] -= dy * f
        for e in range(m):
            u = eu[e]
            v = ev[e]
            dx = pos[u, 0] - pos[v, 0]
            dy = pos[u, 1] - pos[v, 1]
            f = sqrt(dx * dx + dy * dy) / k
            disp[u, 0] -= dx * f
            disp[u, 1] -= dy * f
            disp[v, 0] += dx * f
            disp[v, 1] += dy * f
        for i in range(n):
            length = sqrt(disp[i, 0] * disp[i, 0] + disp[i, 1] * disp[i, 1])
            if length > 0:
                step = (length if length < t else t) / length
                pos[i, 0] += disp[i, 0] * step
                pos[i, 1] += disp[i, 1] * step
                if pos[i, 0] < 0.0:
                    pos[i, 0] = 0.0
                elif pos[i, 0] > 1.0:
                    pos[i, 0] = 1.0
                if pos[i, 1] < 0.0:
                    pos[i, 1] = 0.0
                elif pos[i, 1] > 1.0:
                    pos[i, 1] = 1.0
    return out
