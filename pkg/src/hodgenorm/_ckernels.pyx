# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``, with identical signatures."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, exp, log, fabs

cnp.import_array()

DEF MAXK = 16
DEF MAXD = 17


cdef inline double _mink(const double* x, const double* y, int D) noexcept nogil:
    cdef double s = 0.0
    cdef int i
    for i in range(D - 1):
        s += x[i] * y[i]
    return s - x[D - 1] * y[D - 1]


cdef double _det(double* G, int k) noexcept nogil:
    # Gaussian elimination with partial pivoting on a k x k row-major buffer
    cdef int i, j, r, piv
    cdef double det = 1.0, best, f, tmp
    for i in range(k):
        piv = i
        best = fabs(G[i * k + i])
        for r in range(i + 1, k):
            if fabs(G[r * k + i]) > best:
                best = fabs(G[r * k + i])
                piv = r
        if best == 0.0:
            return 0.0
        if piv != i:
            for j in range(k):
                tmp = G[i * k + j]
                G[i * k + j] = G[piv * k + j]
                G[piv * k + j] = tmp
            det = -det
        det *= G[i * k + i]
        for r in range(i + 1, k):
            f = G[r * k + i] / G[i * k + i]
            for j in range(i, k):
                G[r * k + j] -= f * G[i * k + j]
    return det


def cone_integrand(V, U):
    """Volume density of the iterated geodesic cone at cube points ``U``."""
    cdef cnp.ndarray[double, ndim=2, mode="c"] Vc = np.ascontiguousarray(V, dtype=float)
    cdef cnp.ndarray[double, ndim=2, mode="c"] Uc = np.ascontiguousarray(U, dtype=float)
    cdef int k = Vc.shape[0] - 1
    cdef int D = Vc.shape[1]
    cdef Py_ssize_t N = Uc.shape[0]
    if k > MAXK or D > MAXD:
        raise ValueError("simplex too large for the compiled kernel")
    cdef cnp.ndarray[double, ndim=1] out = np.empty(N)
    cdef double X[MAXD]
    cdef double T[MAXK][MAXD]
    cdef double G[MAXK * MAXK]
    cdef double t, c, d, s, sa, sb, ca, cb, ea, eb, A, B, dA, dB, dd, g, det
    cdef const double* q
    cdef Py_ssize_t n
    cdef int i, j, a, b
    cdef bint small
    with nogil:
        for n in range(N):
            for i in range(D):
                X[i] = Vc[0, i]
            for j in range(1, k + 1):
                q = &Vc[j, 0]
                t = Uc[n, j - 1]
                c = -_mink(X, q, D)
                if c < 1.0:
                    c = 1.0
                # sinh d = sqrt(c^2 - 1) and e^d = c + sinh d avoid acosh/sinh/cosh calls
                s = sqrt((c - 1.0) * (c + 1.0))
                d = log(c + s)
                small = d < 1e-9
                if small:
                    for a in range(j - 1):
                        for i in range(D):
                            T[a][i] = (1 - t) * T[a][i]
                    for i in range(D):
                        T[j - 1][i] = 0.0
                        X[i] = (1 - t) * X[i] + t * q[i]
                    continue
                eb = exp(t * d)
                ea = (c + s) / eb
                sa = 0.5 * (ea - 1.0 / ea)
                ca = 0.5 * (ea + 1.0 / ea)
                sb = 0.5 * (eb - 1.0 / eb)
                cb = 0.5 * (eb + 1.0 / eb)
                A = sa / s
                B = sb / s
                dA = ((1 - t) * ca * s - sa * c) / (s * s)
                dB = (t * cb * s - sb * c) / (s * s)
                for a in range(j - 1):
                    dd = -_mink(T[a], q, D) / s
                    for i in range(D):
                        T[a][i] = A * T[a][i] + dd * (dA * X[i] + dB * q[i])
                for i in range(D):
                    T[j - 1][i] = (d / s) * (-ca * X[i] + cb * q[i])
                for i in range(D):
                    X[i] = A * X[i] + B * q[i]
            for a in range(k):
                for b in range(a, k):
                    g = _mink(T[a], T[b], D)
                    G[a * k + b] = g
                    G[b * k + a] = g
            det = _det(G, k) if k > 0 else 1.0
            out[n] = sqrt(det) if det > 0 else 0.0
    return out


def cheeger_scan(cell_vol, face_cells, face_area):
    """Exhaustive cut ratio minimum over cell bipartitions, walking a Gray code."""
    cdef cnp.ndarray[double, ndim=1] vol = np.ascontiguousarray(cell_vol, dtype=float)
    cdef cnp.ndarray[long long, ndim=2] fc = np.ascontiguousarray(face_cells, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] area = np.ascontiguousarray(face_area, dtype=float)
    cdef int C = vol.shape[0]
    cdef int F = fc.shape[0]
    cdef int W = fc.shape[1]
    if C < 2 or C > 62:
        raise ValueError("cheeger_scan needs between 2 and 62 cells")
    # incidence lists cell -> faces
    inc_lists = [[] for _ in range(C)]
    for face in range(F):
        for w in range(W):
            if fc[face, w] >= 0:
                inc_lists[fc[face, w]].append(face)
    cdef cnp.ndarray[long long, ndim=1] ptr = np.zeros(C + 1, dtype=np.int64)
    for ci in range(C):
        ptr[ci + 1] = ptr[ci] + len(inc_lists[ci])
    cdef cnp.ndarray[long long, ndim=1] inc = np.array(
        [x for lst in inc_lists for x in lst], dtype=np.int64)
    cdef cnp.ndarray[long long, ndim=1] deg = (np.asarray(fc) >= 0).sum(axis=1).astype(np.int64)
    cdef cnp.ndarray[long long, ndim=1] cnt = np.zeros(F, dtype=np.int64)
    cdef cnp.ndarray[char, ndim=1] side = np.zeros(C, dtype=np.int8)
    cdef double total = vol.sum()
    cdef double sidevol = 0.0, cut = 0.0, small, ratio, best = float("inf")
    cdef unsigned long long g, prev = 0, nmask = 1ULL << (C - 1), m, best_mask = 0
    cdef int cell, delta, was, now
    cdef long long p, f
    with nogil:
        for m in range(1, nmask):
            g = m ^ (m >> 1)
            # the single flipped bit between consecutive Gray codes
            cell = 1
            while ((g ^ prev) >> (cell - 1)) & 1ULL == 0:
                cell += 1
            prev = g
            delta = 1 if side[cell] == 0 else -1
            side[cell] = 1 - side[cell]
            sidevol += delta * vol[cell]
            for p in range(ptr[cell], ptr[cell + 1]):
                f = inc[p]
                was = 0 < cnt[f] < deg[f]
                cnt[f] += delta
                now = 0 < cnt[f] < deg[f]
                if now and not was:
                    cut += area[f]
                elif was and not now:
                    cut -= area[f]
            small = sidevol if sidevol < total - sidevol else total - sidevol
            if small <= 0:
                continue
            ratio = cut / small
            if ratio < best * (1 - 1e-13):
                best = ratio
                best_mask = g
    return best, int(best_mask)
