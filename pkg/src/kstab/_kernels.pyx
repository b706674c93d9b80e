# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled lattice-scan kernels (int64).  Mirrors ``_kernels_py``."""
from libc.stdlib cimport malloc, free


cdef inline bint _inside(long long* A, long long* b, long long* x,
                         int m, int d) nogil:
    cdef int i, j
    cdef long long s
    for i in range(m):
        s = b[i]
        for j in range(d):
            s += A[i * d + j] * x[j]
        if s < 0:
            return False
    return True


cdef long long* _flat(rows, int d, int m) except NULL:
    cdef long long* out = <long long*> malloc(max(1, m * d) * sizeof(long long))
    cdef int i, j
    for i in range(m):
        for j in range(d):
            out[i * d + j] = rows[i][j]
    return out


cdef long long* _vec(v, int m) except NULL:
    cdef long long* out = <long long*> malloc(max(1, m) * sizeof(long long))
    cdef int i
    for i in range(m):
        out[i] = v[i]
    return out


def _scan(A, b, lo, hi, G, g, den, int mode):
    cdef int d = len(lo)
    cdef int m = len(A)
    cdef int mg = len(G)
    cdef long long* cA = _flat(A, d, m)
    cdef long long* cb = _vec(b, m)
    cdef long long* cG = _flat(G, d, mg)
    cdef long long* cg = _vec(g, mg)
    cdef long long* cden = _vec(den, mg)
    cdef long long* clo = _vec(lo, d)
    cdef long long* chi = _vec(hi, d)
    cdef long long* x = <long long*> malloc(max(1, d) * sizeof(long long))
    cdef long long count = 0, total = 0, s, q, depth
    cdef int i, j, k
    pts = []
    try:
        for j in range(d):
            if clo[j] > chi[j]:
                return (0, 0, pts)
            x[j] = clo[j]
        while True:
            if _inside(cA, cb, x, m, d):
                count += 1
                if mode == 1:
                    pts.append(tuple([x[j] for j in range(d)]))
                elif mode == 2:
                    depth = 0
                    for i in range(mg):
                        s = cg[i]
                        for j in range(d):
                            s += cG[i * d + j] * x[j]
                        if s >= 0:
                            q = (s + cden[i] - 1) // cden[i]
                        else:
                            q = -((-s) // cden[i])
                        if q > depth:
                            depth = q
                    total += depth
            k = d - 1
            while k >= 0:
                x[k] += 1
                if x[k] <= chi[k]:
                    break
                x[k] = clo[k]
                k -= 1
            if k < 0:
                break
        return (count, total, pts)
    finally:
        free(cA); free(cb); free(cG); free(cg); free(cden)
        free(clo); free(chi); free(x)


def enumerate_points(A, b, lo, hi):
    return _scan(A, b, lo, hi, [], [], [], 1)[2]


def count_points(A, b, lo, hi):
    return _scan(A, b, lo, hi, [], [], [], 0)[0]


def depth_sum(A, b, G, g, den, lo, hi):
    c, t, _ = _scan(A, b, lo, hi, G, g, den, 2)
    return c, t
