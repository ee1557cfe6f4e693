# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: Laurent matrix evaluation, Laurent commutators and
batched characteristic polynomials. Mirrors ``_kernels_py``."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline void _horner_into(const double complex[:, :, ::1] c, Py_ssize_t lo,
                              double complex zeta, double complex[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t n = c.shape[0], r = c.shape[1], s = c.shape[2]
    cdef Py_ssize_t split, i, a, b
    cdef double complex w, acc, neg, scale_pos, scale_neg
    split = -lo
    if split < 0:
        split = 0
    if split > n:
        split = n
    w = 1.0 / zeta
    scale_pos = 1.0
    if lo > 0:
        for i in range(lo):
            scale_pos = scale_pos * zeta
    scale_neg = 1.0
    if -lo > n:
        for i in range(-lo - n):
            scale_neg = scale_neg * w
    for a in range(r):
        for b in range(s):
            acc = 0.0
            i = n - 1
            while i >= split:
                acc = acc * zeta + c[i, a, b]
                i -= 1
            neg = 0.0
            for i in range(split):
                neg = (neg + c[i, a, b]) * w
            out[a, b] = acc * scale_pos + neg * scale_neg


def laurent_eval(coeffs, Py_ssize_t lo, zeta):
    cdef const double complex[:, :, ::1] c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    out = np.empty((c.shape[1], c.shape[2]), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef double complex z = zeta
    with nogil:
        _horner_into(c, lo, z, o)
    return out


def laurent_eval_many(coeffs, Py_ssize_t lo, zetas):
    cdef const double complex[:, :, ::1] c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef const double complex[::1] z = np.ascontiguousarray(np.ravel(zetas), dtype=np.complex128)
    out = np.empty((z.shape[0], c.shape[1], c.shape[2]), dtype=np.complex128)
    cdef double complex[:, :, ::1] o = out
    cdef Py_ssize_t k
    with nogil:
        for k in range(z.shape[0]):
            _horner_into(c, lo, z[k], o[k])
    return out


def laurent_commutator(a, b):
    cdef const double complex[:, :, ::1] A = np.ascontiguousarray(a, dtype=np.complex128)
    cdef const double complex[:, :, ::1] B = np.ascontiguousarray(b, dtype=np.complex128)
    cdef Py_ssize_t n = A.shape[0], p = B.shape[0], m = A.shape[1]
    out = np.zeros((n + p - 1, m, m), dtype=np.complex128)
    cdef double complex[:, :, ::1] o = out
    cdef Py_ssize_t i, j, r, s, t
    cdef double complex acc
    with nogil:
        for i in range(n):
            for j in range(p):
                for r in range(m):
                    for s in range(m):
                        acc = 0.0
                        for t in range(m):
                            acc = acc + A[i, r, t] * B[j, t, s] - B[j, r, t] * A[i, t, s]
                        o[i + j, r, s] = o[i + j, r, s] + acc
    return out


def charpoly(mats):
    cdef const double complex[:, :, ::1] M = np.ascontiguousarray(mats, dtype=np.complex128)
    cdef Py_ssize_t N = M.shape[0], m = M.shape[1]
    out = np.zeros((N, m + 1), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef double complex[:, ::1] cur = np.zeros((m, m), dtype=np.complex128)
    cdef double complex[:, ::1] nxt = np.zeros((m, m), dtype=np.complex128)
    cdef Py_ssize_t q, k, r, s, t
    cdef double complex acc, tr, ck
    with nogil:
        for q in range(N):
            o[q, 0] = 1.0
            for r in range(m):
                for s in range(m):
                    cur[r, s] = 0.0
            for k in range(1, m):
                ck = o[q, k - 1]
                tr = 0.0
                for r in range(m):
                    for s in range(m):
                        acc = M[q, r, s] * ck
                        for t in range(m):
                            acc = acc + M[q, r, t] * cur[t, s]
                        nxt[r, s] = acc
                    tr = tr + nxt[r, r]
                for r in range(m):
                    for s in range(m):
                        cur[r, s] = nxt[r, s]
                o[q, k] = -tr / k
            # last step: only the trace of M (cur + c I) is needed
            ck = o[q, m - 1]
            tr = 0.0
            for r in range(m):
                acc = M[q, r, r] * ck
                for t in range(m):
                    acc = acc + M[q, r, t] * cur[t, r]
                tr = tr + acc
            o[q, m] = -tr / m
    return out
