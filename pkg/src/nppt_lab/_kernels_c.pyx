# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; same contracts as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()


cdef unsigned char[:, ::1] _one_copy(Py_ssize_t d):
    """Single-copy survival table over (ij, kl) pairs."""
    out = np.zeros((d * d, d * d), dtype=np.uint8)
    cdef unsigned char[:, ::1] t = out
    cdef Py_ssize_t i, j, k, l
    for i in range(d):
        for j in range(d):
            for k in range(d):
                for l in range(d):
                    if (i == k and j == l) or (i == j and k == l):
                        t[i * d + j, k * d + l] = 1
    return t


cdef Py_ssize_t[:, ::1] _digits(Py_ssize_t size, Py_ssize_t dd, Py_ssize_t n):
    """Base-d^2 digits of every index, one per copy."""
    out = np.empty((size, n), dtype=np.intp)
    cdef Py_ssize_t[:, ::1] g = out
    cdef Py_ssize_t r, t, x
    for r in range(size):
        x = r
        for t in range(n):
            g[r, t] = x % dd
            x = x // dd
    return g


cdef inline bint _keep(const unsigned char[:, ::1] one, const Py_ssize_t[:, ::1] g,
                       Py_ssize_t r, Py_ssize_t c, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t t
    for t in range(n):
        if not one[g[r, t], g[c, t]]:
            return False
    return True


def pinch_mask(Py_ssize_t d, Py_ssize_t n):
    cdef Py_ssize_t size = 1, r, c, t
    for t in range(2 * n):
        size *= d
    cdef const unsigned char[:, ::1] one = _one_copy(d)
    cdef const Py_ssize_t[:, ::1] g = _digits(size, d * d, n)
    out = np.zeros((size, size), dtype=np.bool_)
    cdef unsigned char[:, ::1] mv = out.view(np.uint8)
    with nogil:
        for r in range(size):
            for c in range(size):
                if _keep(one, g, r, c, n):
                    mv[r, c] = 1
    return out


def pinch(matrix, Py_ssize_t d, Py_ssize_t n):
    src = np.ascontiguousarray(matrix, dtype=np.complex128)
    cdef const double complex[:, ::1] a = src
    out = np.zeros_like(src)
    cdef double complex[:, ::1] b = out
    cdef Py_ssize_t size = a.shape[0], r, c
    cdef const unsigned char[:, ::1] one = _one_copy(d)
    cdef const Py_ssize_t[:, ::1] g = _digits(size, d * d, n)
    with nogil:
        for r in range(size):
            for c in range(size):
                if _keep(one, g, r, c, n):
                    b[r, c] = a[r, c]
    return out


def off_pattern_max(matrix, Py_ssize_t d, Py_ssize_t n):
    src = np.ascontiguousarray(matrix, dtype=np.complex128)
    cdef const double complex[:, ::1] a = src
    cdef Py_ssize_t size = a.shape[0], r, c
    cdef double worst = 0.0, v
    cdef const unsigned char[:, ::1] one = _one_copy(d)
    cdef const Py_ssize_t[:, ::1] g = _digits(size, d * d, n)
    with nogil:
        for r in range(size):
            for c in range(size):
                if not _keep(one, g, r, c, n):
                    v = sqrt(a[r, c].real * a[r, c].real + a[r, c].imag * a[r, c].imag)
                    if v > worst:
                        worst = v
    return worst


def type2_extremes(dn, wn, m):
    cdef const double[::1] dv = np.ascontiguousarray(dn, dtype=np.float64)
    cdef const double complex[:, ::1] w = np.ascontiguousarray(wn, dtype=np.complex128)
    cdef const double complex[:, ::1] mm = np.ascontiguousarray(m, dtype=np.complex128)
    cdef Py_ssize_t d = mm.shape[0], big = dv.shape[0]
    cdef Py_ssize_t i, j, p1, p2
    cdef Py_ssize_t a1 = -1, a2 = -1, ai = -1, aj = -1
    cdef double lo = np.inf, hi = -np.inf
    cdef double p, q, mid, half, cr, ci, rad, mii, mjj
    cdef double complex mij, c
    with nogil:
        for i in range(d):
            for j in range(d):
                if i == j:
                    continue
                mii = mm[i, i].real
                mjj = mm[j, j].real
                mij = mm[i, j]
                for p1 in range(big):
                    for p2 in range(big):
                        p = dv[p1] * mii
                        q = dv[p2] * mjj
                        c = w[p1, p2] * mij
                        cr = c.real
                        ci = c.imag
                        mid = 0.5 * (p + q)
                        half = 0.5 * (p - q)
                        rad = sqrt(half * half + (cr * cr + ci * ci))
                        if mid - rad < lo:
                            lo = mid - rad
                            a1 = p1
                            a2 = p2
                            ai = i
                            aj = j
                        if mid + rad > hi:
                            hi = mid + rad
    arg = None if a1 < 0 else (a1, a2, ai, aj)
    return lo, hi, arg
