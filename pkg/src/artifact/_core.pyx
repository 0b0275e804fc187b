# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.  Semantics match ``artifact._pycore`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, M_PI, sqrt

cnp.import_array()


cdef inline long long _mod(long long a, long long d) nogil:
    cdef long long r = a % d
    return r + d if r < 0 else r


def gauss_sum(long long d, long long a, int m):
    """sum_b exp(2 pi i a b^m / d)."""
    cdef long long b, p, e
    cdef int j
    cdef double re = 0.0, im = 0.0, t
    for b in range(d):
        p = 1
        for j in range(m):
            p = (p * b) % d
        e = _mod(a * p, d)
        t = 2.0 * M_PI * e / d
        re += cos(t)
        im += sin(t)
    return complex(re, im)


def span_elements(long long d, gens):
    """All d**k integer combinations of the rows of ``gens`` (mod d)."""
    cdef cnp.int64_t[:, :] g = np.ascontiguousarray(gens, dtype=np.int64)
    cdef Py_ssize_t k = g.shape[0], w = g.shape[1]
    cdef Py_ssize_t total = 1, i, r, c
    for i in range(k):
        total *= d
    out = np.zeros((total, w), dtype=np.int64)
    cdef cnp.int64_t[:, :] o = out
    cdef long long q, digit, acc
    for r in range(total):
        for c in range(w):
            acc = 0
            q = r
            for i in range(k - 1, -1, -1):
                digit = q % d
                q = q // d
                acc += digit * g[i, c]
            o[r, c] = acc % d
    return out


def cubic_diff_counts(long long d, elems, coeffs):
    """Histogram over alpha of f(y) - f(x) for (x; y) in ``elems``."""
    cdef cnp.int64_t[:, :] e = np.ascontiguousarray(elems, dtype=np.int64)
    cdef cnp.int64_t[:] cf = np.ascontiguousarray(coeffs, dtype=np.int64)
    cdef long long c3 = _mod(cf[0], d), c2 = _mod(cf[1], d)
    cdef long long c1 = _mod(cf[2], d), c0 = _mod(cf[3], d)
    out = np.zeros(d, dtype=np.int64)
    cdef cnp.int64_t[:] o = out
    cdef Py_ssize_t r, j
    cdef long long u, s, fu
    with nogil:
        for r in range(e.shape[0]):
            s = 0
            for j in range(6):
                u = e[r, j]
                fu = (((c3 * u + c2) % d * u + c1) % d * u + c0) % d
                if j < 3:
                    s -= fu
                else:
                    s += fu
            o[_mod(s, d)] += 1
    return out


def sym_block(long long d, elems, sidx, swt, double[:, :] out, double scale=1.0):
    """Accumulate scale * B^T r(T) B into ``out``."""
    cdef cnp.int64_t[:, :] e = np.ascontiguousarray(elems, dtype=np.int64)
    cdef cnp.int64_t[:] si = np.ascontiguousarray(sidx, dtype=np.int64)
    cdef double[:] sw = np.ascontiguousarray(swt, dtype=np.float64)
    cdef Py_ssize_t r
    cdef long long xi, yi
    with nogil:
        for r in range(e.shape[0]):
            xi = (e[r, 0] * d + e[r, 1]) * d + e[r, 2]
            yi = (e[r, 3] * d + e[r, 4]) * d + e[r, 5]
            out[si[xi], si[yi]] += scale * sw[xi] * sw[yi]


def kappa_sum(elems, psi):
    """sum over (x; y) of psi(y1)psi(y2)psi(y3) conj(psi(x1)psi(x2)psi(x3))."""
    cdef cnp.int64_t[:, :] e = np.ascontiguousarray(elems, dtype=np.int64)
    cdef double complex[:] p = np.ascontiguousarray(psi, dtype=np.complex128)
    cdef Py_ssize_t r
    cdef double complex px, py, acc = 0
    for r in range(e.shape[0]):
        px = p[e[r, 0]] * p[e[r, 1]] * p[e[r, 2]]
        py = p[e[r, 3]] * p[e[r, 4]] * p[e[r, 5]]
        acc = acc + py * px.conjugate()
    return complex(acc)
