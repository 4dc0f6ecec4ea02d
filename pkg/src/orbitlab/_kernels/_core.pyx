# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: dense orbit iteration and net-cover counting."""

from libc.math cimport sqrt, isfinite

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


def orbit_norms(mat, vec, int n_steps, double exit_low, double exit_high):
    """Norms of vec, M vec, M^2 vec, ... with early exit outside (exit_low, exit_high)."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] m = \
        np.ascontiguousarray(mat, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] v = np.array(vec, dtype=np.complex128)
    cdef Py_ssize_t d = v.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] w = np.empty(d, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] norms = np.empty(n_steps + 1, dtype=np.float64)

    cdef Py_ssize_t i, j, n, last
    cdef double acc
    cdef double complex s

    acc = 0.0
    for i in range(d):
        acc += v[i].real * v[i].real + v[i].imag * v[i].imag
    norms[0] = sqrt(acc)
    last = 0
    for n in range(1, n_steps + 1):
        for i in range(d):
            s = 0
            for j in range(d):
                s = s + m[i, j] * v[j]
            w[i] = s
        acc = 0.0
        for i in range(d):
            acc += w[i].real * w[i].real + w[i].imag * w[i].imag
        v, w = w, v
        norms[n] = sqrt(acc)
        last = n
        if norms[n] < exit_low or norms[n] > exit_high or not isfinite(norms[n]):
            break
    return norms[: last + 1]


def orbit_points(mat, vec, int n_steps):
    """The full orbit as rows: out[n] = M^n vec, n = 0..n_steps."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] m = \
        np.ascontiguousarray(mat, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] v = np.array(vec, dtype=np.complex128)
    cdef Py_ssize_t d = v.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] out = \
        np.empty((n_steps + 1, d), dtype=np.complex128)

    cdef Py_ssize_t i, j, n
    cdef double complex s

    for i in range(d):
        out[0, i] = v[i]
    for n in range(1, n_steps + 1):
        for i in range(d):
            s = 0
            for j in range(d):
                s = s + m[i, j] * out[n - 1, j]
            out[n, i] = s
    return out


def uncovered_count(targets, points, double eps):
    """How many target rows have no point row within distance eps."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] t = \
        np.ascontiguousarray(targets, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] p = \
        np.ascontiguousarray(points, dtype=np.complex128)
    cdef Py_ssize_t m = t.shape[0], k = p.shape[0], d = t.shape[1]
    if m == 0:
        return 0
    if k == 0:
        return m

    cdef double eps2 = eps * eps
    cdef Py_ssize_t i, j, c, misses
    cdef double acc, dr, di
    cdef bint covered

    misses = 0
    for i in range(m):
        covered = False
        for j in range(k):
            acc = 0.0
            for c in range(d):
                dr = p[j, c].real - t[i, c].real
                di = p[j, c].imag - t[i, c].imag
                acc += dr * dr + di * di
                if acc > eps2:
                    break
            if acc <= eps2:
                covered = True
                break
        if not covered:
            misses += 1
    return misses
