# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled batch kernels: Green-potential superposition and the exact
fractional maximal function of a discrete measure.  Mirrors core._pure."""

import numpy as np

cimport cython
from libc.math cimport INFINITY, pow, sqrt
from libc.stdlib cimport qsort


cdef struct Pair:
    double d
    double w


cdef int _pair_cmp(const void* pa, const void* pb) noexcept nogil:
    cdef double da = (<const Pair*> pa).d
    cdef double db = (<const Pair*> pb).d
    if da < db:
        return -1
    if da > db:
        return 1
    return 0


def green_potential_batch(points, atoms, masses, double r_const):
    points = np.ascontiguousarray(points, dtype=np.float64)
    atoms = np.ascontiguousarray(atoms, dtype=np.float64)
    masses = np.ascontiguousarray(masses, dtype=np.float64)
    cdef double[:, ::1] p = points
    cdef double[:, ::1] a = atoms
    cdef double[::1] w = masses
    cdef Py_ssize_t k = p.shape[0], m = a.shape[0], n = p.shape[1]
    out = np.zeros(k)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j, c
    cdef double d2, dr2, diff, acc, half_expo = 0.5 * (2.0 - n)
    for i in range(k):
        acc = 0.0
        for j in range(m):
            d2 = 0.0
            dr2 = 0.0
            for c in range(n - 1):
                diff = p[i, c] - a[j, c]
                d2 += diff * diff
            dr2 = d2
            diff = p[i, n - 1] - a[j, n - 1]
            d2 += diff * diff
            diff = p[i, n - 1] + a[j, n - 1]
            dr2 += diff * diff
            acc += w[j] * (pow(d2, half_expo) - pow(dr2, half_expo))
        o[i] = -r_const * acc
    return out


def maximal_batch(points, atoms, masses, double beta):
    points = np.ascontiguousarray(points, dtype=np.float64)
    atoms = np.ascontiguousarray(atoms, dtype=np.float64)
    masses = np.ascontiguousarray(masses, dtype=np.float64)
    cdef double[:, ::1] p = points
    cdef double[:, ::1] a = atoms
    cdef double[::1] w = masses
    cdef Py_ssize_t k = p.shape[0], m = a.shape[0], n = p.shape[1]
    out = np.zeros(k)
    cdef double[::1] o = out
    if m == 0:
        return out
    cdef double total = 0.0
    cdef Py_ssize_t i, j, c
    for j in range(m):
        total += w[j]
    if beta == 0.0:
        out[:] = total
        return out
    buf = np.empty(2 * m)
    cdef double[::1] pb = buf
    cdef Pair* pairs = <Pair*> &pb[0]
    cdef double d2, diff, cum, val, best
    for i in range(k):
        for j in range(m):
            d2 = 0.0
            for c in range(n):
                diff = p[i, c] - a[j, c]
                d2 += diff * diff
            pairs[j].d = sqrt(d2)
            pairs[j].w = w[j]
        qsort(pairs, m, sizeof(Pair), _pair_cmp)
        if pairs[0].d == 0.0:
            o[i] = INFINITY
            continue
        cum = 0.0
        best = 0.0
        for j in range(m):
            cum += pairs[j].w
            val = cum / pow(pairs[j].d, beta)
            if val > best:
                best = val
        o[i] = best
    return out
