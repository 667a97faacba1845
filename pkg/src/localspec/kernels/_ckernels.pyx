# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: sweep prefixes and exhaustive cut enumeration."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def sweep_prefixes(const cnp.int64_t[::1] order,
                   const cnp.int32_t[::1] indptr,
                   const cnp.int32_t[::1] indices,
                   const double[::1] weights,
                   const double[::1] degrees):
    """Volume and cut weight of every proper prefix of ``order``."""
    cdef Py_ssize_t n = order.shape[0]
    cdef Py_ssize_t k, j, v
    cdef double vol = 0.0, cut = 0.0, inside
    cdef cnp.int8_t[::1] taken = np.zeros(n, dtype=np.int8)
    vols = np.empty(max(n - 1, 0), dtype=np.float64)
    cuts = np.empty(max(n - 1, 0), dtype=np.float64)
    cdef double[::1] vv = vols
    cdef double[::1] cc = cuts

    for k in range(n - 1):
        v = order[k]
        inside = 0.0
        for j in range(indptr[v], indptr[v + 1]):
            if taken[indices[j]]:
                inside += weights[j]
        taken[v] = 1
        vol += degrees[v]
        cut += degrees[v] - 2.0 * inside
        vv[k] = vol
        cc[k] = cut
    return vols, cuts


def enumerate_cuts(const cnp.int32_t[::1] indptr,
                   const cnp.int32_t[::1] indices,
                   const double[::1] weights,
                   const double[::1] degrees):
    """Volume and cut weight of every subset, indexed by bitmask.

    A mask whose highest set bit is ``v`` extends ``mask ^ (1 << v)`` by one
    node, so each entry costs one adjacency scan.
    """
    cdef Py_ssize_t n = degrees.shape[0]
    cdef Py_ssize_t total = (<Py_ssize_t>1) << n
    cdef Py_ssize_t mask, base, v, j, u
    cdef double inside
    vols = np.zeros(total, dtype=np.float64)
    cuts = np.zeros(total, dtype=np.float64)
    cdef double[::1] vv = vols
    cdef double[::1] cc = cuts

    for v in range(n):
        base = (<Py_ssize_t>1) << v
        for mask in range(base, base << 1):
            inside = 0.0
            for j in range(indptr[v], indptr[v + 1]):
                u = indices[j]
                if u < v and (mask >> u) & 1:
                    inside += weights[j]
            vv[mask] = vv[mask - base] + degrees[v]
            cc[mask] = cc[mask - base] + degrees[v] - 2.0 * inside
    return vols, cuts
