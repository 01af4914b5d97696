# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Fincke-Pohst enumeration.

Pruning runs in double precision with a widened radius; every candidate leaf
is accepted only after an exact int64 evaluation of x^T G x, so the output
equals the exact enumeration as long as the slack covers the rounding error.
"""
import numpy as np
from libc.math cimport sqrt, ceil, floor


class CellLimitExceeded(Exception):
    pass


def enumerate_short(long long[:, ::1] gram, long long bound, double[::1] d,
                    double[:, ::1] mu, long long cell_limit=100000000):
    """Nonzero integer x with x^T G x <= bound; ``d``/``mu`` from an LDL^T of G."""
    cdef Py_ssize_t n = gram.shape[0]
    cdef Py_ssize_t i, j, k
    cdef long long nodes = 0
    cdef long long norm, acc
    cdef double slack = 1e-9 * (1.0 + <double>bound)
    cdef long long[::1] x = np.zeros(n, dtype=np.int64)
    cdef long long[::1] hi = np.zeros(n, dtype=np.int64)
    cdef double[::1] rem = np.zeros(n + 1, dtype=np.float64)
    cdef double[::1] c = np.zeros(n, dtype=np.float64)
    cdef double r, t
    cdef bint nonzero
    out = []

    rem[n] = <double>bound + slack
    i = n - 1
    # set up level i
    c[i] = 0.0
    r = rem[i + 1] / d[i]
    if r < 0:
        return out
    r = sqrt(r) + slack
    x[i] = <long long>ceil(c[i] - r)
    hi[i] = <long long>floor(c[i] + r)
    while True:
        if x[i] > hi[i]:
            # exhausted this level, go up
            x[i] = 0
            i += 1
            if i >= n:
                break
            x[i] += 1
            continue
        nodes += 1
        if nodes > cell_limit:
            raise CellLimitExceeded(f"more than {cell_limit} search nodes")
        t = <double>x[i] - c[i]
        rem[i] = rem[i + 1] - d[i] * t * t
        if rem[i] < -slack:
            x[i] += 1
            continue
        if i == 0:
            nonzero = False
            for k in range(n):
                if x[k] != 0:
                    nonzero = True
                    break
            if nonzero:
                norm = 0
                for k in range(n):
                    if x[k] == 0:
                        continue
                    acc = 0
                    for j in range(n):
                        acc += gram[k, j] * x[j]
                    norm += x[k] * acc
                if norm <= bound:
                    out.append(tuple([x[k] for k in range(n)]))
            x[i] += 1
            continue
        # descend
        i -= 1
        t = 0.0
        for j in range(i + 1, n):
            t -= mu[j, i] * <double>x[j]
        c[i] = t
        r = rem[i + 1] / d[i]
        if r < 0:
            r = 0.0
        r = sqrt(r) + slack
        x[i] = <long long>ceil(c[i] - r)
        hi[i] = <long long>floor(c[i] + r)
    return out
