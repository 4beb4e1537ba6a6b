# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled mod-p matrix kernels.

Same contract as quivertilt.kernels._pure; see that module for the
documented reference semantics.
"""

from libc.stdlib cimport free, malloc


cdef inline long long pow_mod(long long base, long long exp, long long p):
    cdef long long acc = 1
    base %= p
    while exp > 0:
        if exp & 1:
            acc = acc * base % p
        base = base * base % p
        exp >>= 1
    return acc


def mat_mul(long long p, Py_ssize_t m, Py_ssize_t n, Py_ssize_t k, a, b):
    cdef Py_ssize_t i, j, t
    cdef long long x
    cdef long long *ca = <long long *> malloc(m * n * sizeof(long long))
    cdef long long *cb = <long long *> malloc(n * k * sizeof(long long))
    cdef long long *co = <long long *> malloc(m * k * sizeof(long long))
    if ca == NULL or cb == NULL or co == NULL:
        free(ca)
        free(cb)
        free(co)
        raise MemoryError()
    try:
        for i in range(m * n):
            ca[i] = a[i]
        for i in range(n * k):
            cb[i] = b[i]
        for i in range(m * k):
            co[i] = 0
        for i in range(m):
            for t in range(n):
                x = ca[i * n + t]
                if x == 0:
                    continue
                for j in range(k):
                    co[i * k + j] += x * cb[t * k + j]
            for j in range(k):
                co[i * k + j] %= p
        return [co[i] for i in range(m * k)]
    finally:
        free(ca)
        free(cb)
        free(co)


def rref(long long p, Py_ssize_t rows, Py_ssize_t cols, data):
    cdef Py_ssize_t i, j, c, r, pr
    cdef long long x, inv
    cdef long long *a = <long long *> malloc(rows * cols * sizeof(long long))
    if a == NULL and rows * cols > 0:
        raise MemoryError()
    pivots = []
    try:
        for i in range(rows * cols):
            a[i] = data[i]
        r = 0
        for c in range(cols):
            if r == rows:
                break
            pr = -1
            for i in range(r, rows):
                if a[i * cols + c] != 0:
                    pr = i
                    break
            if pr < 0:
                continue
            if pr != r:
                for j in range(cols):
                    x = a[r * cols + j]
                    a[r * cols + j] = a[pr * cols + j]
                    a[pr * cols + j] = x
            inv = pow_mod(a[r * cols + c], p - 2, p)
            if inv != 1:
                for j in range(c, cols):
                    a[r * cols + j] = a[r * cols + j] * inv % p
            for i in range(rows):
                if i == r:
                    continue
                x = a[i * cols + c]
                if x == 0:
                    continue
                for j in range(c, cols):
                    a[i * cols + j] = (a[i * cols + j] - x * a[r * cols + j]) % p
                    if a[i * cols + j] < 0:
                        a[i * cols + j] += p
            pivots.append(c)
            r += 1
        return [a[i] for i in range(rows * cols)], pivots
    finally:
        free(a)
