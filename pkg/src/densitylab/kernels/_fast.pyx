# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel twin of densitylab.kernels.pure (same API, C loops)."""

import numpy as np

BACKEND_NAME = "fast"


def sieve_primes(long long limit):
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    cdef unsigned char[::1] is_comp = np.zeros(limit + 1, dtype=np.uint8)
    cdef long long p, q, count = 0
    for p in range(2, limit + 1):
        if not is_comp[p]:
            count += 1
            if p * p <= limit:
                q = p * p
                while q <= limit:
                    is_comp[q] = 1
                    q += p
    out = np.empty(count, dtype=np.int64)
    cdef long long[::1] ov = out
    cdef long long i = 0
    for p in range(2, limit + 1):
        if not is_comp[p]:
            ov[i] = p
            i += 1
    return out


def least_prime_factor(long long limit):
    out = np.zeros(limit + 1, dtype=np.int64)
    cdef long long[::1] lpf = out
    cdef long long p, q
    for p in range(2, limit + 1):
        if lpf[p] == 0:
            lpf[p] = p
            if p * p <= limit:
                q = p * p
                while q <= limit:
                    if lpf[q] == 0:
                        lpf[q] = p
                    q += p
    return out


def bigomega_sieve(long long limit):
    out = np.zeros(limit + 1, dtype=np.int64)
    cdef long long[::1] omega = out
    cdef long long[::1] lpf = least_prime_factor(limit)
    cdef long long i, n
    for i in range(2, limit + 1):
        n = i
        while n > 1:
            omega[i] += 1
            n //= lpf[n]
    return out


def quadform_residues_mod(long long a, long long b, long long c, long long m):
    cdef unsigned char[::1] hit = np.zeros(m, dtype=np.uint8)
    cdef long long x, y, ax2, bx, v
    # C remainder is negative for negative operands: normalize first
    a = a % m + (m if a % m < 0 else 0)
    b = b % m + (m if b % m < 0 else 0)
    c = c % m + (m if c % m < 0 else 0)
    for x in range(m):
        ax2 = (a * x % m) * x % m
        bx = b * x % m
        for y in range(m):
            v = (ax2 + bx * y + (c * y % m) * y) % m
            hit[v] = 1
    cdef long long count = 0
    for x in range(m):
        if hit[x]:
            count += 1
    out = np.empty(count, dtype=np.int64)
    cdef long long[::1] ov = out
    cdef long long i = 0
    for x in range(m):
        if hit[x]:
            ov[i] = x
            i += 1
    return out


def quadform_prime_square_count(long long a, long long b, long long c, long long p):
    """Exact residue count of the form mod p^2 via the Hensel fiber structure."""
    cdef long long p2 = p * p
    cdef unsigned char[::1] full_cls = np.zeros(p, dtype=np.uint8)
    singles = set()
    cdef long long x0, y0, q0, alpha, beta
    # C remainder is negative for negative operands: normalize first
    a = a % p2 + (p2 if a % p2 < 0 else 0)
    b = b % p2 + (p2 if b % p2 < 0 else 0)
    c = c % p2 + (p2 if c % p2 < 0 else 0)
    for x0 in range(p):
        for y0 in range(p):
            q0 = (((a * x0) % p2) * x0 + ((b * x0) % p2) * y0 + ((c * y0) % p2) * y0) % p2
            alpha = (2 * a * x0 + b * y0) % p
            beta = (b * x0 + 2 * c * y0) % p
            if alpha != 0 or beta != 0:
                full_cls[q0 % p] = 1
            else:
                singles.add(q0)
    cdef long long nfull = 0
    for x0 in range(p):
        if full_cls[x0]:
            nfull += 1
    cdef long long extra = 0
    for s in singles:
        if not full_cls[s % p]:
            extra += 1
    return p * nfull + extra


def poly_residues_mod(coeffs, long long m):
    cdef long long[::1] cs = np.array(
        [c % m for c in reversed(list(coeffs))], dtype=np.int64
    )
    cdef unsigned char[::1] hit = np.zeros(m, dtype=np.uint8)
    cdef long long x, v
    cdef Py_ssize_t i, k = cs.shape[0]
    for x in range(m):
        v = 0
        for i in range(k):
            v = (v * x + cs[i]) % m
        hit[v] = 1
    cdef long long count = 0
    for x in range(m):
        if hit[x]:
            count += 1
    out = np.empty(count, dtype=np.int64)
    cdef long long[::1] ov = out
    cdef long long j = 0
    for x in range(m):
        if hit[x]:
            ov[j] = x
            j += 1
    return out


def window_max_count(members, long long n):
    arr = np.ascontiguousarray(members, dtype=np.int64)
    cdef long long[::1] a = arr
    cdef Py_ssize_t size = a.shape[0]
    if size == 0:
        return 0
    cdef Py_ssize_t lo = 0, hi = 0
    cdef long long best = 0
    for lo in range(size):
        if hi < lo:
            hi = lo
        while hi < size and a[hi] < a[lo] + n:
            hi += 1
        if hi - lo > best:
            best = hi - lo
    return int(best)


def mult_table_count(long long n, long long ratio):
    cdef unsigned char[::1] seen = np.zeros(n + 1, dtype=np.uint8)
    cdef long long x, y, ymax, v
    x = 1
    while x * x <= n:
        ymax = ratio * x
        if ymax > n // x:
            ymax = n // x
        v = x * x
        y = x
        while y <= ymax:
            seen[v] = 1
            v += x
            y += 1
        x += 1
    cdef long long count = 0
    for x in range(1, n + 1):
        if seen[x]:
            count += 1
    return int(count)


def sum_two_squares_indicator(long long limit):
    out = np.zeros(limit + 1, dtype=bool)
    cdef unsigned char[::1] ind = out.view(np.uint8)
    cdef long long x, y, v
    x = 0
    while x * x <= limit:
        y = 0
        v = x * x
        while v <= limit:
            ind[v] = 1
            y += 1
            v = x * x + y * y
        x += 1
    return out


def sumset_cover_missing(ind):
    arr = np.ascontiguousarray(ind, dtype=np.uint8)
    cdef unsigned char[::1] a = arr
    cdef Py_ssize_t size = a.shape[0]
    cdef Py_ssize_t t, s
    cdef bint covered
    for t in range(size):
        covered = False
        for s in range(t // 2 + 1):
            if a[s] and a[t - s]:
                covered = True
                break
        if not covered:
            return t
    return -1
