"""Pure-Python (numpy-vectorized) kernel implementations.

This module is the fallback twin of the compiled extension
``densitylab.kernels._fast``; both expose the same functions with the same
semantics, and the test suite runs them against each other.
"""

from math import isqrt

import numpy as np

BACKEND_NAME = "pure"


def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit, ascending, as an int64 array."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.nonzero(is_prime)[0].astype(np.int64)


def least_prime_factor(limit: int) -> np.ndarray:
    """lpf[i] = least prime factor of i for 2 <= i <= limit; lpf[0] = lpf[1] = 0."""
    lpf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, isqrt(limit) + 1):
        if lpf[p] == 0:
            sl = lpf[p * p :: p]
            sl[sl == 0] = p
            lpf[p] = p
    rest = np.nonzero(lpf == 0)[0]
    lpf[rest] = rest
    if limit >= 1:
        lpf[0] = 0
        lpf[1] = 0
    return lpf


def bigomega_sieve(limit: int) -> np.ndarray:
    """omega[i] = number of prime factors of i counted with multiplicity."""
    omega = np.zeros(limit + 1, dtype=np.int64)
    for p in sieve_primes(limit):
        q = int(p)
        while q <= limit:
            omega[q::q] += 1
            q *= int(p)
    return omega


def quadform_residues_mod(a: int, b: int, c: int, m: int) -> np.ndarray:
    """Sorted residues of a*x^2 + b*x*y + c*y^2 mod m over x, y in [0, m)."""
    x = np.arange(m, dtype=np.int64)
    xx = (a % m) * ((x * x) % m) % m
    cc = (c % m) * ((x * x) % m) % m
    vals = (xx[:, None] + ((b % m) * np.outer(x, x)) % m + cc[None, :]) % m
    return np.unique(vals.ravel())


def quadform_prime_square_count(a: int, b: int, c: int, p: int) -> int:
    """Exact number of residues of a*x^2 + b*x*y + c*y^2 mod p^2 (p prime).

    Uses the fiber structure over base pairs (x0, y0) mod p: lifting by
    (p*x1, p*y1) shifts the value by p*(alpha*x1 + beta*y1) mod p^2 with
    alpha = 2a*x0 + b*y0 and beta = b*x0 + 2c*y0, so a base pair with
    (alpha, beta) != (0, 0) mod p hits its whole mod-p class, while a
    degenerate pair contributes a single residue mod p^2. O(p^2) work.
    """
    p2 = p * p
    x = np.arange(p, dtype=np.int64)
    x0 = x[:, None]
    y0 = x[None, :]
    q0 = (a * x0 * x0 + b * x0 * y0 + c * y0 * y0) % p2
    alpha = (2 * a * x0 + b * y0) % p
    beta = (b * x0 + 2 * c * y0) % p
    nondeg = (alpha != 0) | (beta != 0)
    full_classes = np.unique(q0[nondeg] % p)
    singles = np.unique(q0[~nondeg])
    extra = np.count_nonzero(~np.isin(singles % p, full_classes))
    return p * len(full_classes) + extra


def poly_residues_mod(coeffs, m: int) -> np.ndarray:
    """Sorted residues of F(x) mod m over x in [0, m).

    ``coeffs`` is (c0, c1, ..., cd) with F(x) = sum c_i x^i.
    """
    x = np.arange(m, dtype=np.int64)
    vals = np.zeros(m, dtype=np.int64)
    for c in reversed(coeffs):
        vals = (vals * x + c % m) % m
    return np.unique(vals)


def window_max_count(members: np.ndarray, n: int) -> int:
    """Max number of elements of the sorted array inside any window of n
    consecutive integers."""
    if len(members) == 0:
        return 0
    members = np.asarray(members, dtype=np.int64)
    hi = np.searchsorted(members, members + n, side="left")
    return int((hi - np.arange(len(members))).max())


def mult_table_count(n: int, ratio: int) -> int:
    """|{x*y : 1 <= x <= y <= ratio*x and x*y <= n}| (distinct products)."""
    seen = np.zeros(n + 1, dtype=bool)
    for x in range(1, isqrt(n) + 1):
        ymax = min(ratio * x, n // x)
        if ymax >= x:
            seen[x * x : x * ymax + 1 : x] = True
    return int(np.count_nonzero(seen[1:]))


def sum_two_squares_indicator(limit: int) -> np.ndarray:
    """Bool array ind[t] = (t = x^2 + y^2 for some x, y >= 0), 0 <= t <= limit."""
    ind = np.zeros(limit + 1, dtype=bool)
    for x in range(isqrt(limit) + 1):
        rem = limit - x * x
        ys = np.arange(isqrt(rem) + 1, dtype=np.int64)
        ind[x * x + ys * ys] = True
    return ind


def sumset_cover_missing(ind: np.ndarray) -> int:
    """First t not representable as s + s' with ind[s] and ind[s'], else -1."""
    ind = np.asarray(ind, dtype=bool)
    for t in range(len(ind)):
        a = ind[: t + 1]
        if not np.any(a & a[::-1]):
            return t
    return -1
