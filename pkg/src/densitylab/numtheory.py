"""Exact elementary number theory: sieves, factorization, Jacobi symbols,
CRT, and the constructive quadratic non-residue cover.

All arithmetic is on Python's unbounded integers.
"""

from dataclasses import dataclass
from math import gcd, isqrt, lcm

from . import kernels
from .errors import (
    BudgetExhaustedError,
    IncompatibleCongruencesError,
    NotCoprimeError,
    PerfectSquareError,
    VerificationFailureError,
)

# Witness bases making Miller-Rabin deterministic for n < 3.317e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (valid below 3.3e24)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sieve_primes(bound: int) -> list:
    """All primes <= bound, ascending."""
    return [int(p) for p in kernels.sieve_primes(bound)]


def factorize(n: int) -> dict:
    """Prime factorization of |n| as {p: e}; n must be nonzero.

    Trial division up to the square root, with a Miller-Rabin early exit
    once the remaining cofactor is prime. Adequate for desk-scale inputs.
    """
    if n == 0:
        raise ValueError("cannot factorize 0")
    n = abs(n)
    factors: dict = {}
    for p in (2, 3):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    i = 5
    while i * i <= n:
        if n > 1 and i % 30 == 5 and is_prime(n):
            break
        for cand in (i, i + 2):
            while n % cand == 0:
                factors[cand] = factors.get(cand, 0) + 1
                n //= cand
        i += 6
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def carmichael_lambda(m: int) -> int:
    """Carmichael function: exponent of the unit group mod m."""
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return 1
    result = 1
    for p, e in factorize(m).items():
        if p == 2:
            lam = 1 if e == 1 else (2 if e == 2 else 2 ** (e - 2))
        else:
            lam = (p - 1) * p ** (e - 1)
        result = lcm(result, lam)
    return result


def primorial(n: int) -> int:
    """Product of the first n primes (n >= 0)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    result = 1
    p = 2
    for _ in range(n):
        result *= p
        p = next_prime(p)
    return result


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    cand = n + 1
    if cand <= 2:
        return 2
    if cand % 2 == 0:
        cand += 1
    while not is_prime(cand):
        cand += 2
    return cand


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n, via reciprocity reduction."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"n must be an odd positive integer, got {n}")
    a %= n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def modulus_sequence(n: int) -> int:
    """lcm(1, 2, ..., n); divisible by every m <= n and non-decreasing in n."""
    if n < 1:
        raise ValueError("n must be positive")
    return lcm(*range(1, n + 1))


def crt(congruences) -> tuple:
    """Combine congruences [(r1, m1), (r2, m2), ...] into (r, lcm of moduli).

    Moduli need not be coprime; raises IncompatibleCongruencesError (with
    the first conflicting pair attached) when no solution exists.
    """
    congruences = list(congruences)
    if not congruences:
        return (0, 1)
    r0, m0 = congruences[0]
    if m0 <= 0:
        raise ValueError("moduli must be positive")
    r0 %= m0
    seen = [(r0, m0)]
    for r1, m1 in congruences[1:]:
        if m1 <= 0:
            raise ValueError("moduli must be positive")
        r1 %= m1
        g = gcd(m0, m1)
        if (r1 - r0) % g != 0:
            # find a conflicting original pair for the witness
            for prev in seen:
                gg = gcd(prev[1], m1)
                if (r1 - prev[0]) % gg != 0:
                    raise IncompatibleCongruencesError(prev, (r1, m1))
            raise IncompatibleCongruencesError((r0, m0), (r1, m1))
        l = m0 // g * m1
        diff = (r1 - r0) // g
        step = m0 // g
        inv = pow(m0 // g, -1, m1 // g) if m1 // g > 1 else 0
        t = (diff * inv) % (m1 // g) if m1 // g > 1 else 0
        r0 = (r0 + m0 * t) % l
        m0 = l
        seen.append((r1, m1))
    return (r0, m0)


@dataclass(frozen=True)
class SquarefreeDecomposition:
    """d = sign * 2**two_exp * odd_square_root**2 * squarefree_part."""

    d: int
    two_exp: int
    odd_square_root: int
    squarefree_part: int
    sign: int

    def recompose(self) -> int:
        return (
            self.sign
            * 2**self.two_exp
            * self.odd_square_root**2
            * self.squarefree_part
        )


def squarefree_decompose(d: int) -> SquarefreeDecomposition:
    """Split a nonzero integer into sign, power of two, odd square, and odd
    squarefree part."""
    if d == 0:
        raise ValueError("d must be nonzero")
    sign = 1 if d > 0 else -1
    n = abs(d)
    two_exp = 0
    while n % 2 == 0:
        n //= 2
        two_exp += 1
    t = 1
    u = 1
    for p, e in factorize(n).items() if n > 1 else []:
        t *= p ** (e // 2)
        if e % 2:
            u *= p
    return SquarefreeDecomposition(d, two_exp, t, u, sign)


@dataclass(frozen=True)
class NonResidueCover:
    """(modulus, residue) such that d is a quadratic non-residue modulo
    every odd prime p == residue (mod modulus) with p not dividing d."""

    d: int
    modulus: int
    residue: int


def primes_in_ap(r: int, m: int, count: int, search_bound: int) -> list:
    """First `count` primes p == r (mod m) with p <= search_bound, ascending."""
    if m < 1 or count < 1 or search_bound < 1:
        raise ValueError("m, count and search_bound must be positive")
    if gcd(r, m) != 1:
        raise NotCoprimeError(f"gcd({r}, {m}) != 1")
    found = []
    r %= m
    start = r if r > 0 else m
    for p in range(start, search_bound + 1, m):
        if is_prime(p):
            found.append(p)
            if len(found) == count:
                return found
    raise BudgetExhaustedError(
        f"only {len(found)} primes == {r} (mod {m}) below {search_bound}, "
        f"needed {count}"
    )


def _iter_primes_in_class(r: int, m: int):
    """Primes p == r (mod m), ascending, unbounded."""
    r %= m
    p = r if r > 0 else m
    while True:
        if is_prime(p):
            yield p
        p += m


def nonresidue_cover(d: int, verification_budget: int = 50) -> NonResidueCover:
    """Constructive (m, r) with (d/p) = -1 for every odd prime p == r (mod m)
    not dividing d; self-verified against the first few primes in the class.

    Construction: write d = sign * 2^k * t^2 * u with u odd squarefree.
    For u = 1 take (8, 5) when k is odd and (4, 3) when k is even (then the
    sign must be -1, or d would be a square); for u >= 3 pick residues r_i
    mod the prime factors q_i of u with (r_1/q_1) = -1 and (r_i/q_i) = 1,
    combine by CRT, and lift into the class 1 mod 8 by solving
    8s + 1 == r (mod u), yielding (8u, 8s + 1 mod 8u).
    """
    if verification_budget < 1:
        raise ValueError("verification_budget must be positive")
    if d > 0 and isqrt(d) ** 2 == d:
        raise PerfectSquareError(f"{d} is a perfect square")
    if d == 0:
        raise PerfectSquareError("0 is a perfect square")

    dec = squarefree_decompose(d)
    if dec.squarefree_part == 1:
        if dec.two_exp % 2 == 1:
            m, r = 8, 5
        else:
            # even power of two, square odd part: d non-square forces sign -1
            m, r = 4, 3
    else:
        u = dec.squarefree_part
        qs = sorted(factorize(u))
        q1 = qs[0]
        r1 = next(x for x in range(1, q1) if jacobi(x, q1) == -1)
        residue_mod_u, _ = crt([(r1, q1)] + [(1, q) for q in qs[1:]])
        s = (residue_mod_u - 1) * pow(8, -1, u) % u
        m = 8 * u
        r = (8 * s + 1) % m

    cover = NonResidueCover(d, m, r)
    verify_cover(cover, verification_budget)
    return cover


def verify_cover(cover: NonResidueCover, budget: int) -> None:
    """Check (d/p) = -1 for the first `budget` primes in the cover class
    (odd, not dividing d); raises VerificationFailureError on any violation."""
    checked = 0
    for p in _iter_primes_in_class(cover.residue, cover.modulus):
        if p == 2 or cover.d % p == 0:
            continue
        if jacobi(cover.d, p) != -1:
            raise VerificationFailureError(
                f"cover ({cover.modulus}, {cover.residue}) for d={cover.d} "
                f"violated at p={p}"
            )
        checked += 1
        if checked >= budget:
            return
