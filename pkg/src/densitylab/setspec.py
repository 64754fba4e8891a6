"""Algebra of integer-set descriptions.

A SetSpec pairs an ambient (the non-negative integers "N" or all integers
"Z") with a node describing the set. Every node supplies a membership test,
bounded enumeration (the brute-force oracle used in tests) and a residue-hit
oracle ``hits(m)`` returning the residues h mod m met by the set, flagged
exact or search-bounded. Search-bounded hit sets never contain false
positives; they may miss residues whose witnesses lie above the bound.
"""

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt, lcm

from . import kernels
from .errors import NotAPUnionError
from .numtheory import carmichael_lambda, crt, factorize, is_prime

AMBIENT_N = "N"
AMBIENT_Z = "Z"

# default element-search bounds for the oracles that are not residue-determined
OMEGA_SEARCH_BOUND = 10**6
PRIME_PREIMAGE_SEARCH_BOUND = 10**4
DIGIT_SEARCH_BOUND = 10**5


@dataclass(frozen=True)
class HitSet:
    """Residues mod `modulus` met by a set; exact or witnessed-below-a-bound."""

    modulus: int
    residues: frozenset
    exact: bool
    element_bound: int | None = None


def _exact(m, residues):
    return HitSet(m, frozenset(int(r) % m for r in residues), True)

def _bounded(m, residues, bound):
    return HitSet(m, frozenset(int(r) % m for r in residues), False, bound)


def _in_ambient(x, ambient):
    return x >= 0 if ambient == AMBIENT_N else True


def _int_nth_root(n, k):
    """Floor of the k-th root of n >= 0."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n in (0, 1) or k == 1:
        return n
    r = int(round(n ** (1.0 / k)))
    while r > 0 and r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


class Node:
    """Base class for set-description nodes."""

    def hits(self, m, ambient, search_bound=None):
        raise NotImplementedError

    def member(self, x, ambient):
        raise NotImplementedError

    def members_upto(self, bound, ambient):
        """Sorted list of all members x with |x| <= bound."""
        raise NotImplementedError

    def hit_count(self, m, ambient, search_bound=None):
        """(count, exact) shortcut; overridden where counting beats listing."""
        hs = self.hits(m, ambient, search_bound)
        return len(hs.residues), hs.exact


@dataclass(frozen=True)
class Finite(Node):
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(sorted(set(self.values))))

    def _vals(self, ambient):
        return [v for v in self.values if _in_ambient(v, ambient)]

    def hits(self, m, ambient, search_bound=None):
        return _exact(m, {v % m for v in self._vals(ambient)})

    def member(self, x, ambient):
        return x in self.values and _in_ambient(x, ambient)

    def members_upto(self, bound, ambient):
        return [v for v in self._vals(ambient) if abs(v) <= bound]


@dataclass(frozen=True)
class AP(Node):
    """Arithmetic progression {step*x + offset : x in H}."""

    step: int
    offset: int

    def __post_init__(self):
        if self.step < 1 or self.offset < 0:
            raise ValueError("AP requires step >= 1 and offset >= 0")

    def hits(self, m, ambient, search_bound=None):
        g = gcd(self.step, m)
        return _exact(m, {(self.offset + g * j) % m for j in range(m // g)})

    def member(self, x, ambient):
        if (x - self.offset) % self.step != 0:
            return False
        if ambient == AMBIENT_N:
            return x >= self.offset
        return True

    def members_upto(self, bound, ambient):
        out = list(range(self.offset, bound + 1, self.step))
        if ambient == AMBIENT_Z:
            lo = self.offset - self.step
            neg = list(range(lo, -bound - 1, -self.step))
            out = sorted(v for v in neg if abs(v) <= bound) + out
        return out


@dataclass(frozen=True)
class UnionOf(Node):
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise ValueError("UnionOf requires at least one part")

    def hits(self, m, ambient, search_bound=None):
        residues = set()
        exact = True
        bound = None
        for part in self.parts:
            hs = part.hits(m, ambient, search_bound)
            residues |= hs.residues
            if not hs.exact:
                exact = False
                bound = hs.element_bound if bound is None else min(bound, hs.element_bound)
        if exact:
            return _exact(m, residues)
        return _bounded(m, residues, bound)

    def member(self, x, ambient):
        return any(p.member(x, ambient) for p in self.parts)

    def members_upto(self, bound, ambient):
        out = set()
        for p in self.parts:
            out.update(p.members_upto(bound, ambient))
        return sorted(out)


@dataclass(frozen=True)
class AffineImage(Node):
    """{scale*y + shift : y in inner}, intersected with the ambient."""

    scale: int
    shift: int
    inner: Node

    def __post_init__(self):
        if self.scale == 0:
            raise ValueError("scale must be nonzero")

    def hits(self, m, ambient, search_bound=None):
        hs = self.inner.hits(m, ambient, search_bound)
        residues = {(self.scale * c + self.shift) % m for c in hs.residues}
        if hs.exact:
            return _exact(m, residues)
        return _bounded(m, residues, hs.element_bound)

    def member(self, x, ambient):
        if not _in_ambient(x, ambient):
            return False
        q, r = divmod(x - self.shift, self.scale)
        if r != 0:
            return False
        return self.inner.member(q, ambient)

    def members_upto(self, bound, ambient):
        inner_bound = (bound + abs(self.shift)) // abs(self.scale) + 1
        out = []
        for y in self.inner.members_upto(inner_bound, ambient):
            v = self.scale * y + self.shift
            if abs(v) <= bound and _in_ambient(v, ambient):
                out.append(v)
        return sorted(set(out))


@dataclass(frozen=True)
class IntersectAP(Node):
    """inner intersected with the progression step*H + offset."""

    inner: Node
    step: int
    offset: int

    def __post_init__(self):
        if self.step < 1 or self.offset < 0:
            raise ValueError("IntersectAP requires step >= 1 and offset >= 0")

    def hits(self, m, ambient, search_bound=None):
        big = lcm(m, self.step)
        hs = self.inner.hits(big, ambient, search_bound)
        residues = {c % m for c in hs.residues if c % self.step == self.offset % self.step}
        if hs.exact:
            return _exact(m, residues)
        return _bounded(m, residues, hs.element_bound)

    def member(self, x, ambient):
        if (x - self.offset) % self.step != 0:
            return False
        if ambient == AMBIENT_N and x < self.offset:
            return False
        return self.inner.member(x, ambient)

    def members_upto(self, bound, ambient):
        return [x for x in self.inner.members_upto(bound, ambient) if self.member(x, ambient)]


def _poly_eval(coeffs, x):
    v = 0
    for c in reversed(coeffs):
        v = v * x + c
    return v


def _normalize_coeffs(coeffs):
    coeffs = tuple(int(c) for c in coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    if not coeffs:
        coeffs = (0,)
    return coeffs


def _poly_arg_bound(coeffs, value_bound):
    """R such that |x| > R implies |F(x)| > value_bound (degree >= 1)."""
    lead = abs(coeffs[-1])
    s = sum(abs(c) for c in coeffs[:-1])
    return (value_bound + s) // lead + 2


@dataclass(frozen=True)
class PolyImage(Node):
    """{F(x) : x in H} intersected with the ambient; F given by coeffs
    (c0, c1, ..., cd)."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _normalize_coeffs(self.coeffs))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def hits(self, m, ambient, search_bound=None):
        return _exact(m, kernels.poly_residues_mod(self.coeffs, m))

    def member(self, x, ambient):
        if not _in_ambient(x, ambient):
            return False
        if self.degree == 0:
            return x == self.coeffs[0]
        r = _poly_arg_bound(self.coeffs, abs(x))
        lo = 0 if ambient == AMBIENT_N else -r
        return any(_poly_eval(self.coeffs, t) == x for t in range(lo, r + 1))

    def members_upto(self, bound, ambient):
        if self.degree == 0:
            v = self.coeffs[0]
            return [v] if abs(v) <= bound and _in_ambient(v, ambient) else []
        r = _poly_arg_bound(self.coeffs, bound)
        lo = 0 if ambient == AMBIENT_N else -r
        out = set()
        for t in range(lo, r + 1):
            v = _poly_eval(self.coeffs, t)
            if abs(v) <= bound and _in_ambient(v, ambient):
                out.add(v)
        return sorted(out)


@dataclass(frozen=True)
class PolyPrimePreimage(Node):
    """{k in H : F(k) is a (positive or negative) prime}."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _normalize_coeffs(self.coeffs))
        if len(self.coeffs) < 2:
            raise ValueError("PolyPrimePreimage requires degree >= 1")

    def hits(self, m, ambient, search_bound=None):
        bound = search_bound or PRIME_PREIMAGE_SEARCH_BOUND
        residues = {x % m for x in self.members_upto(bound, ambient)}
        return _bounded(m, residues, bound)

    def member(self, x, ambient):
        return _in_ambient(x, ambient) and is_prime(abs(_poly_eval(self.coeffs, x)))

    def members_upto(self, bound, ambient):
        lo = 0 if ambient == AMBIENT_N else -bound
        return [x for x in range(lo, bound + 1) if is_prime(abs(_poly_eval(self.coeffs, x)))]


def _crt_join(res_a, mod_a, res_b, mod_b):
    """Residues mod lcm from residue sets mod the coprime moduli a and b."""
    big = mod_a * mod_b
    inv = pow(mod_a, -1, mod_b)
    out = set()
    for ra in res_a:
        for rb in res_b:
            out.add((ra + mod_a * ((rb - ra) * inv % mod_b)) % big)
    return out


@dataclass(frozen=True)
class QuadFormValues(Node):
    """{a*x^2 + b*x*y + c*y^2 : x, y in H} intersected with the ambient."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self):
        return self.b * self.b - 4 * self.a * self.c

    def hits(self, m, ambient, search_bound=None):
        if m == 1:
            return _exact(1, {0})
        residues = {0}
        mod_so_far = 1
        for p, e in sorted(factorize(m).items()):
            pe = p**e
            part = set(int(r) for r in kernels.quadform_residues_mod(self.a, self.b, self.c, pe))
            residues = _crt_join(residues, mod_so_far, part, pe)
            mod_so_far *= pe
        return _exact(m, residues)

    def hit_count(self, m, ambient, search_bound=None):
        fac = factorize(m) if m > 1 else {}
        if len(fac) == 1:
            ((p, e),) = fac.items()
            if e == 2:
                return int(kernels.quadform_prime_square_count(self.a, self.b, self.c, p)), True
        return super().hit_count(m, ambient, search_bound)

    def _value(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def member(self, x, ambient):
        if not _in_ambient(x, ambient):
            return False
        return x in set(self.members_upto(abs(x), ambient))

    def members_upto(self, bound, ambient):
        a, b, c = self.a, self.b, self.c
        if a == 0 and c == 0:
            # b*x*y: products x*y cover all of N (resp. Z), so the set is
            # the multiples of b (just {0} if b == 0)
            if b == 0:
                return [0]
            vals = {0}
            t = 1
            while abs(b) * t <= bound:
                v = b * t
                if _in_ambient(v, ambient):
                    vals.add(v)
                if ambient == AMBIENT_Z:
                    vals.add(-v)
                t += 1
            return sorted(vals)
        if c == 0:
            # swap variables; the value set is unchanged
            a, c = c, a
        out = set()
        xcap = self._x_cap(a, b, c, bound)
        lo = 0 if ambient == AMBIENT_N else 0  # Q(-x,-y) = Q(x,y): x >= 0 suffices
        for x in range(lo, xcap + 1):
            for y in self._y_candidates(a, b, c, x, bound, ambient):
                v = a * x * x + b * x * y + c * y * y
                if abs(v) <= bound and _in_ambient(v, ambient):
                    out.add(v)
        return sorted(out)

    @staticmethod
    def _x_cap(a, b, c, bound):
        disc = b * b - 4 * a * c
        if disc < 0:
            # definite in x: |4cQ| = |(2cy+bx)^2 - disc*x^2| >= |disc| x^2
            return isqrt(4 * abs(c) * bound // abs(disc)) + 1
        root = isqrt(disc)
        # disc = q^2 >= 0: 4a*Q factors as (2ax+(b-q)y)(2ax+(b+q)y), and a
        # divisor pair u*v = 4a*w with min(|u|,|v|) <= 2*sqrt(|a*w|) yields
        # |x| <= (|b|+q)(|u|+|v|)/(4|a|q) <= (|b|+q)(w + sqrt(w) + 1).
        # For non-square disc the same window is a generous heuristic only:
        # orbit minima under the (infinite) automorphism group grow with the
        # fundamental Pell unit, which is form-dependent.
        return (abs(b) + root + 1) * (bound + 3) + 4

    @staticmethod
    def _y_candidates(a, b, c, x, bound, ambient):
        """Integer y with |Q(x, y)| possibly <= bound (superset, c != 0)."""
        # roots of c y^2 + b x y + a x^2 -+ bound = 0
        roots = []
        for target in (bound, -bound):
            disc = b * b * x * x - 4 * c * (a * x * x - target)
            if disc >= 0:
                s = isqrt(disc)
                roots.append((-b * x - s) / (2 * c))
                roots.append((-b * x + s) / (2 * c))
        if not roots:
            return
        roots.sort()
        # |Q| <= bound region is one interval or two edge intervals
        if len(roots) == 4:
            intervals = [(roots[0], roots[1]), (roots[2], roots[3])]
        else:
            intervals = [(roots[0], roots[-1])]
        seen = set()
        for lo, hi in intervals:
            start = int(lo) - 2
            stop = int(hi) + 2
            if ambient == AMBIENT_N:
                start = max(start, 0)
            for y in range(start, stop + 1):
                if y not in seen:
                    seen.add(y)
                    yield y
        # x = 0 column over Z also needs negative y, covered by the ranges


@dataclass(frozen=True)
class PerfectPowers(Node):
    """Union over n >= 2 of {a^n : a in H}."""

    def hits(self, m, ambient, search_bound=None):
        if m == 1:
            return _exact(1, {0})
        fac = factorize(m)
        if len(fac) == 1:
            ((p, e),) = fac.items()
            if e == 1:
                return _exact(m, range(m))
            if e == 2:
                # c is a power residue mod p^2 iff p does not exactly divide c
                return _exact(m, {0} | {c for c in range(1, m) if c % p != 0})
        window = 2 + max(1, m.bit_length()) + carmichael_lambda(m)
        residues = set()
        for base in range(m):
            v = base * base % m
            residues.add(v)
            for _ in range(window - 2):
                v = v * base % m
                residues.add(v)
        return _exact(m, residues)

    def hit_count(self, m, ambient, search_bound=None):
        fac = factorize(m) if m > 1 else {}
        if len(fac) == 1:
            ((p, e),) = fac.items()
            if e == 1:
                return m, True
            if e == 2:
                return m - p + 1, True
        return super().hit_count(m, ambient, search_bound)

    def member(self, x, ambient):
        if not _in_ambient(x, ambient):
            return False
        if x in (0, 1):
            return True
        if x == -1:
            return True  # (-1)^3; only reachable with ambient Z
        n = abs(x)
        for k in range(2, n.bit_length() + 1):
            r = _int_nth_root(n, k)
            if r**k == n and (x > 0 or k % 2 == 1):
                return True
        return False

    def members_upto(self, bound, ambient):
        out = set()
        if bound >= 0:
            out.update((0, 1) if bound >= 1 else (0,))
        k = 2
        while 2**k <= bound:
            a = 2
            while a**k <= bound:
                out.add(a**k)
                if ambient == AMBIENT_Z and k % 2 == 1:
                    out.add(-(a**k))
                a += 1
            k += 1
        if ambient == AMBIENT_Z and bound >= 1:
            out.add(-1)
        return sorted(out)


@dataclass(frozen=True)
class DigitAvoider(Node):
    """Non-negative integers whose base-b digit string avoids the pattern
    (for ambient Z, |x| is tested)."""

    base: int
    pattern: tuple

    def __post_init__(self):
        object.__setattr__(self, "pattern", tuple(int(d) for d in self.pattern))
        if self.base < 2:
            raise ValueError("base must be >= 2")
        if not self.pattern or any(not 0 <= d < self.base for d in self.pattern):
            raise ValueError("pattern must be non-empty digits below the base")

    def _digits(self, n):
        if n == 0:
            return (0,)
        out = []
        while n:
            out.append(n % self.base)
            n //= self.base
        return tuple(reversed(out))

    def _avoids(self, n):
        d = self._digits(n)
        pat = self.pattern
        k = len(pat)
        return all(d[i : i + k] != pat for i in range(len(d) - k + 1))

    def member(self, x, ambient):
        if not _in_ambient(x, ambient):
            return False
        return self._avoids(abs(x))

    def members_upto(self, bound, ambient):
        pos = [x for x in range(bound + 1) if self._avoids(x)]
        if ambient == AMBIENT_Z:
            return sorted(set(pos) | {-x for x in pos if x > 0})
        return pos

    def hits(self, m, ambient, search_bound=None):
        # exact at powers of the base: a class is hit iff prepending at most
        # pattern-length + 2 digit positions yields an avoiding witness
        j, q = 0, 1
        while q < m:
            q *= self.base
            j += 1
        if q == m:
            tmax = self.base ** (len(self.pattern) + 2)
            residues = set()
            for h in range(m):
                for t in range(tmax):
                    if self._avoids(t * m + h):
                        residues.add(h)
                        break
            return _exact(m, residues)
        bound = search_bound or DIGIT_SEARCH_BOUND
        return _bounded(m, {x % m for x in range(bound + 1) if self._avoids(x)}, bound)


class _OmegaBase(Node):
    def _matches(self, omega_value):
        raise NotImplementedError

    def member(self, x, ambient):
        if x == 0 or not _in_ambient(x, ambient):
            return False
        n = abs(x)
        count = 0 if n == 1 else sum(factorize(n).values())
        return self._matches(count)

    def members_upto(self, bound, ambient):
        omega = kernels.bigomega_sieve(bound)
        pos = [x for x in range(1, bound + 1) if self._matches(int(omega[x]))]
        if ambient == AMBIENT_Z:
            return sorted({-x for x in pos} | set(pos))
        return pos

    def hits(self, m, ambient, search_bound=None):
        bound = search_bound or OMEGA_SEARCH_BOUND
        omega = kernels.bigomega_sieve(bound)
        residues = set()
        for x in range(1, bound + 1):
            if self._matches(int(omega[x])):
                residues.add(x % m)
                if ambient == AMBIENT_Z:
                    residues.add(-x % m)
            if len(residues) == m:
                break
        return _bounded(m, residues, bound)


@dataclass(frozen=True)
class OmegaExact(_OmegaBase):
    """Nonzero x with exactly k prime factors counted with multiplicity."""

    k: int

    def _matches(self, omega_value):
        return omega_value == self.k


@dataclass(frozen=True)
class OmegaAtMost(_OmegaBase):
    """Nonzero x with at most k prime factors counted with multiplicity."""

    k: int

    def _matches(self, omega_value):
        return omega_value <= self.k


@dataclass(frozen=True)
class DivisibilityChain(Node):
    """Explicit prefix x_1 | x_2 | ... of a divisibility chain; the
    continuation is unknown but consists of multiples of the last element."""

    prefix: tuple

    def __post_init__(self):
        seen = []
        for v in self.prefix:
            if v not in seen:
                seen.append(int(v))
        object.__setattr__(self, "prefix", tuple(seen))
        if not self.prefix or self.prefix[0] == 0:
            raise ValueError("chain prefix must be non-empty with x_1 != 0")
        for a, b in zip(self.prefix, self.prefix[1:]):
            if b % a != 0:
                raise ValueError(f"chain violation: {a} does not divide {b}")

    def hits(self, m, ambient, search_bound=None):
        for i, v in enumerate(self.prefix):
            if abs(v) % m == 0:
                residues = {w % m for w in self.prefix[:i]} | {0}
                return _exact(m, residues)
        bound = max(abs(v) for v in self.prefix)
        return _bounded(m, {v % m for v in self.prefix}, bound)

    def member(self, x, ambient):
        return x in self.prefix and _in_ambient(x, ambient)

    def members_upto(self, bound, ambient):
        return sorted(
            v for v in self.prefix if abs(v) <= bound and _in_ambient(v, ambient)
        )


@dataclass(frozen=True)
class FactorialShift(Node):
    """{h! + h : h in N}. Sparse, yet meets every residue class: for
    h >= m, h! + h == h (mod m), and h then sweeps all classes."""

    def _elements_upto(self, bound):
        out = []
        h, fact = 0, 1
        while fact + h <= bound:
            out.append(fact + h)
            h += 1
            fact *= h
        return sorted(set(out))

    def hits(self, m, ambient, search_bound=None):
        return _exact(m, range(m))

    def hit_count(self, m, ambient, search_bound=None):
        return m, True

    def member(self, x, ambient):
        return x >= 1 and x in self._elements_upto(x)

    def members_upto(self, bound, ambient):
        return self._elements_upto(bound)


@dataclass(frozen=True)
class SetSpec:
    """An integer set: an ambient tag plus a description node."""

    node: Node
    ambient: str = AMBIENT_N

    def __post_init__(self):
        if self.ambient not in (AMBIENT_N, AMBIENT_Z):
            raise ValueError(f"unknown ambient {self.ambient!r}")


def hits(spec: SetSpec, m: int, search_bound=None) -> HitSet:
    """Residues mod m met by the set."""
    if m < 1:
        raise ValueError("modulus must be positive")
    return spec.node.hits(m, spec.ambient, search_bound)


def hit_count(spec: SetSpec, m: int, search_bound=None):
    """(number of residues mod m met by the set, exactness flag)."""
    if m < 1:
        raise ValueError("modulus must be positive")
    return spec.node.hit_count(m, spec.ambient, search_bound)


def member(spec: SetSpec, x: int) -> bool:
    return spec.node.member(x, spec.ambient)


def enumerate_members(spec: SetSpec, bound: int) -> list:
    """All members x with |x| <= bound, ascending (brute-force oracle)."""
    if bound < 1:
        raise ValueError("bound must be positive")
    return spec.node.members_upto(bound, spec.ambient)


# ---------------------------------------------------------------------------
# AP-union normal form


@dataclass(frozen=True)
class APUnionNormalForm:
    """Union over h in residues of (modulus*H + h); all upper quasi-densities
    agree on such sets, with common value |residues| / modulus."""

    modulus: int
    residues: frozenset
    ambient: str = AMBIENT_N

    def density(self) -> Fraction:
        return Fraction(len(self.residues), self.modulus)


def _normalize_node(node) -> tuple:
    if isinstance(node, AP):
        return node.step, {node.offset % node.step}
    if isinstance(node, UnionOf):
        k = 1
        parts = []
        for p in node.parts:
            pk, pres = _normalize_node(p)
            parts.append((pk, pres))
            k = lcm(k, pk)
        residues = set()
        for pk, pres in parts:
            for r in pres:
                residues.update(range(r, k, pk))
        return k, residues
    if isinstance(node, AffineImage):
        ik, ires = _normalize_node(node.inner)
        k = abs(node.scale) * ik
        return k, {(node.scale * r + node.shift) % k for r in ires}
    if isinstance(node, IntersectAP):
        ik, ires = _normalize_node(node.inner)
        k = lcm(ik, node.step)
        lifted = set()
        for r in ires:
            lifted.update(range(r, k, ik))
        return k, {c for c in lifted if c % node.step == node.offset % node.step}
    raise NotAPUnionError(f"{type(node).__name__} is not an AP-union node")


def ap_union_normalize(spec: SetSpec) -> APUnionNormalForm:
    """Normal form (common modulus + residue set) for specs built from AP,
    UnionOf, AffineImage and IntersectAP. The represented set may differ
    from the literal spec by finitely many elements (offsets are reduced
    into [0, modulus)), which no density can see."""
    if spec.ambient == AMBIENT_N:
        scales = _collect_scales(spec.node)
        if any(s < 0 for s in scales):
            raise NotAPUnionError("negative affine scale over ambient N")
    k, residues = _normalize_node(spec.node)
    return APUnionNormalForm(k, frozenset(residues), spec.ambient)


def _collect_scales(node):
    if isinstance(node, AffineImage):
        return [node.scale] + _collect_scales(node.inner)
    if isinstance(node, UnionOf):
        return [s for p in node.parts for s in _collect_scales(p)]
    if isinstance(node, IntersectAP):
        return _collect_scales(node.inner)
    return []


def complement_hits(nf: APUnionNormalForm, m: int) -> HitSet:
    """Exact hit set of H minus the AP-union, mod m (lifting by lcm when m is
    not a multiple of the normal-form modulus)."""
    big = lcm(m, nf.modulus)
    lifted = set()
    for r in nf.residues:
        lifted.update(range(r, big, nf.modulus))
    comp = set(range(big)) - lifted
    return _exact(m, {c % m for c in comp})


# ---------------------------------------------------------------------------
# JSON DSL

_NODE_TAGS = {
    "finite": Finite,
    "ap": AP,
    "union": UnionOf,
    "affine": AffineImage,
    "intersect_ap": IntersectAP,
    "poly_image": PolyImage,
    "poly_prime_preimage": PolyPrimePreimage,
    "quadform": QuadFormValues,
    "perfect_powers": PerfectPowers,
    "digit_avoider": DigitAvoider,
    "omega_exact": OmegaExact,
    "omega_at_most": OmegaAtMost,
    "chain": DivisibilityChain,
    "factorial_shift": FactorialShift,
}


def _node_to_obj(node) -> dict:
    if isinstance(node, Finite):
        return {"type": "finite", "values": list(node.values)}
    if isinstance(node, AP):
        return {"type": "ap", "a": node.step, "h": node.offset}
    if isinstance(node, UnionOf):
        return {"type": "union", "parts": [_node_to_obj(p) for p in node.parts]}
    if isinstance(node, AffineImage):
        return {
            "type": "affine",
            "a": node.scale,
            "h": node.shift,
            "inner": _node_to_obj(node.inner),
        }
    if isinstance(node, IntersectAP):
        return {
            "type": "intersect_ap",
            "inner": _node_to_obj(node.inner),
            "k": node.step,
            "h": node.offset,
        }
    if isinstance(node, PolyImage):
        return {"type": "poly_image", "coeffs": list(node.coeffs)}
    if isinstance(node, PolyPrimePreimage):
        return {"type": "poly_prime_preimage", "coeffs": list(node.coeffs)}
    if isinstance(node, QuadFormValues):
        return {"type": "quadform", "a": node.a, "b": node.b, "c": node.c}
    if isinstance(node, PerfectPowers):
        return {"type": "perfect_powers"}
    if isinstance(node, DigitAvoider):
        return {
            "type": "digit_avoider",
            "base": node.base,
            "pattern": "".join(str(d) for d in node.pattern)
            if node.base <= 10
            else list(node.pattern),
        }
    if isinstance(node, OmegaExact):
        return {"type": "omega_exact", "k": node.k}
    if isinstance(node, OmegaAtMost):
        return {"type": "omega_at_most", "k": node.k}
    if isinstance(node, DivisibilityChain):
        return {"type": "chain", "prefix": list(node.prefix)}
    if isinstance(node, FactorialShift):
        return {"type": "factorial_shift"}
    raise TypeError(f"unserializable node {type(node).__name__}")


def _node_from_obj(obj) -> Node:
    tag = obj["type"]
    if tag not in _NODE_TAGS:
        raise ValueError(f"unknown node type {tag!r}")
    if tag == "finite":
        return Finite(tuple(obj["values"]))
    if tag == "ap":
        return AP(obj["a"], obj["h"])
    if tag == "union":
        return UnionOf(tuple(_node_from_obj(p) for p in obj["parts"]))
    if tag == "affine":
        return AffineImage(obj["a"], obj["h"], _node_from_obj(obj["inner"]))
    if tag == "intersect_ap":
        return IntersectAP(_node_from_obj(obj["inner"]), obj["k"], obj["h"])
    if tag == "poly_image":
        return PolyImage(tuple(obj["coeffs"]))
    if tag == "poly_prime_preimage":
        return PolyPrimePreimage(tuple(obj["coeffs"]))
    if tag == "quadform":
        return QuadFormValues(obj["a"], obj["b"], obj["c"])
    if tag == "perfect_powers":
        return PerfectPowers()
    if tag == "digit_avoider":
        pat = obj["pattern"]
        pattern = tuple(int(d) for d in pat) if isinstance(pat, str) else tuple(pat)
        return DigitAvoider(obj["base"], pattern)
    if tag == "omega_exact":
        return OmegaExact(obj["k"])
    if tag == "omega_at_most":
        return OmegaAtMost(obj["k"])
    if tag == "chain":
        return DivisibilityChain(tuple(obj["prefix"]))
    return FactorialShift()


def spec_to_obj(spec: SetSpec) -> dict:
    return {"ambient": spec.ambient, "node": _node_to_obj(spec.node)}


def spec_from_obj(obj) -> SetSpec:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return SetSpec(_node_from_obj(obj["node"]), obj.get("ambient", AMBIENT_N))


def spec_to_json(spec: SetSpec) -> str:
    return json.dumps(spec_to_obj(spec), sort_keys=True, separators=(",", ":"))


def spec_digest(spec: SetSpec) -> str:
    """SHA-256 digest of the canonical serialization (certificate binding)."""
    return hashlib.sha256(spec_to_json(spec).encode()).hexdigest()
