"""Finite smallness certificates and an independent verifier.

A smallness certificate fixes pairwise-coprime moduli k_1, ..., k_n and
certified counts c_i >= r_{k_i}(X) (or on the infinite-class counts w_{k_i},
tagged W). Since residue counts are submultiplicative across coprime moduli,
the rational product of c_i/k_i upper-bounds the upper Buck density — and
hence every upper quasi-density — of X. Divergence-style criteria are
replaced by finite product bounds below a caller-chosen epsilon: a machine
certificate must be finite.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from math import exp, gcd

from . import setspec as ss
from .errors import (
    BoundNotReachedError,
    ChainInvariantViolatedError,
    DegreeTooLowError,
    DigestMismatchError,
    InexactOracleError,
    InsufficientDivergenceError,
    NoUsablePrimesError,
    NotCoprimeError,
)
from .numtheory import is_prime, jacobi, sieve_primes

CERT_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SmallnessCertificate:
    spec_digest: str
    moduli: tuple
    counts: tuple
    count_kind: str  # "R": residue counts; "W": infinite-class counts
    product_bound: Fraction
    divergence_sum: Fraction
    criterion: str
    justifications: tuple


def _check_pairwise_coprime(moduli):
    for i, a in enumerate(moduli):
        for b in moduli[i + 1 :]:
            if gcd(a, b) != 1:
                raise NotCoprimeError(f"moduli {a} and {b} share a factor")


def _assemble(spec_digest, moduli, counts, kind, criterion, justifications, epsilon):
    product = Fraction(1)
    divergence = Fraction(0)
    for k, c in zip(moduli, counts):
        product *= Fraction(c, k)
        divergence += 1 - Fraction(c, k)
    if epsilon is not None and product > epsilon:
        raise BoundNotReachedError(epsilon, product)
    return SmallnessCertificate(
        spec_digest,
        tuple(moduli),
        tuple(counts),
        kind,
        product,
        divergence,
        criterion,
        tuple(justifications),
    )


def smallness_certificate(spec: ss.SetSpec, moduli, epsilon) -> SmallnessCertificate:
    """Coprime-product certificate from exact residue counts.

    Succeeds iff the exact product of r_{k_i}/k_i is at most epsilon;
    refuses search-bounded hit oracles outright.
    """
    moduli = sorted(set(int(k) for k in moduli))
    if not moduli or moduli[0] < 2:
        raise ValueError("moduli must be >= 2")
    _check_pairwise_coprime(moduli)
    counts = []
    justifications = []
    for k in moduli:
        r, exact = ss.hit_count(spec, k)
        if not exact:
            raise InexactOracleError(
                f"hit oracle at modulus {k} is search-bounded; cannot certify"
            )
        counts.append(int(r))
        justifications.append({"modulus": k, "count": int(r), "method": _count_method(spec, k)})
    return _assemble(
        ss.spec_digest(spec),
        moduli,
        counts,
        "R",
        "coprime_product",
        justifications,
        Fraction(epsilon),
    )


def _count_method(spec, k):
    node = spec.node
    if isinstance(node, ss.QuadFormValues):
        return "quadform_fiber"
    if isinstance(node, ss.PerfectPowers):
        return "power_residues"
    return "enumeration"


# ---------------------------------------------------------------------------
# Independent verification

_DIRECT_ENUM_LIMIT = 4000


def _independent_residue_count(spec, m):
    """Recount r_m by a code path avoiding the generator's CRT splitting and
    fast-count shortcuts. For large prime-square moduli where direct
    enumeration is infeasible, falls back to re-deriving the count from the
    defining criterion (primality + non-residue/size conditions); the method
    used is named in the report."""
    node = spec.node
    if isinstance(node, ss.QuadFormValues):
        if m <= _DIRECT_ENUM_LIMIT:
            # full (x, y) grid at the composite modulus: no CRT splitting,
            # no fiber-structure shortcut
            from . import kernels

            return len(kernels.quadform_residues_mod(node.a, node.b, node.c, m)), "direct_enumeration"
        p = _prime_square_root(m)
        if p is None:
            return None, "modulus too large for direct enumeration"
        # the p^2 - p + 1 criterion needs (D/p) = -1 and p past the
        # coefficient sizes; anything else must be enumerated
        big = 2 + max(abs(node.a), abs(node.b), abs(node.c))
        if p < big or jacobi(node.discriminant % p, p) != -1:
            return None, f"criterion hypotheses fail at p={p}"
        return p * p - p + 1, "nonresidue_criterion"
    if isinstance(node, ss.PerfectPowers):
        p = _prime_square_root(m)
        if m <= _DIRECT_ENUM_LIMIT or p is None:
            hs = node.hits(m, spec.ambient)
            return len(hs.residues), "power_window_enumeration"
        return m - p + 1, "unit_power_criterion"
    if isinstance(node, ss.PolyImage):
        vals = {ss._poly_eval(node.coeffs, x) % m for x in range(m)}
        return len(vals), "direct_enumeration"
    if isinstance(node, ss.FactorialShift):
        return m, "sweep_criterion"
    if isinstance(node, (ss.Finite, ss.AP, ss.UnionOf, ss.AffineImage, ss.IntersectAP)):
        try:
            nf = ss.ap_union_normalize(spec)
        except Exception:
            hs = ss.hits(spec, m)
            return len(hs.residues), "hit_oracle"
        lifted = set()
        from math import lcm

        big = lcm(m, nf.modulus)
        for r in nf.residues:
            lifted.update(range(r, big, nf.modulus))
        return len({c % m for c in lifted}), "normal_form_projection"
    hs = ss.hits(spec, m)
    if not hs.exact:
        return None, "no exact independent oracle"
    return len(hs.residues), "hit_oracle"


def _prime_square_root(m):
    from math import isqrt

    p = isqrt(m)
    if p * p == m and is_prime(p):
        return p
    return None


def verify_certificate(cert: SmallnessCertificate, spec: ss.SetSpec) -> tuple:
    """(ok, report). Recomputes every count independently, re-multiplies the
    product, and re-checks the coprimality requirement; reports the first
    discrepancy."""
    if cert.spec_digest != ss.spec_digest(spec):
        raise DigestMismatchError("certificate digest does not match the spec")
    lines = []
    try:
        _check_pairwise_coprime(cert.moduli)
    except NotCoprimeError as e:
        return False, f"criterion violation: {e}"
    product = Fraction(1)
    divergence = Fraction(0)
    for k, c in zip(cert.moduli, cert.counts):
        if cert.count_kind == "R":
            rc, method = _independent_residue_count(spec, k)
            if rc is None:
                return False, f"modulus {k}: cannot re-derive count ({method})"
            if c < rc:
                return False, f"modulus {k}: certified count {c} below true count {rc}"
            lines.append(f"modulus {k}: count {c} >= recomputed {rc} [{method}]")
        else:
            ok, msg = _verify_w_witness(spec, k, c, cert)
            if not ok:
                return False, f"modulus {k}: {msg}"
            lines.append(f"modulus {k}: {msg}")
        product *= Fraction(c, k)
        divergence += 1 - Fraction(c, k)
    if product != cert.product_bound:
        return False, f"product bound mismatch: {product} != {cert.product_bound}"
    if divergence != cert.divergence_sum:
        return False, "divergence sum mismatch"
    lines.append(f"product bound {product} confirmed")
    return True, "\n".join(lines)


def _verify_w_witness(spec, k, count, cert):
    """Re-check a W-count justification: the excluded class must come with
    its complete finite member list, each member independently confirmed."""
    just = next((j for j in cert.justifications if j.get("modulus") == k), None)
    if just is None:
        return False, "no witness recorded"
    if count < k - 1:
        return False, f"W-count {count} excludes more classes than witnessed"
    h = just.get("class")
    solutions = just.get("solutions", ())
    if h is None:
        return False, "witness missing excluded class"
    for x in solutions:
        if x % k != h % k:
            return False, f"witness element {x} not in class {h} mod {k}"
        if not ss.member(spec, x):
            return False, f"witness element {x} is not a member"
    return True, f"class {h} mod {k} finite with {len(solutions)} member(s)"


# ---------------------------------------------------------------------------
# Divisibility criterion (declarative finiteness witnesses)


@dataclass(frozen=True)
class DivisibilityVerdict:
    verdict: str
    partial_sum: Fraction
    threshold: Fraction
    bad_indices: tuple
    justifications: tuple


DIVERGENCE_THRESHOLD = Fraction(1)


def divisibility_criterion(
    spec: ss.SetSpec,
    moduli,
    bad_indices=(),
    finiteness=None,
    threshold: Fraction = DIVERGENCE_THRESHOLD,
) -> DivisibilityVerdict:
    """Smallness via divisibility classes: X is small when, for all but
    finitely many moduli k_n with divergent reciprocal sum, the slice
    {x in X : k_n | x} has upper density zero (here: is finite).

    Divergence is not finitely checkable, so a partial-sum witness past
    `threshold` over the good indices stands in for it. Finiteness of each
    good slice must be justified: structurally (the whole set is finite, or
    the node kind forces finite slices) or by a caller-supplied complete
    member list per index, each element re-checked for membership and
    divisibility.
    """
    moduli = [int(k) for k in moduli]
    if any(k < 2 for k in moduli):
        raise ValueError("moduli must be >= 2")
    bad = set(bad_indices)
    good = [i for i in range(len(moduli)) if i not in bad]
    partial = sum((Fraction(1, moduli[i]) for i in good), Fraction(0))
    if partial <= threshold:
        raise InsufficientDivergenceError(partial, threshold)
    finiteness = finiteness or {}
    justifications = []
    for i in good:
        k = moduli[i]
        tag = _structural_finiteness(spec, k)
        if tag is not None:
            justifications.append({"index": i, "modulus": k, "kind": tag})
            continue
        witness = finiteness.get(i)
        if witness is None:
            raise ValueError(
                f"no finiteness justification for slice at modulus {k} (index {i})"
            )
        for x in witness:
            if x % k != 0:
                raise ValueError(f"witness element {x} not divisible by {k}")
            if not ss.member(spec, x):
                raise ValueError(f"witness element {x} is not a member")
        justifications.append(
            {"index": i, "modulus": k, "kind": "member_list", "elements": list(witness)}
        )
    return DivisibilityVerdict(
        "small", partial, Fraction(threshold), tuple(sorted(bad)), tuple(justifications)
    )


def _structural_finiteness(spec, k):
    node = spec.node
    if isinstance(node, (ss.Finite, ss.DivisibilityChain)):
        return "finite_set"
    if isinstance(node, ss.PolyPrimePreimage) and node.coeffs in ((0, 1),):
        # the set of primes: multiples of k > 1 that are prime are just +-k
        return "prime_multiples"
    if isinstance(node, ss.IntersectAP) and isinstance(node.inner, ss.PolyPrimePreimage):
        if node.inner.coeffs == (0, 1):
            return "prime_multiples"
    return None


# ---------------------------------------------------------------------------
# Specialized bounds


def omega_primorial_bound(k: int, n: int) -> Fraction:
    """Exact upper bound on r_{P_n}(Y) / P_n for Y = integers with at most k
    prime factors (with multiplicity) and P_n the n-th primorial.

    Any x == c (mod P_n) is divisible by gcd(c, P_n), so classes whose gcd
    has more than k prime factors are empty; summing class frequencies gives
    sum over subsets S of the first n primes with |S| <= k of
    (prod_{p in S} 1/p) (prod_{p not in S} (1 - 1/p)), computed here as the
    low-order coefficients of prod_p ((1 - 1/p) + z/p).
    """
    if k < 0 or n < 1:
        raise ValueError("need k >= 0 and n >= 1")
    primes = _first_primes(n)
    coeffs = [Fraction(1)]
    for p in primes:
        stay = 1 - Fraction(1, p)
        take = Fraction(1, p)
        nxt = [Fraction(0)] * (min(len(coeffs) + 1, k + 2))
        for i, c in enumerate(coeffs):
            if i < len(nxt):
                nxt[i] += c * stay
            if i + 1 < len(nxt):
                nxt[i + 1] += c * take
        coeffs = nxt
    return sum(coeffs[: k + 1], Fraction(0))


def _first_primes(n):
    bound = 30
    while True:
        primes = sieve_primes(bound)
        if len(primes) >= n:
            return primes[:n]
        bound *= 2


def chain_bound(prefix) -> list:
    """Certified bounds along a divisibility chain x_1 | x_2 | ...:
    r_{|x_{2n}|}(X) <= 2n, since mod |x_{2n}| the chain occupies only the
    classes of x_1, ..., x_{2n-1} plus 0. Returns (modulus, bound) pairs."""
    prefix = [int(v) for v in prefix]
    if not prefix or prefix[0] == 0:
        raise ChainInvariantViolatedError("prefix must be non-empty with x_1 != 0")
    if len(set(prefix)) != len(prefix):
        raise ChainInvariantViolatedError("prefix elements must be distinct")
    for a, b in zip(prefix, prefix[1:]):
        if b % a != 0:
            raise ChainInvariantViolatedError(f"{a} does not divide {b}")
        if abs(b) < abs(a):
            raise ChainInvariantViolatedError("absolute values must be non-decreasing")
    out = []
    for n in range(1, len(prefix) // 2 + 1):
        out.append((abs(prefix[2 * n - 1]), 2 * n))
    return out


def digit_pattern_bound(base: int, pattern, n: int) -> Fraction:
    """Block bound for base-b integers avoiding a digit pattern of length l:
    r at modulus b^(n*l) is at most (b^l - 1)^n, since each of the n blocks
    must differ from the pattern for the class to be inhabited arbitrarily
    far out."""
    if base < 2 or n < 1:
        raise ValueError("need base >= 2 and n >= 1")
    length = len(pattern)
    if length < 1:
        raise ValueError("pattern must be non-empty")
    return Fraction((base**length - 1) ** n, base ** (n * length))


def poly_image_certificate(coeffs, prime_budget: int, epsilon) -> SmallnessCertificate:
    """Smallness certificate for a polynomial image F(H), degree >= 2.

    Keeps primes p <= budget where the image provably misses a class mod p
    (exact residue count <= p - 1, witnessed by a collision F(x1) == F(x2));
    for degree 1 the image is a full progression with positive density
    1/|lead| and DegreeTooLow is raised carrying that exact value.
    """
    coeffs = ss._normalize_coeffs(coeffs)
    degree = len(coeffs) - 1
    if degree == 0:
        raise DegreeTooLowError(0, Fraction(0))
    if degree == 1:
        raise DegreeTooLowError(1, Fraction(1, abs(coeffs[1])))
    spec = ss.SetSpec(ss.PolyImage(coeffs))
    moduli = []
    counts = []
    justifications = []
    kept = 0
    total = 0
    for p in sieve_primes(prime_budget):
        total += 1
        residues = {}
        collision = None
        for x in range(p):
            v = ss._poly_eval(coeffs, x) % p
            if v in residues and collision is None:
                collision = (residues[v], x)
            residues.setdefault(v, x)
        count = len(residues)
        if count <= p - 1:
            kept += 1
            moduli.append(int(p))
            counts.append(count)
            justifications.append(
                {
                    "modulus": int(p),
                    "count": count,
                    "method": "enumeration",
                    "collision": list(collision) if collision else None,
                }
            )
    if not moduli:
        raise NoUsablePrimesError(f"no prime <= {prime_budget} misses a class")
    justifications.append(
        {"kept_prime_density": kept / total, "prime_budget": prime_budget}
    )
    return _assemble(
        ss.spec_digest(spec),
        moduli,
        counts,
        "R",
        "poly_image_collision",
        justifications,
        Fraction(epsilon),
    )


def poly_prime_preimage_certificate(coeffs, prime_budget: int, epsilon) -> SmallnessCertificate:
    """Certificate (W-counts) for X = {k : |F(k)| prime}, F non-constant.

    For each prime p <= budget with a root h of F mod p, every member in the
    class h mod p satisfies p | F(x), hence |F(x)| = p: the complete integer
    solution set of |F(x)| = p restricted to the class (found by scanning a
    coefficient-derived root bound) witnesses the class finite, so
    w_p(X) <= p - 1.
    """
    coeffs = ss._normalize_coeffs(coeffs)
    if len(coeffs) < 2:
        raise NoUsablePrimesError("constant polynomial has no usable primes")
    spec = ss.SetSpec(ss.PolyPrimePreimage(coeffs))
    moduli = []
    counts = []
    justifications = []
    for p in sieve_primes(prime_budget):
        root = next((h for h in range(p) if ss._poly_eval(coeffs, h) % p == 0), None)
        if root is None:
            continue
        bound = ss._poly_arg_bound(coeffs, p)
        solutions = [
            x
            for x in range(0, bound + 1)  # the ambient is N
            if x % p == root and abs(ss._poly_eval(coeffs, x)) == p
        ]
        moduli.append(int(p))
        counts.append(int(p) - 1)
        justifications.append(
            {
                "modulus": int(p),
                "count": int(p) - 1,
                "class": int(root),
                "solutions": solutions,
            }
        )
    if not moduli:
        raise NoUsablePrimesError(f"F has no root mod any prime <= {prime_budget}")
    return _assemble(
        ss.spec_digest(spec),
        moduli,
        counts,
        "W",
        "prime_preimage_finite_class",
        justifications,
        Fraction(epsilon),
    )


def lower_bound_ap_union(nf: ss.APUnionNormalForm, moduli) -> Fraction:
    """Conjugate lower bound on the lower density of an AP-union:
    prod over coprime moduli of (1 - w_k(complement)/k), from exact
    complement hit counts; meets the exact density once nf.modulus is among
    the moduli."""
    moduli = sorted(set(int(k) for k in moduli))
    _check_pairwise_coprime(moduli)
    bound = Fraction(1)
    for k in moduli:
        comp = ss.complement_hits(nf, k)
        bound *= 1 - Fraction(len(comp.residues), k)
    return bound


# ---------------------------------------------------------------------------
# Certificate JSON schema (versioned)


def cert_to_obj(cert: SmallnessCertificate) -> dict:
    return {
        "version": CERT_SCHEMA_VERSION,
        "spec_digest": cert.spec_digest,
        "criterion": cert.criterion,
        "count_kind": cert.count_kind,
        "records": [
            {"k": str(k), "count": str(c), "kind": cert.count_kind}
            for k, c in zip(cert.moduli, cert.counts)
        ],
        "justifications": list(cert.justifications),
        "product_bound": {
            "numerator": str(cert.product_bound.numerator),
            "denominator": str(cert.product_bound.denominator),
        },
        "product_bound_float": float(cert.product_bound),
        "divergence_sum_float": float(cert.divergence_sum),
    }


def cert_from_obj(obj) -> SmallnessCertificate:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if obj.get("version") != CERT_SCHEMA_VERSION:
        raise ValueError(f"unsupported certificate version {obj.get('version')!r}")
    moduli = tuple(int(r["k"]) for r in obj["records"])
    counts = tuple(int(r["count"]) for r in obj["records"])
    product = Fraction(1)
    divergence = Fraction(0)
    for k, c in zip(moduli, counts):
        product *= Fraction(c, k)
        divergence += 1 - Fraction(c, k)
    pb = Fraction(int(obj["product_bound"]["numerator"]), int(obj["product_bound"]["denominator"]))
    justs = []
    for j in obj.get("justifications", []):
        j = dict(j)
        if "solutions" in j:
            j["solutions"] = [int(x) for x in j["solutions"]]
        justs.append(j)
    return SmallnessCertificate(
        obj["spec_digest"],
        moduli,
        counts,
        obj["count_kind"],
        pb,
        divergence,
        obj["criterion"],
        tuple(justs),
    )


def exp_bound(cert: SmallnessCertificate) -> float:
    """exp(-sum(1 - c_i/k_i)): always >= the exact product bound when every
    count is >= 1 (term-wise 1 - t <= exp(-t))."""
    return exp(-float(cert.divergence_sum))
