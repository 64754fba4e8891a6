"""Residue profiles and the explicit upper Buck density bound.

For an integer set X and modulus k, r_k(X) counts the residue classes mod k
that X meets; the upper Buck density is inf over k of r_k(X)/k, and equals
the limit along any divisibility ladder of moduli (lcm(1..n) by default).
AP-unions get their exact common density |residues|/modulus.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import setspec as ss
from .errors import NotAPUnionError
from .numtheory import modulus_sequence

DEFAULT_DEPTH = 8


@dataclass(frozen=True)
class ProfileEntry:
    modulus: int
    count: int
    exact: bool


@dataclass(frozen=True)
class ResidueProfile:
    entries: tuple

    @property
    def depth(self):
        return len(self.entries)


@dataclass(frozen=True)
class BuckBound:
    """min r_k/k over a residue profile.

    `exact` marks the value as certified attained (AP-union normal form);
    `heuristic` marks a minimum achieved at a search-bounded count, which
    only lower-bounds the true r_k and therefore carries no proof weight.
    """

    upper: Fraction
    achieved_at: int
    depth: int
    exact: bool
    heuristic: bool = False


def _thread_count():
    raw = os.environ.get("DENSITYLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def residue_count(spec: ss.SetSpec, k: int, search_bound=None) -> tuple:
    """(r_k(spec), exactness). Search-bounded counts never overcount."""
    if k < 1:
        raise ValueError("k must be positive")
    return ss.hit_count(spec, k, search_bound)


def residue_profile(spec: ss.SetSpec, moduli, search_bound=None) -> ResidueProfile:
    """Profile entries (k, r_k, exact) for the given moduli, ascending."""
    moduli = sorted(set(int(m) for m in moduli))
    if not moduli or moduli[0] < 1:
        raise ValueError("moduli must be positive")
    threads = _thread_count()
    if threads > 1 and len(moduli) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(lambda m: residue_count(spec, m, search_bound), moduli))
    else:
        counts = [residue_count(spec, m, search_bound) for m in moduli]
    entries = tuple(
        ProfileEntry(m, int(r), bool(exact)) for m, (r, exact) in zip(moduli, counts)
    )
    return ResidueProfile(entries)


def buck_upper(
    spec: ss.SetSpec,
    depth: int = DEFAULT_DEPTH,
    extra_moduli=(),
    search_bound=None,
) -> BuckBound:
    """Upper Buck density bound: min r_k/k over the ladder lcm(1..n) for
    n = 1..depth plus any caller-supplied moduli (any modulus is licensed
    by the inf formula)."""
    if depth < 1:
        raise ValueError("depth must be positive")
    moduli = {modulus_sequence(n) for n in range(1, depth + 1)}
    moduli.update(int(m) for m in extra_moduli)
    profile = residue_profile(spec, moduli, search_bound)
    best = None
    best_entry = None
    for e in profile.entries:
        q = Fraction(e.count, e.modulus)
        if best is None or q < best:
            best = q
            best_entry = e
    exact = False
    try:
        nf = ss.ap_union_normalize(spec)
        if nf.density() == best:
            exact = True
    except NotAPUnionError:
        pass
    return BuckBound(best, best_entry.modulus, depth, exact, not best_entry.exact)


def ap_union_density(nf: ss.APUnionNormalForm) -> Fraction:
    """Exact common value of every upper quasi-density on the AP-union."""
    return nf.density()


# JSON records (moduli as decimal strings: unbounded width)


def profile_to_obj(profile: ResidueProfile) -> dict:
    return {
        "depth": profile.depth,
        "entries": [
            {"modulus": str(e.modulus), "count": str(e.count), "exact": e.exact}
            for e in profile.entries
        ],
    }


def buck_to_obj(bound: BuckBound) -> dict:
    return {
        "upper": {
            "numerator": str(bound.upper.numerator),
            "denominator": str(bound.upper.denominator),
        },
        "upper_float": float(bound.upper),
        "achieved_at": str(bound.achieved_at),
        "depth": bound.depth,
        "exact": bound.exact,
        "heuristic": bound.heuristic,
    }
