"""Set-expression algebra: membership/enumeration/hit-oracle consistency,
AP-union normal forms, and the JSON DSL."""

from fractions import Fraction

import pytest

from densitylab import setspec as ss
from densitylab.errors import NotAPUnionError


def _families():
    """Representative spec per node kind (N ambient unless stated)."""
    return {
        "finite": ss.SetSpec(ss.Finite((0, 3, 10, 10, 7))),
        "ap": ss.SetSpec(ss.AP(3, 2)),
        "union": ss.SetSpec(ss.UnionOf((ss.AP(6, 1), ss.AP(6, 5)))),
        "affine": ss.SetSpec(ss.AffineImage(2, 1, ss.AP(3, 0))),
        "intersect_ap": ss.SetSpec(ss.IntersectAP(ss.AP(2, 0), 3, 0)),
        "poly_image": ss.SetSpec(ss.PolyImage((0, 0, 1))),
        "poly_cubic": ss.SetSpec(ss.PolyImage((1, 0, 0, 2))),
        "quadform": ss.SetSpec(ss.QuadFormValues(1, 0, 1)),
        "quadform_indef": ss.SetSpec(ss.QuadFormValues(1, 1, -1)),
        "perfect_powers": ss.SetSpec(ss.PerfectPowers()),
        "digit_avoider": ss.SetSpec(ss.DigitAvoider(10, (9,))),
        "omega_exact": ss.SetSpec(ss.OmegaExact(2)),
        "omega_at_most": ss.SetSpec(ss.OmegaAtMost(1)),
        "chain": ss.SetSpec(ss.DivisibilityChain((3, 6, 24, 48))),
        "factorial_shift": ss.SetSpec(ss.FactorialShift()),
    }


# families whose hit oracle is exact and whose witnesses all fit below 1e5
# for moduli up to 50 (so enumeration-based residue sets match exactly);
# factorial_shift is exact but its witnesses for k not dividing h! + h sit
# far beyond any practical window — the flagged subset case
EQUALITY_FAMILIES = {
    "finite", "ap", "union", "affine", "intersect_ap", "poly_image",
    "quadform", "digit_avoider",
}


def test_member_agrees_with_enumeration():
    for name, spec in _families().items():
        members = set(ss.enumerate_members(spec, 400))
        for x in range(401):
            assert (x in members) == ss.member(spec, x), (name, x)


def test_enumeration_sorted_unique():
    for name, spec in _families().items():
        members = ss.enumerate_members(spec, 2000)
        assert members == sorted(set(members)), name


def test_hits_soundness_and_equality():
    bound = 10**5
    for name, spec in _families().items():
        members = ss.enumerate_members(spec, bound)
        for m in (2, 7, 16, 30, 49):
            hs = ss.hits(spec, m)
            brute = {x % m for x in members}
            if hs.exact:
                # the exact oracle can never miss a residue with a witness
                assert brute <= hs.residues, (name, m)
                if name in EQUALITY_FAMILIES:
                    assert brute == hs.residues, (name, m)
            else:
                assert hs.element_bound is not None, name
                if hs.element_bound <= bound:
                    # search-bounded sets never contain false positives
                    assert hs.residues <= brute, (name, m)
                else:
                    assert brute <= hs.residues, (name, m)


def test_hit_count_matches_hits():
    for name, spec in _families().items():
        for m in (4, 9, 25, 36):
            r, exact = ss.hit_count(spec, m)
            hs = ss.hits(spec, m)
            assert r == len(hs.residues), (name, m)
            assert exact == hs.exact, (name, m)


def test_ambient_z_negative_members():
    spec = ss.SetSpec(ss.PolyImage((0, 0, 0, 1)), ss.AMBIENT_Z)  # cubes
    members = ss.enumerate_members(spec, 30)
    assert members == [-27, -8, -1, 0, 1, 8, 27]
    assert ss.member(spec, -8)
    assert not ss.member(ss.SetSpec(ss.PolyImage((0, 0, 0, 1))), -8)


def test_perfect_powers_members_and_membership():
    spec = ss.SetSpec(ss.PerfectPowers())
    assert ss.enumerate_members(spec, 36) == [0, 1, 4, 8, 9, 16, 25, 27, 32, 36]
    z = ss.SetSpec(ss.PerfectPowers(), ss.AMBIENT_Z)
    assert ss.member(z, -8) and ss.member(z, -1) and not ss.member(z, -4)


def test_perfect_powers_prime_square_hits():
    spec = ss.SetSpec(ss.PerfectPowers())
    for p in (3, 5, 7, 11, 13):
        r, exact = ss.hit_count(spec, p * p)
        assert exact and r == p * p - p + 1
        # closed form agrees with honest window enumeration
        residues = set()
        lam = p * (p - 1)
        for base in range(p * p):
            v = base * base % (p * p)
            residues.add(v)
            for _ in range(lam + 12):
                v = v * base % (p * p)
                residues.add(v)
        assert residues == ss.hits(spec, p * p).residues


def test_digit_avoider_example():
    spec = ss.SetSpec(ss.DigitAvoider(10, (9,)))
    r, exact = ss.hit_count(spec, 100)
    assert exact and r == 81
    assert not ss.member(spec, 1945)
    assert ss.member(spec, 1845)
    two_digit_pattern = ss.SetSpec(ss.DigitAvoider(10, (1, 2)))
    assert not ss.member(two_digit_pattern, 3125)
    assert ss.member(two_digit_pattern, 3215)


def test_quadform_xy_surjective():
    spec = ss.SetSpec(ss.QuadFormValues(0, 1, 0))
    for m in (5, 12, 30):
        assert ss.hit_count(spec, m) == (m, True)


def test_quadform_enumeration_vs_bruteforce():
    for a, b, c in ((1, 0, 1), (1, 1, -1), (2, 3, 1), (0, 2, 0), (1, 0, -1)):
        for ambient in (ss.AMBIENT_N, ss.AMBIENT_Z):
            spec = ss.SetSpec(ss.QuadFormValues(a, b, c), ambient)
            bound = 80
            # witnesses of small values can have coordinates well beyond the
            # value bound (factorable forms), so brute-force a wider grid
            grid = 5 * bound
            got = set(ss.enumerate_members(spec, bound))
            lo = 0 if ambient == ss.AMBIENT_N else -bound
            want = set()
            for x in range(-grid, grid + 1):
                for y in range(-grid, grid + 1):
                    if ambient == ss.AMBIENT_N and (x < 0 or y < 0):
                        continue
                    v = a * x * x + b * x * y + c * y * y
                    if abs(v) <= bound and v >= lo:
                        want.add(v)
            assert got == want, (a, b, c, ambient)


def test_chain_hits_exact_at_dividing_moduli():
    spec = ss.SetSpec(ss.DivisibilityChain((3, 6, 24, 48)))
    hs = ss.hits(spec, 6)
    assert hs.exact and hs.residues == {3, 0}
    hs24 = ss.hits(spec, 24)
    assert hs24.exact and hs24.residues == {3, 6, 0}
    hs5 = ss.hits(spec, 5)
    assert not hs5.exact


def test_chain_validation():
    with pytest.raises(ValueError):
        ss.DivisibilityChain((3, 7))
    with pytest.raises(ValueError):
        ss.DivisibilityChain((0, 4))
    # consecutive duplicates collapse
    assert ss.DivisibilityChain((2, 2, 4)).prefix == (2, 4)


def test_factorial_shift_members():
    spec = ss.SetSpec(ss.FactorialShift())
    assert ss.enumerate_members(spec, 130) == [1, 2, 4, 9, 28, 125]
    assert ss.hits(spec, 97).residues == frozenset(range(97))


def test_ap_union_normalize():
    nf = ss.ap_union_normalize(ss.SetSpec(ss.AP(3, 2)))
    assert (nf.modulus, set(nf.residues)) == (3, {2})
    nf = ss.ap_union_normalize(ss.SetSpec(ss.UnionOf((ss.AP(6, 1), ss.AP(6, 5)))))
    assert nf.density() == Fraction(1, 3)
    nf = ss.ap_union_normalize(ss.SetSpec(ss.AffineImage(2, 1, ss.AP(3, 0))))
    assert (nf.modulus, set(nf.residues)) == (6, {1})
    nf = ss.ap_union_normalize(ss.SetSpec(ss.IntersectAP(ss.AP(2, 0), 3, 0)))
    assert (nf.modulus, set(nf.residues)) == (6, {0})
    # incompatible intersection: empty residue set
    nf = ss.ap_union_normalize(ss.SetSpec(ss.IntersectAP(ss.AP(2, 0), 2, 1)))
    assert nf.density() == 0
    with pytest.raises(NotAPUnionError):
        ss.ap_union_normalize(ss.SetSpec(ss.PerfectPowers()))
    with pytest.raises(NotAPUnionError):
        ss.ap_union_normalize(ss.SetSpec(ss.AffineImage(-2, 0, ss.AP(1, 0))))
    # negative scale is fine over Z
    nf = ss.ap_union_normalize(ss.SetSpec(ss.AffineImage(-2, 1, ss.AP(1, 0)), ss.AMBIENT_Z))
    assert nf.density() == Fraction(1, 2)


def test_normal_form_density_matches_counting():
    nf = ss.ap_union_normalize(
        ss.SetSpec(ss.UnionOf((ss.AP(4, 1), ss.AP(6, 3), ss.AP(12, 2))))
    )
    n = nf.modulus * 500
    count = sum(1 for x in range(n) if (x % nf.modulus) in nf.residues)
    assert Fraction(count, n) == nf.density()


def test_complement_hits():
    nf = ss.ap_union_normalize(ss.SetSpec(ss.AP(2, 1)))
    comp = ss.complement_hits(nf, 2)
    assert comp.exact and comp.residues == {0}
    comp6 = ss.complement_hits(nf, 6)
    assert comp6.residues == {0, 2, 4}
    # lifting when m is not a multiple of the normal-form modulus
    nf3 = ss.ap_union_normalize(ss.SetSpec(ss.AP(3, 0)))
    comp4 = ss.complement_hits(nf3, 4)
    assert comp4.residues == {0, 1, 2, 3}


def test_json_roundtrip_and_digest():
    for name, spec in _families().items():
        text = ss.spec_to_json(spec)
        back = ss.spec_from_obj(text)
        assert back == spec, name
        assert ss.spec_digest(back) == ss.spec_digest(spec), name
    a = ss.spec_digest(ss.SetSpec(ss.AP(2, 1)))
    b = ss.spec_digest(ss.SetSpec(ss.AP(2, 1), ss.AMBIENT_Z))
    assert a != b
    with pytest.raises(ValueError):
        ss.spec_from_obj({"node": {"type": "mystery"}})


def test_validation_errors():
    with pytest.raises(ValueError):
        ss.AP(0, 1)
    with pytest.raises(ValueError):
        ss.AffineImage(0, 1, ss.AP(2, 0))
    with pytest.raises(ValueError):
        ss.DigitAvoider(10, (10,))
    with pytest.raises(ValueError):
        ss.DigitAvoider(1, (0,))
    with pytest.raises(ValueError):
        ss.UnionOf(())
    with pytest.raises(ValueError):
        ss.SetSpec(ss.AP(2, 1), "Q")
    with pytest.raises(ValueError):
        ss.hits(ss.SetSpec(ss.AP(2, 1)), 0)
