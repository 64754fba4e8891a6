"""Residue profiles, the upper Buck density bound, and the density axioms
at profile level."""

from fractions import Fraction

import pytest

from densitylab import density
from densitylab import setspec as ss


def test_residue_count_examples():
    assert density.residue_count(ss.SetSpec(ss.FactorialShift()), 12) == (12, True)
    assert density.residue_count(ss.SetSpec(ss.PolyImage((0, 0, 1))), 16) == (4, True)
    assert density.residue_count(ss.SetSpec(ss.Finite(())), 5) == (0, True)


def test_buck_upper_ap():
    for ambient in (ss.AMBIENT_N, ss.AMBIENT_Z):
        bound = density.buck_upper(ss.SetSpec(ss.AP(2, 1), ambient), 2)
        assert bound.upper == Fraction(1, 2)
        assert bound.exact and not bound.heuristic


def test_buck_upper_factorial_shift():
    bound = density.buck_upper(ss.SetSpec(ss.FactorialShift()), 8)
    assert bound.upper == 1


def test_buck_upper_squares_with_targeted_modulus():
    bound = density.buck_upper(ss.SetSpec(ss.PolyImage((0, 0, 1))), 4, extra_moduli=[16])
    assert bound.upper <= Fraction(1, 4)


def test_buck_upper_heuristic_flag_for_search_bounded():
    bound = density.buck_upper(ss.SetSpec(ss.OmegaAtMost(1)), 3, search_bound=10**5)
    assert bound.heuristic


def test_monotone_in_depth():
    spec = ss.SetSpec(ss.PolyImage((1, 2, 3)))
    prev = None
    for depth in range(1, 7):
        upper = density.buck_upper(spec, depth).upper
        if prev is not None:
            assert upper <= prev
        prev = upper


def test_divisibility_monotonicity():
    # exact profiles: h | k implies r_k / k <= r_h / h
    for spec in (
        ss.SetSpec(ss.PolyImage((0, 1, 1))),
        ss.SetSpec(ss.QuadFormValues(1, 0, 1)),
        ss.SetSpec(ss.PerfectPowers()),
        ss.SetSpec(ss.AP(6, 1)),
    ):
        profile = density.residue_profile(spec, [1, 2, 4, 6, 12, 24, 48])
        entries = {e.modulus: e.count for e in profile.entries}
        for h in entries:
            for k in entries:
                if k % h == 0:
                    assert Fraction(entries[k], k) <= Fraction(entries[h], h), (spec, h, k)


def test_profile_parallel_matches_serial(monkeypatch):
    spec = ss.SetSpec(ss.QuadFormValues(1, 1, 1))
    serial = density.residue_profile(spec, [2, 3, 4, 5, 6, 7, 8])
    monkeypatch.setenv("DENSITYLAB_THREADS", "4")
    parallel = density.residue_profile(spec, [2, 3, 4, 5, 6, 7, 8])
    assert serial == parallel


def test_shift_invariance_profile_level():
    # r_k(X + h) = r_k(X) for exact families
    base = ss.SetSpec(ss.PolyImage((0, 0, 1)))
    for h in (1, 7, 20):
        shifted = ss.SetSpec(ss.AffineImage(1, h, ss.PolyImage((0, 0, 1))))
        for k in (2, 5, 12, 36, 60):
            assert density.residue_count(base, k)[0] == density.residue_count(shifted, k)[0]


def test_homogeneity_profile_level():
    # r_{a k}(a X + h) = r_k(X) for exact families, a <= 6
    base = ss.SetSpec(ss.PolyImage((0, 0, 1)))
    for a in (2, 3, 5, 6):
        for h in (0, 1, 3):
            scaled = ss.SetSpec(ss.AffineImage(a, h, ss.PolyImage((0, 0, 1))))
            for k in (3, 8, 10):
                assert (
                    density.residue_count(scaled, a * k)[0]
                    == density.residue_count(base, k)[0]
                )


def test_subadditivity_profile_level():
    x = ss.SetSpec(ss.AP(4, 1))
    y = ss.SetSpec(ss.PolyImage((0, 0, 1)))
    union = ss.SetSpec(ss.UnionOf((ss.AP(4, 1), ss.PolyImage((0, 0, 1)))))
    for k in (3, 8, 12, 30):
        assert (
            density.residue_count(union, k)[0]
            <= density.residue_count(x, k)[0] + density.residue_count(y, k)[0]
        )


def test_ambient_invariance():
    for node in (ss.AP(5, 2), ss.PolyImage((1, 0, 1)), ss.QuadFormValues(1, 1, 1),
                 ss.PerfectPowers(), ss.FactorialShift()):
        for depth in (1, 4, 8):
            n = density.buck_upper(ss.SetSpec(node, ss.AMBIENT_N), depth)
            z = density.buck_upper(ss.SetSpec(node, ss.AMBIENT_Z), depth)
            assert n.upper == z.upper, (node, depth)


def test_ap_union_density():
    assert density.ap_union_density(ss.ap_union_normalize(ss.SetSpec(ss.AP(3, 2)))) == Fraction(1, 3)
    nf = ss.ap_union_normalize(ss.SetSpec(ss.UnionOf((ss.AP(6, 1), ss.AP(6, 5)))))
    assert density.ap_union_density(nf) == Fraction(1, 3)
    assert density.ap_union_density(ss.ap_union_normalize(ss.SetSpec(ss.AP(1, 0)))) == 1


def test_json_emission():
    bound = density.buck_upper(ss.SetSpec(ss.AP(2, 1)), 3)
    obj = density.buck_to_obj(bound)
    assert obj["upper"] == {"numerator": "1", "denominator": "2"}
    assert isinstance(obj["achieved_at"], str)
    profile = density.residue_profile(ss.SetSpec(ss.AP(2, 1)), [2, 6])
    pobj = density.profile_to_obj(profile)
    assert pobj["depth"] == 2
    assert all(isinstance(e["modulus"], str) for e in pobj["entries"])


def test_input_validation():
    with pytest.raises(ValueError):
        density.buck_upper(ss.SetSpec(ss.AP(2, 1)), 0)
    with pytest.raises(ValueError):
        density.residue_count(ss.SetSpec(ss.AP(2, 1)), 0)
    with pytest.raises(ValueError):
        density.residue_profile(ss.SetSpec(ss.AP(2, 1)), [])
