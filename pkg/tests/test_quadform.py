"""Quadratic form value sets: residues, classification, smallness
certificates, and the mixed-regime experiments."""

from fractions import Fraction
from math import gcd, isqrt

import pytest

from densitylab import certify as ct
from densitylab import quadform as qf
from densitylab import setspec as ss
from densitylab.errors import (
    DegenerateFormError,
    SquareDiscriminantError,
    WrongRegimeError,
)
from densitylab.numtheory import jacobi, nonresidue_cover, primes_in_ap


def test_form_residues_vs_bruteforce():
    for a, b, c in ((1, 0, 1), (1, 1, 1), (2, -3, 1), (1, 0, -2), (0, 2, 3)):
        for m in (2, 3, 4, 5, 8, 9, 12, 25, 49, 50):
            hs = qf.form_residues(a, b, c, m)
            want = {(a * x * x + b * x * y + c * y * y) % m
                    for x in range(m) for y in range(m)}
            assert hs.exact and set(hs.residues) == want, (a, b, c, m)


def test_form_residues_sum_of_squares_examples():
    assert set(qf.form_residues(1, 0, 1, 4).residues) == {0, 1, 2}
    r9 = set(qf.form_residues(1, 0, 1, 9).residues)
    assert r9 == set(range(9)) - {3, 6}


def test_classify_degenerate():
    with pytest.raises(DegenerateFormError):
        qf.classify_form(0, 0, 0)


def test_classify_small_cases():
    assert qf.classify_form(1, 0, 1).case == "SmallNonSquareD"
    assert qf.classify_form(1, 0, 2, ss.AMBIENT_Z).case == "SmallNonSquareD"
    assert qf.classify_form(1, 2, 1).case == "SmallZeroD"
    assert qf.classify_form(0, 0, 3).case == "SmallZeroD"
    assert qf.classify_form(9, 6, 1).q == 0


def test_classify_ac0():
    cls = qf.classify_form(0, 1, 0, ss.AMBIENT_Z)
    assert cls.case == "PositiveAC0" and cls.bound == 1
    cls = qf.classify_form(1, 2, 0)
    assert cls.case == "PositiveAC0" and cls.bound == Fraction(1, 2)
    # the x = y line realizes the witness progression b*t + (a + c)
    a, b, c = 2, 5, 0
    cls = qf.classify_form(a, b, c)
    spec = ss.SetSpec(ss.QuadFormValues(a, b, c))
    for t in range(1, 8):
        v = cls.witness["step"] * t * t + 0  # Q(t, t) = (a+b+c) t^2
        assert ss.member(spec, (a + b + c) * t * t)
    # direct witness form: Q(1, t) = a + b t (c = 0)
    for t in range(20):
        assert ss.member(spec, a + b * t)


def test_classify_positive_z_witness_attained():
    for a, b, c in ((1, 3, 2), (2, 3, 1), (-1, 0, 1), (1, 0, -4), (6, 5, 1)):
        cls = qf.classify_form(a, b, c, ss.AMBIENT_Z)
        assert cls.case == "PositiveZ"
        step = cls.witness["step"]
        offset = cls.witness["offset"]
        scale = cls.witness["scaled_by"]
        spec = ss.SetSpec(ss.QuadFormValues(a, b, c), ss.AMBIENT_Z)
        for t in range(-10, 10):
            e = offset + step * t
            assert e % scale == 0
            assert ss.member(spec, e // scale), (a, b, c, t)


def test_classify_mixed_n():
    cls = qf.classify_form(1, 3, 2)
    assert cls.case == "MixedN"
    assert cls.q == 1 and cls.bound == Fraction(1, 2 * 1 * 1 * 2)
    # off the non-negative regime no bound is claimed
    assert qf.classify_form(1, 0, -1).case == "MixedN"
    assert qf.classify_form(1, 0, -1).bound is None


def test_classification_invariant_under_unimodular_substitution():
    # (x, y) -> (x + y, y) sends (a, b, c) to (a, 2a + b, a + b + c): the
    # discriminant and hence the small/positive verdict never change
    forms = [(1, 0, 1), (1, 2, 1), (1, 3, 2), (2, -3, 1), (1, 0, -2),
             (3, 1, 5), (1, 5, 6), (0, 0, 2), (2, 9, 4)]
    small = {"SmallNonSquareD", "SmallZeroD"}
    for a, b, c in forms:
        for ambient in (ss.AMBIENT_N, ss.AMBIENT_Z):
            before = qf.classify_form(a, b, c, ambient)
            after = qf.classify_form(a, 2 * a + b, a + b + c, ambient)
            assert before.discriminant == after.discriminant
            assert (before.case in small) == (after.case in small), (a, b, c)


def test_cover_exclusion_invariant_sampled():
    # for non-square D the constructive cover yields primes where the form
    # misses p - 1 classes mod p^2 exactly
    for a, b, c in ((1, 0, 1), (1, 1, 1), (1, 0, 2), (2, -1, 3)):
        d = b * b - 4 * a * c
        cover = nonresidue_cover(d)
        threshold = 2 + max(abs(a), abs(b), abs(c))
        primes = [p for p in primes_in_ap(cover.residue, cover.modulus, 8, 10**5)
                  if threshold <= p <= 1500][:3]
        assert primes, (a, b, c)
        from densitylab import kernels

        for p in primes:
            assert jacobi(d % p, p) == -1
            count = int(kernels.quadform_prime_square_count(a, b, c, p))
            assert count == p * p - p + 1, (a, b, c, p)


def test_form_smallness_certificate_example():
    cert = qf.form_smallness_certificate(1, 0, 2, 300, Fraction(1))
    assert cert.criterion == "quadform_nonresidue"
    spec = ss.SetSpec(ss.QuadFormValues(1, 0, 2))
    ok, report = ct.verify_certificate(cert, spec)
    assert ok, report
    # all moduli are squares of primes in the cover class
    cover = nonresidue_cover(-8)
    for k in cert.moduli:
        p = isqrt(k)
        assert p * p == k and p % cover.modulus == cover.residue


def test_form_smallness_certificate_bound_tightens_with_budget():
    bounds = [
        qf.form_smallness_certificate(1, 1, 1, budget, Fraction(1)).product_bound
        for budget in (100, 1000, 10000)
    ]
    assert bounds[0] > bounds[1] > bounds[2]


def test_form_smallness_certificate_rejects_square_discriminant():
    with pytest.raises(SquareDiscriminantError):
        qf.form_smallness_certificate(1, 3, 2, 100, Fraction(1))
    with pytest.raises(SquareDiscriminantError):
        qf.form_smallness_certificate(1, 2, 1, 100, Fraction(1))


def test_mixed_case_experiment():
    result = qf.mixed_case_experiment(1, 3, 2, n_max=10**5)
    assert result["q"] == 1
    assert result["buck_lower_bound_A"] == Fraction(1, 4)
    assert all(chk["ok"] for chk in result["subap_checks"])
    assert result["declining"]
    assert result["table_ratios"][0]["ratio"] < 0.5


def test_mixed_case_experiment_wrong_regime():
    with pytest.raises(WrongRegimeError):
        qf.mixed_case_experiment(1, 0, 1)  # D < 0
    with pytest.raises(WrongRegimeError):
        qf.mixed_case_experiment(1, 2, 1)  # D = 0
    with pytest.raises(WrongRegimeError):
        qf.mixed_case_experiment(0, 1, 1)  # a = 0


def test_closing_demos():
    result = qf.closing_demos(sieve_bound=3 * 10**4, sumset_bound=3000)
    assert result["products_all_odd"]
    assert all(result["odd_cover_by_modulus"].values())
    assert result["odds_density"] == Fraction(1, 2)
    for name in ("A", "B"):
        assert result["smallness"][name]["verdict"] == "small"
        assert result["smallness"][name]["slices_empty_spotcheck"]
    assert result["sumset_first_missing"] == -1
