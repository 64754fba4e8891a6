"""Numeric density estimators: accuracy on known-density families and
parameter validation."""

import math

import pytest

from densitylab import estimators as est
from densitylab import setspec as ss
from densitylab.density import buck_upper


EVENS = ss.SetSpec(ss.AP(2, 0))
SQUARES = ss.SetSpec(ss.PolyImage((0, 0, 1)))
ODDS = ss.SetSpec(ss.AP(2, 1))


def test_alpha_density_evens():
    e = est.alpha_density_upper(EVENS, 0.0, 10**6)
    assert abs(e.value - 0.5) <= 0.01
    assert e.caveat


def test_alpha_density_squares_vanishes():
    e = est.alpha_density_upper(SQUARES, 0.0, 10**6)
    assert e.value <= 0.01


def test_alpha_density_logarithmic_weighting():
    e = est.alpha_density_upper(ODDS, -1.0, 10**6)
    assert abs(e.value - 0.5) <= 0.02


def test_alpha_rejects_bad_exponent():
    with pytest.raises(ValueError):
        est.alpha_density_upper(EVENS, -1.5, 10**4)


def test_banach_ap():
    e = est.banach_upper(ss.SetSpec(ss.AP(3, 1)), 300, 10**5)
    assert abs(e.value - 1 / 3) <= 0.01


def test_banach_finite_set():
    e = est.banach_upper(ss.SetSpec(ss.Finite((1, 2, 3))), 100, 10**5)
    assert e.value <= 0.05


def test_banach_window_of_one():
    # a single-point window sees density 1 whenever the set is nonempty
    e = est.banach_upper(ODDS, 1, 10**4)
    assert e.value == 1.0


def test_analytic_full_set():
    e = est.analytic_upper(ss.SetSpec(ss.AP(1, 0)))
    assert abs(e.value - 1.0) <= 0.02


def test_analytic_squares():
    e = est.analytic_upper(SQUARES)
    assert e.value <= 0.05


def test_analytic_ap():
    e = est.analytic_upper(ss.SetSpec(ss.AP(4, 1)))
    assert abs(e.value - 0.25) <= 0.02


def test_analytic_rejects_bad_s():
    with pytest.raises(ValueError):
        est.analytic_upper(EVENS, s_grid=(1.0,))
    with pytest.raises(ValueError):
        est.analytic_upper(EVENS, s_grid=(0.5,))


def test_polya_ap():
    e = est.polya_upper(ss.SetSpec(ss.AP(5, 0)))
    assert abs(e.value - 0.2) <= 0.02
    assert e.window["s_grid"] == [0.5, 0.7, 0.8, 0.9]
    assert set(e.window["per_s"]) == {"0.5", "0.7", "0.8", "0.9"}


def test_polya_squares():
    e = est.polya_upper(SQUARES)
    assert e.value <= 0.05


def test_polya_rejects_bad_s():
    with pytest.raises(ValueError):
        est.polya_upper(EVENS, s_grid=(1.0,))
    with pytest.raises(ValueError):
        est.polya_upper(EVENS, s_grid=(0.0,))


@pytest.mark.parametrize("spec", [EVENS, ODDS, ss.SetSpec(ss.AP(6, 5))])
def test_estimates_respect_exact_bound(spec):
    # for exact AP families every estimator should land at or just above the
    # certified upper density
    exact = float(buck_upper(spec, 6).upper)
    for e in (
        est.alpha_density_upper(spec, 0.0, 10**6),
        est.banach_upper(spec, 240, 10**5),
        est.analytic_upper(spec),
        est.polya_upper(spec),
    ):
        assert e.value <= exact + 0.02, e.method


def test_all_estimates_carry_caveat():
    for e in (
        est.alpha_density_upper(EVENS, 0.0, 10**5),
        est.banach_upper(EVENS, 50, 10**4),
        est.analytic_upper(EVENS),
        est.polya_upper(EVENS),
    ):
        assert "approximation" in e.caveat


def test_csv_emission():
    rows = [
        est.alpha_density_upper(EVENS, 0.0, 10**5),
        est.banach_upper(EVENS, 50, 10**4),
    ]
    text = est.estimates_to_csv(rows)
    lines = text.strip().splitlines()
    assert lines[0].startswith("method,")
    assert len(lines) == 3
    assert all(not math.isnan(float(line.split(",")[2])) for line in lines[1:])
