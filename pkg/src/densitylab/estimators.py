"""Finite-window numeric estimators for classical upper densities.

These estimate the upper alpha-, Banach, analytic and Polya densities of a
set for comparison experiments. They are approximations — limsups replaced
by maxima over deterministic grids — and never carry proof weight; only
residue-count bounds do.
"""

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy.special import zeta

from . import kernels
from . import setspec as ss

CAVEAT = "finite-window approximation, no convergence guarantee"

DEFAULT_S_GRID_ANALYTIC = (1.02, 1.01, 1.005)
DEFAULT_S_GRID_POLYA = (0.5, 0.7, 0.8, 0.9)
GRID_POINTS = 16
HEAD_TRIM = 256


@dataclass(frozen=True)
class DensityEstimate:
    value: float
    method: str
    window: dict = field(default_factory=dict)
    caveat: str = CAVEAT


def _top_decade_grid(n_max):
    """Deterministic logarithmic n-grid over the top decade [N/10, N].

    Restricting to the top decade suppresses small-n granularity noise that
    a full [1, N] grid would let dominate the max.
    """
    lo = max(1, n_max // 10)
    grid = np.unique(np.geomspace(lo, n_max, GRID_POINTS).astype(np.int64))
    return [int(n) for n in grid]


def _positive_members(spec, bound):
    return np.array([x for x in ss.enumerate_members(spec, bound) if x >= 1], dtype=np.int64)


def alpha_density_upper(spec: ss.SetSpec, alpha: float, n_max: int) -> DensityEstimate:
    """Upper alpha-density surrogate: max over an n-grid of the weighted
    ratio sum(i^alpha, i in X) / sum(i^alpha, all i) over (n/256, n].

    alpha = 0 is upper asymptotic density, alpha = -1 upper logarithmic.
    The short head is trimmed because for alpha near -1 the first few
    integers would otherwise dominate every window.
    """
    if alpha < -1:
        raise ValueError("alpha must be >= -1")
    if n_max < 1:
        raise ValueError("window must be positive")
    members = _positive_members(spec, n_max)
    best = 0.0
    for n in _top_decade_grid(n_max):
        head = n // HEAD_TRIM
        xs = members[(members > head) & (members <= n)].astype(np.float64)
        num = float(np.sum(xs**alpha)) if len(xs) else 0.0
        allv = np.arange(head + 1, n + 1, dtype=np.float64)
        den = float(np.sum(allv**alpha))
        if den > 0:
            best = max(best, num / den)
    return DensityEstimate(
        best, "alpha", {"alpha": alpha, "N": n_max, "head_trim": HEAD_TRIM}
    )


def banach_upper(spec: ss.SetSpec, n: int, scan_bound: int) -> DensityEstimate:
    """Upper Banach density surrogate: best count of members in any window
    of n consecutive integers within [1, scan_bound], divided by n."""
    if not 1 <= n <= scan_bound:
        raise ValueError("need 1 <= n <= scan_bound")
    members = _positive_members(spec, scan_bound)
    best = kernels.window_max_count(members, n) / n
    return DensityEstimate(float(best), "banach", {"n": n, "B": scan_bound})


def analytic_upper(spec: ss.SetSpec, s_grid=DEFAULT_S_GRID_ANALYTIC, truncation: int = 10**6) -> DensityEstimate:
    """Upper analytic density surrogate: max over s in the grid of
    (sum_{i in X, i <= B} i^-s + tail) / zeta(s), where the truncated tail
    sum_{i in X, i > B} i^-s is approximated by dhat * B^(1-s)/(s-1) with
    dhat the counting density of X at B (the factor B^(1-s)/(s-1) bounds
    the full tail, reported as `tail_bound`)."""
    if any(s <= 1 for s in s_grid):
        raise ValueError("every s must be > 1")
    if truncation < 1:
        raise ValueError("truncation must be positive")
    members = _positive_members(spec, truncation).astype(np.float64)
    dhat = len(members) / truncation
    best = 0.0
    worst_tail = 0.0
    for s in s_grid:
        tail_full = truncation ** (1.0 - s) / (s - 1.0)
        num = float(np.sum(members ** (-s))) + dhat * tail_full
        est = num / float(zeta(s))
        worst_tail = max(worst_tail, tail_full / float(zeta(s)))
        best = max(best, est)
    return DensityEstimate(
        float(best),
        "analytic",
        {"s_grid": list(s_grid), "B": truncation, "tail_bound": worst_tail},
    )


def polya_upper(spec: ss.SetSpec, s_grid=DEFAULT_S_GRID_POLYA, n_max: int = 10**5) -> DensityEstimate:
    """Upper Polya density surrogate: for each s, max over the n-grid of
    (|X cap [1,n]| - |X cap [1, floor(n*s)]|) / ((1-s) n); the value at the
    largest s of the grid stands in for the outer limit s -> 1."""
    if any(not 0 < s < 1 for s in s_grid):
        raise ValueError("every s must satisfy 0 < s < 1")
    if n_max < 1:
        raise ValueError("window must be positive")
    members = _positive_members(spec, n_max)
    per_s = {}
    for s in sorted(s_grid):
        best = 0.0
        for n in _top_decade_grid(n_max):
            cut = int(n * s)
            count = int(np.searchsorted(members, n, side="right")) - int(
                np.searchsorted(members, cut, side="right")
            )
            best = max(best, count / ((1.0 - s) * n))
        per_s[s] = best
    top = max(s_grid)
    return DensityEstimate(
        float(per_s[top]),
        "polya",
        {"s_grid": sorted(s_grid), "N": n_max, "per_s": {str(s): v for s, v in per_s.items()}},
    )


def estimates_to_csv(estimates) -> str:
    """One row per (method, window, value), for plotting."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["method", "window", "value"])
    for e in estimates:
        window = ";".join(f"{k}={v}" for k, v in sorted(e.window.items()))
        writer.writerow([e.method, window, repr(e.value)])
    return buf.getvalue()
