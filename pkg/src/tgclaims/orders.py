"""Numeric checks of the usual stochastic, hazard rate, reversed hazard rate
and dispersive orders between two extreme-claim distributions.

Every check answers "is ``d1`` smaller than ``d2``?" on a finite grid, so a
``holds`` verdict is evidence rather than proof; the verdict carries the grid
it was computed on.  The atom at zero is always part of the comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .claims import BISECTION_STEPS, ExtremeDistribution
from .errors import ArityError
from .grid import GridSpec

__all__ = [
    "OrderVerdict",
    "comparison_grid",
    "check_st",
    "check_hr",
    "check_rh",
    "check_disp",
    "check_order",
    "EmpiricalSF",
    "VarianceEstimate",
    "mc_empirical_sf",
    "mc_variance",
    "dkw_radius",
    "variance_of_sample",
    "DISP_LATTICE",
]

DISP_LATTICE = 64
ORDER_KINDS = ("st", "hr", "rh", "disp")


@dataclass
class OrderVerdict:
    order_kind: str
    holds: bool
    witness: float | tuple[float, float] | None
    margin: float
    grid: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.order_kind not in ORDER_KINDS:
            raise ValueError(f"unknown order kind {self.order_kind!r}")
        if not self.holds and self.witness is None:
            raise ValueError("a failed verdict needs a witness")

    def to_dict(self) -> dict:
        witness = list(self.witness) if isinstance(self.witness, tuple) else self.witness
        return {
            "order_kind": self.order_kind,
            "holds": self.holds,
            "witness": witness,
            "margin": self.margin,
            "grid": self.grid,
            "diagnostics": self.diagnostics,
        }


def _continuous_cdf(d: ExtremeDistribution, x):
    return 1.0 - d.sf(x) / d.continuous_mass


def comparison_grid(d1: ExtremeDistribution, d2: ExtremeDistribution, grid: GridSpec) -> np.ndarray:
    """Strictly increasing positive points at the quantiles of the pooled continuous parts.

    The pooled quantile at level c lies between the two component quantiles,
    which bracket a vectorised bisection in x.
    """
    c = grid.levels()
    q1 = np.asarray(d1.continuous_quantile(c))
    q2 = np.asarray(d2.continuous_quantile(c))
    lo, hi = np.minimum(q1, q2), np.maximum(q1, q2)
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        pooled = 0.5 * (_continuous_cdf(d1, mid) + _continuous_cdf(d2, mid))
        below = pooled < c
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    x = np.unique(hi)
    return x[x > 0]


def _grid_meta(grid: GridSpec, x) -> dict:
    return {**grid.to_dict(), "evaluated_points": int(len(x))}


def check_st(d1: ExtremeDistribution, d2: ExtremeDistribution, grid: GridSpec = GridSpec()) -> OrderVerdict:
    """d1 <=_st d2: ``sf1 <= sf2`` at x = 0 and on the grid."""
    x = np.concatenate(([0.0], comparison_grid(d1, d2, grid)))
    gap = d2.sf(x) - d1.sf(x)
    k = int(np.argmin(gap))
    margin = float(gap[k])
    holds = margin >= -grid.slack
    return OrderVerdict("st", holds, None if holds else float(x[k]), margin, _grid_meta(grid, x))


def _monotone_ratio(kind, x, num, den, grid, start=None):
    keep = (num > 0) & (den > 0)
    diagnostics = {}
    if not np.all(keep):
        diagnostics["truncated_points"] = int(np.count_nonzero(~keep))
    x, ratio = x[keep], num[keep] / den[keep]
    xs = x
    if start is not None:
        ratio = np.concatenate(([start], ratio))
        xs = np.concatenate(([0.0], x))
    steps = np.diff(ratio)
    if steps.size == 0:
        return OrderVerdict(kind, True, None, 0.0, _grid_meta(grid, x), diagnostics)
    k = int(np.argmin(steps))
    margin = float(steps[k])
    holds = margin >= -grid.slack
    diagnostics["ratio_range"] = [float(ratio.min()), float(ratio.max())]
    return OrderVerdict(kind, holds, None if holds else float(xs[k + 1]), margin, _grid_meta(grid, x), diagnostics)


def check_hr(d1: ExtremeDistribution, d2: ExtremeDistribution, grid: GridSpec = GridSpec()) -> OrderVerdict:
    """d1 <=_hr d2: ``sf2 / sf1`` nondecreasing.

    The first step compares the ratio just left of 0 (both survival functions
    equal 1 there) with the ratio at 0, where the atoms have been removed.
    """
    x = np.concatenate(([0.0], comparison_grid(d1, d2, grid)))
    v = _monotone_ratio("hr", x, d2.sf(x), d1.sf(x), grid, start=1.0)
    v.diagnostics["atom_step"] = float(d2.sf(0.0) / d1.sf(0.0))
    return v


def check_rh(d1: ExtremeDistribution, d2: ExtremeDistribution, grid: GridSpec = GridSpec()) -> OrderVerdict:
    """d1 <=_rh d2: ``cdf2 / cdf1`` nondecreasing on [0, inf), x = 0 included when both atoms are positive."""
    x = np.concatenate(([0.0], comparison_grid(d1, d2, grid)))
    return _monotone_ratio("rh", x, d2.cdf(x), d1.cdf(x), grid)


def check_disp(
    d1: ExtremeDistribution,
    d2: ExtremeDistribution,
    grid: GridSpec = GridSpec(),
    lattice: int = DISP_LATTICE,
) -> OrderVerdict:
    """d1 <=_disp d2 on a lattice of probability levels above both atoms.

    For all lattice levels a < b the spread ``Q1(b) - Q1(a)`` must not exceed
    ``Q2(b) - Q2(a)``.  Below the larger atom one quantile function is
    identically 0, so those levels carry no information and are skipped.
    """
    a0 = max(d1.atom_at_zero, d2.atom_at_zero)
    top = grid.coverage[1]
    meta = {**grid.to_dict(), "lattice": lattice, "level_band": [a0, top]}
    if a0 >= top:
        return OrderVerdict("disp", True, None, 0.0, meta, {"empty_band": True})
    levels = np.linspace(a0, top, lattice + 2)[1:-1]
    gap = np.asarray(d2.quantile(levels)) - np.asarray(d1.quantile(levels))
    # spread2 - spread1 for each pair (a, b) with a < b
    diff = gap[None, :] - gap[:, None]
    upper = np.triu_indices(lattice, 1)
    vals = diff[upper]
    k = int(np.argmin(vals))
    margin = float(vals[k])
    holds = margin >= -grid.slack
    witness = None if holds else (float(levels[upper[0][k]]), float(levels[upper[1][k]]))
    return OrderVerdict("disp", holds, witness, margin, meta)


_CHECKS = {"st": check_st, "hr": check_hr, "rh": check_rh, "disp": check_disp}


def check_order(kind: str, d1, d2, grid: GridSpec = GridSpec()) -> OrderVerdict:
    try:
        fn = _CHECKS[kind]
    except KeyError:
        raise ValueError(f"unknown order kind {kind!r}; expected one of {ORDER_KINDS}") from None
    return fn(d1, d2, grid)


# -- Monte Carlo ------------------------------------------------------------

MIN_MC_COUNT = 10_000


def dkw_radius(count: int, confidence: float = 0.999) -> float:
    """Dvoretzky-Kiefer-Wolfowitz band half-width for the empirical cdf."""
    return math.sqrt(math.log(2.0 / (1.0 - confidence)) / (2.0 * count))


class EmpiricalSF:
    """Empirical survival function of a sample, with distance helpers."""

    def __init__(self, samples):
        self.samples = np.sort(np.asarray(samples, dtype=float))
        self.count = self.samples.size

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        above = self.count - np.searchsorted(self.samples, x, side="right")
        out = above / self.count
        return float(out) if out.ndim == 0 else out

    def radius(self, confidence: float = 0.999) -> float:
        return dkw_radius(self.count, confidence)

    def atom_frequency(self) -> float:
        return float(np.count_nonzero(self.samples == 0.0)) / self.count

    def sup_distance(self, dist: ExtremeDistribution) -> float:
        """Exact sup-norm distance between the empirical and analytic cdfs."""
        vals, counts = np.unique(self.samples, return_counts=True)
        right = np.cumsum(counts) / self.count
        left = right - counts / self.count
        cdf = np.asarray(dist.cdf(vals))
        cdf_left = np.where(vals == 0.0, 0.0, cdf)
        return float(max(np.max(np.abs(right - cdf)), np.max(np.abs(left - cdf_left))))


def mc_empirical_sf(dist: ExtremeDistribution, count: int, seed=None) -> EmpiricalSF:
    if count < MIN_MC_COUNT:
        raise ArityError(f"Monte Carlo checks need at least {MIN_MC_COUNT} draws, got {count}")
    return EmpiricalSF(dist.sample(count, seed))


class VarianceEstimate(NamedTuple):
    variance: float
    standard_error: float
    count: int


def variance_of_sample(samples) -> VarianceEstimate:
    y = np.asarray(samples, dtype=float)
    n = y.size
    var = float(np.var(y, ddof=1))
    m4 = float(np.mean((y - y.mean()) ** 4))
    se = math.sqrt(max(m4 - var * var * (n - 3) / (n - 1), 0.0) / n)
    return VarianceEstimate(var, se, n)


def mc_variance(dist: ExtremeDistribution, count: int, seed=None) -> VarianceEstimate:
    """Unbiased sample variance with its large-sample standard error."""
    if count < MIN_MC_COUNT:
        raise ArityError(f"Monte Carlo checks need at least {MIN_MC_COUNT} draws, got {count}")
    return variance_of_sample(dist.sample(count, seed))
