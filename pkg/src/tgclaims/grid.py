"""Evaluation grid settings shared by the order checks and the DFR test."""

from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class GridSpec:
    """How densely, and over which probability band, a check is evaluated.

    ``coverage`` is a band of probability levels; grids are placed at the
    quantiles of the distribution(s) under test for levels in that band, so
    points concentrate where the mass is.
    """

    point_count: int = 1024
    coverage: tuple[float, float] = (1e-4, 1.0 - 1e-4)
    slack: float = 1e-12

    def __post_init__(self):
        if int(self.point_count) != self.point_count or self.point_count < 16:
            raise ValueError(f"point_count must be an integer >= 16, got {self.point_count}")
        lo, hi = self.coverage
        if not 0.0 < lo < hi < 1.0:
            raise ValueError(f"coverage must satisfy 0 < lower < upper < 1, got {self.coverage}")
        if self.slack < 0:
            raise ValueError("slack must be non-negative")
        object.__setattr__(self, "coverage", (float(lo), float(hi)))
        object.__setattr__(self, "point_count", int(self.point_count))

    def levels(self, count: int | None = None):
        import numpy as np

        lo, hi = self.coverage
        return np.linspace(lo, hi, self.point_count if count is None else count)

    def refined(self, point_count: int) -> GridSpec:
        return GridSpec(point_count=point_count, coverage=self.coverage, slack=self.slack)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["coverage"] = list(self.coverage)
        return d
