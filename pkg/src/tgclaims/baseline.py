"""Baseline distributions on [0, inf) wrapped by the transmuted-G family.

Every baseline exposes cdf, sf, pdf, quantile, inverse survival (``isf``) and
hazard, all vectorised over numpy arrays.  Scalars in give floats out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DomainError, UndefinedHazardError
from .grid import GridSpec

__all__ = [
    "BaselineSpec",
    "Exponential",
    "Weibull",
    "Tabulated",
    "DFRCheck",
    "baseline_from_dict",
    "base_cdf",
    "base_pdf",
    "base_quantile",
    "base_hazard",
    "is_dfr",
]


def _nonneg(x):
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError("x must be non-negative")
    return arr


def _prob(u, name="u"):
    arr = np.asarray(u, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0) or np.any(arr >= 1):
        raise DomainError(f"{name} must lie in [0, 1)")
    return arr


def _out(value, like):
    """Return a float for scalar input, an array otherwise."""
    if np.ndim(like) == 0:
        return float(value)
    return value


class BaselineSpec:
    """Interface shared by all baselines.

    Subclasses implement the underscore methods on validated float arrays;
    the public methods handle validation and scalar/array round-tripping.
    """

    kind: str = ""

    def cdf(self, x):
        return _out(self._cdf(_nonneg(x)), x)

    def sf(self, x):
        return _out(self._sf(_nonneg(x)), x)

    def pdf(self, x):
        """Density; ``inf`` at x=0 for baselines with an integrable pole there."""
        return _out(self._pdf(_nonneg(x)), x)

    def quantile(self, u):
        return _out(self._quantile(_prob(u)), u)

    def isf(self, s):
        """Inverse survival function, ``s`` in (0, 1]; ``isf(1) == 0``."""
        arr = np.asarray(s, dtype=float)
        if np.any(np.isnan(arr)) or np.any(arr <= 0) or np.any(arr > 1):
            raise DomainError("survival level must lie in (0, 1]")
        return _out(self._isf(arr), s)

    def hazard(self, x):
        arr = _nonneg(x)
        sf = self._sf(arr)
        if np.any(sf <= 0):
            raise UndefinedHazardError("hazard undefined where the survival function is 0")
        return _out(self._hazard(arr), x)

    def _hazard(self, x):
        return self._pdf(x) / self._sf(x)

    def _isf(self, s):
        return self._quantile(1.0 - s)

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Exponential(BaselineSpec):
    """Exponential with mean ``mean`` (not rate): F(x) = 1 - exp(-x/mean)."""

    mean: float
    kind: str = field(default="exponential", init=False)

    def __post_init__(self):
        if not self.mean > 0:
            raise ValueError(f"exponential mean must be > 0, got {self.mean}")

    def _cdf(self, x):
        return -np.expm1(-x / self.mean)

    def _sf(self, x):
        return np.exp(-x / self.mean)

    def _pdf(self, x):
        return np.exp(-x / self.mean) / self.mean

    def _hazard(self, x):
        return np.full_like(x, 1.0 / self.mean)

    def _quantile(self, u):
        return -self.mean * np.log1p(-u)

    def _isf(self, s):
        return -self.mean * np.log(s)

    def to_dict(self):
        return {"kind": self.kind, "mean": self.mean}


@dataclass(frozen=True)
class Weibull(BaselineSpec):
    """Weibull with F(x) = 1 - exp(-(x/scale)**shape)."""

    shape: float
    scale: float
    kind: str = field(default="weibull", init=False)

    def __post_init__(self):
        if not (self.shape > 0 and self.scale > 0):
            raise ValueError(f"weibull shape and scale must be > 0, got {self.shape}, {self.scale}")

    def _z(self, x):
        return (x / self.scale) ** self.shape

    def _cdf(self, x):
        return -np.expm1(-self._z(x))

    def _sf(self, x):
        return np.exp(-self._z(x))

    def _hazard(self, x):
        a, b = self.shape, self.scale
        with np.errstate(divide="ignore"):
            return (a / b) * (x / b) ** (a - 1.0)

    def _pdf(self, x):
        return self._hazard(x) * self._sf(x)

    def _quantile(self, u):
        return self.scale * (-np.log1p(-u)) ** (1.0 / self.shape)

    def _isf(self, s):
        return self.scale * (-np.log(s)) ** (1.0 / self.shape)

    def to_dict(self):
        return {"kind": self.kind, "shape": self.shape, "scale": self.scale}


@dataclass(frozen=True, eq=False)
class Tabulated(BaselineSpec):
    """Piecewise-linear cdf through the knots ``(x[k], cdf[k])``.

    The first knot must be (0, 0) and both columns strictly increasing.  The
    cdf jumps to 1 past the last knot if ``cdf[-1] < 1``.  The density is the
    slope of the segment to the right of x, so the whole thing is only as good
    as the table.
    """

    x: tuple
    cdf_values: tuple
    kind: str = field(default="tabulated", init=False)

    def __post_init__(self):
        xs = np.asarray(self.x, dtype=float)
        fs = np.asarray(self.cdf_values, dtype=float)
        if xs.ndim != 1 or xs.shape != fs.shape or xs.size < 2:
            raise ValueError("tabulated baseline needs two equal-length columns with >= 2 knots")
        if xs[0] != 0.0 or fs[0] != 0.0:
            raise ValueError("tabulated baseline must start at the knot (0, 0)")
        if np.any(np.diff(xs) <= 0) or np.any(np.diff(fs) <= 0):
            raise ValueError("tabulated knots must be strictly increasing in x and cdf")
        if fs[-1] > 1.0:
            raise ValueError("tabulated cdf exceeds 1")
        object.__setattr__(self, "x", tuple(xs.tolist()))
        object.__setattr__(self, "cdf_values", tuple(fs.tolist()))
        object.__setattr__(self, "_xs", xs)
        object.__setattr__(self, "_fs", fs)
        object.__setattr__(self, "_slopes", np.diff(fs) / np.diff(xs))

    def __eq__(self, other):
        return isinstance(other, Tabulated) and self.x == other.x and self.cdf_values == other.cdf_values

    def __hash__(self):
        return hash((self.x, self.cdf_values))

    def _cdf(self, x):
        return np.interp(x, self._xs, self._fs, right=1.0)

    def _sf(self, x):
        return 1.0 - self._cdf(x)

    def _pdf(self, x):
        idx = np.searchsorted(self._xs, x, side="right") - 1
        inside = idx < self._slopes.size
        return np.where(inside, self._slopes[np.minimum(idx, self._slopes.size - 1)], 0.0)

    def _quantile(self, u):
        return np.interp(u, self._fs, self._xs, right=self._xs[-1])

    def to_dict(self):
        return {"kind": self.kind, "x": list(self.x), "cdf": list(self.cdf_values)}


def baseline_from_dict(d: dict) -> BaselineSpec:
    """Build a baseline from its scenario-file description."""
    if not isinstance(d, dict) or "kind" not in d:
        raise ValueError("baseline must be an object with a 'kind' field")
    kind = d["kind"]
    if kind == "exponential":
        return Exponential(float(d["mean"]))
    if kind == "weibull":
        return Weibull(float(d["shape"]), float(d["scale"]))
    if kind == "tabulated":
        return Tabulated(tuple(d["x"]), tuple(d["cdf"]))
    raise ValueError(f"unknown baseline kind {kind!r}")


def base_cdf(spec: BaselineSpec, x):
    return spec.cdf(x)


def base_pdf(spec: BaselineSpec, x):
    return spec.pdf(x)


def base_quantile(spec: BaselineSpec, u):
    return spec.quantile(u)


def base_hazard(spec: BaselineSpec, x):
    return spec.hazard(x)


class DFRCheck(NamedTuple):
    holds: bool
    witness: float | None
    margin: float


def is_dfr(spec: BaselineSpec, grid: GridSpec = GridSpec()) -> DFRCheck:
    """Check that the hazard is nonincreasing on a quantile-spaced grid.

    ``margin`` is the largest increase seen between consecutive points
    (non-positive for a DFR baseline); ``witness`` is the right end of the
    first offending step.
    """
    x = spec.quantile(grid.levels())
    x = x[x > 0]
    r = spec.hazard(x)
    steps = np.diff(r)
    bad = np.flatnonzero(steps > grid.slack)
    worst = float(steps.max()) if steps.size else 0.0
    if bad.size:
        return DFRCheck(False, float(x[bad[0] + 1]), worst)
    return DFRCheck(True, None, worst)
