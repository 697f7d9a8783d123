"""Majorization preorders, T-transforms and the concave reparametrisation h.

A T-transform ``T = w*I + (1-w)*P`` (P swapping coordinates i and j) acts on
the right of a 2 x n parameter matrix, mixing columns i and j.  Transforms are
stored structurally, never as dense matrices.

Indices are 0-based here; scenario files use 1-based indices and are
converted on load.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ArityError, DomainError

__all__ = [
    "PARTIAL_SUM_SLACK",
    "TOTAL_SLACK",
    "weak_submajorize",
    "weak_supermajorize",
    "majorize",
    "submajorization_violation",
    "supermajorization_violation",
    "TTransform",
    "ParamMatrix",
    "apply_t_transform",
    "chain_apply",
    "collapse_chain",
    "same_structure",
    "in_S_n",
    "SnCheck",
    "HFunction",
    "LOG_SHIFT",
    "RATIONAL",
    "h_eval",
    "h_inverse",
    "validate_h",
    "HValidation",
]

PARTIAL_SUM_SLACK = 1e-12
TOTAL_SLACK = 1e-9


def _pair(x, y):
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != y.size:
        raise ArityError(f"vectors have different lengths {x.size} and {y.size}")
    if x.size == 0:
        raise ArityError("vectors must be non-empty")
    return np.sort(x), np.sort(y)


def submajorization_violation(x, y) -> int | None:
    """Smallest k such that the sum of the k largest entries of x exceeds y's, else None."""
    xs, ys = _pair(x, y)
    top_x = np.cumsum(xs[::-1])
    top_y = np.cumsum(ys[::-1])
    bad = np.flatnonzero(top_x > top_y + PARTIAL_SUM_SLACK)
    return int(bad[0]) + 1 if bad.size else None


def supermajorization_violation(x, y) -> int | None:
    """Smallest k such that the k smallest entries of x sum below y's, else None."""
    xs, ys = _pair(x, y)
    bad = np.flatnonzero(np.cumsum(xs) < np.cumsum(ys) - PARTIAL_SUM_SLACK)
    return int(bad[0]) + 1 if bad.size else None


def weak_submajorize(x, y) -> bool:
    """True iff x is weakly submajorized by y (top partial sums of x never exceed y's)."""
    return submajorization_violation(x, y) is None


def weak_supermajorize(x, y) -> bool:
    """True iff x is weakly supermajorized by y (bottom partial sums of x dominate y's)."""
    return supermajorization_violation(x, y) is None


def majorize(x, y) -> bool:
    """True iff x is majorized by y: equal totals, bottom partial sums of x dominate."""
    xs, ys = _pair(x, y)
    if abs(xs.sum() - ys.sum()) > TOTAL_SLACK:
        return False
    return bool(np.all(np.cumsum(xs)[:-1] >= np.cumsum(ys)[:-1] - PARTIAL_SUM_SLACK))


@dataclass(frozen=True)
class TTransform:
    omega: float
    i: int
    j: int
    n: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.omega <= 1.0:
            raise DomainError(f"omega must lie in [0, 1], got {self.omega}")
        if self.i == self.j:
            raise ValueError("a T-transform needs two distinct coordinates")
        if min(self.i, self.j) < 0 or (self.n is not None and max(self.i, self.j) >= self.n):
            raise ArityError(f"coordinates ({self.i}, {self.j}) out of range for n={self.n}")

    @classmethod
    def from_one_based(cls, omega, i, j, n=None) -> TTransform:
        return cls(float(omega), int(i) - 1, int(j) - 1, n)

    @property
    def pair(self) -> frozenset:
        return frozenset((self.i, self.j))

    def matrix(self, n: int | None = None) -> np.ndarray:
        """Dense ``w*I + (1-w)*P``; only used for cross-checking."""
        n = n or self.n
        perm = np.eye(n)
        perm[[self.i, self.j]] = perm[[self.j, self.i]]
        return self.omega * np.eye(n) + (1.0 - self.omega) * perm

    def to_dict(self) -> dict:
        return {"omega": self.omega, "i": self.i + 1, "j": self.j + 1}


@dataclass(frozen=True)
class ParamMatrix:
    """Two-row matrix: transmutation parameters over h-transformed claim probabilities."""

    row_lambda: tuple
    row_u: tuple

    def __post_init__(self):
        lam = np.asarray(self.row_lambda, dtype=float).ravel()
        u = np.asarray(self.row_u, dtype=float).ravel()
        if lam.size != u.size or lam.size == 0:
            raise ArityError("both rows must be non-empty and of equal length")
        object.__setattr__(self, "row_lambda", tuple(lam.tolist()))
        object.__setattr__(self, "row_u", tuple(u.tolist()))

    @property
    def n(self) -> int:
        return len(self.row_lambda)

    def as_array(self) -> np.ndarray:
        return np.array([self.row_lambda, self.row_u])

    @classmethod
    def from_array(cls, a) -> ParamMatrix:
        a = np.asarray(a, dtype=float)
        return cls(a[0], a[1])

    @classmethod
    def from_portfolio(cls, pf, h) -> ParamMatrix:
        return cls(pf.lam, h_eval(h, pf.p))


def apply_t_transform(m: ParamMatrix, t: TTransform) -> ParamMatrix:
    if (t.n is not None and t.n != m.n) or max(t.i, t.j) >= m.n:
        raise ArityError(f"T-transform of dimension {t.n} applied to a matrix with {m.n} columns")
    a = m.as_array()
    ci, cj = a[:, t.i].copy(), a[:, t.j].copy()
    w = t.omega
    a[:, t.i] = w * ci + (1.0 - w) * cj
    a[:, t.j] = (1.0 - w) * ci + w * cj
    return ParamMatrix.from_array(a)


def chain_apply(m: ParamMatrix, chain) -> tuple[ParamMatrix, list[ParamMatrix]]:
    """Apply transforms left to right; return the result and each partial product."""
    steps = []
    current = m
    for t in chain:
        current = apply_t_transform(current, t)
        steps.append(current)
    return current, steps


def same_structure(a: TTransform, b: TTransform) -> bool:
    return a.pair == b.pair


def collapse_chain(chain) -> list[TTransform]:
    """Merge consecutive transforms sharing a structure into one.

    ``(w1 I + (1-w1) P)(w2 I + (1-w2) P) = w I + (1-w) P`` with
    ``w = w1 w2 + (1-w1)(1-w2)`` because ``P @ P = I``.
    """
    out: list[TTransform] = []
    for t in chain:
        if out and same_structure(out[-1], t):
            prev = out.pop()
            w = prev.omega * t.omega + (1.0 - prev.omega) * (1.0 - t.omega)
            t = TTransform(min(max(w, 0.0), 1.0), prev.i, prev.j, prev.n if prev.n is not None else t.n)
        out.append(t)
    return out


class SnCheck(NamedTuple):
    holds: bool
    pair: tuple[int, int] | None
    reason: str


def in_S_n(m: ParamMatrix, slack: float = PARTIAL_SUM_SLACK) -> SnCheck:
    """Membership in the set of 2 x n matrices with lam in [-1,1], u > 0 and anti-monotone rows."""
    lam = np.asarray(m.row_lambda)
    u = np.asarray(m.row_u)
    out_of_range = np.flatnonzero(np.abs(lam) > 1.0)
    if out_of_range.size:
        k = int(out_of_range[0])
        return SnCheck(False, (k, k), f"lambda[{k}]={lam[k]} outside [-1, 1]")
    nonpositive = np.flatnonzero(u <= 0)
    if nonpositive.size:
        k = int(nonpositive[0])
        return SnCheck(False, (k, k), f"u[{k}]={u[k]} is not positive")
    prod = (lam[:, None] - lam[None, :]) * (u[:, None] - u[None, :])
    bad = np.argwhere(np.triu(prod > slack, 1))
    if bad.size:
        i, j = (int(v) for v in bad[0])
        return SnCheck(False, (i, j), f"columns {i + 1} and {j + 1} are co-monotone")
    return SnCheck(True, None, "")


# -- concave reparametrisation of claim probabilities -------------------------


@dataclass(frozen=True)
class HFunction:
    """Increasing concave map of [0, 1] onto positive reals.

    ``kind`` is ``"log_shift"`` (log(2 + p)), ``"rational"`` ((5p + 2)/(p + 1))
    or ``"custom"``, a piecewise-linear table through ``(p_knots, u_knots)``
    spanning [0, 1].
    """

    kind: str
    p_knots: tuple = field(default=())
    u_knots: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in ("log_shift", "rational", "custom"):
            raise ValueError(f"unknown h kind {self.kind!r}")
        if self.kind == "custom":
            p = np.asarray(self.p_knots, dtype=float)
            u = np.asarray(self.u_knots, dtype=float)
            if p.ndim != 1 or p.shape != u.shape or p.size < 2:
                raise ValueError("custom h needs two equal-length knot columns")
            if p[0] != 0.0 or p[-1] != 1.0 or np.any(np.diff(p) <= 0):
                raise ValueError("custom h knots must increase from p=0 to p=1")
            if np.any(np.diff(u) <= 0):
                raise ValueError("custom h values must be strictly increasing")
            object.__setattr__(self, "p_knots", tuple(p.tolist()))
            object.__setattr__(self, "u_knots", tuple(u.tolist()))

    @classmethod
    def tabulated(cls, p, u) -> HFunction:
        return cls("custom", tuple(p), tuple(u))

    @classmethod
    def from_callable(cls, fn, points: int = 1001) -> HFunction:
        p = np.linspace(0.0, 1.0, points)
        return cls.tabulated(p, fn(p))

    def range(self) -> tuple[float, float]:
        return float(self._eval(np.array(0.0))), float(self._eval(np.array(1.0)))

    def _eval(self, p):
        if self.kind == "log_shift":
            return np.log(2.0 + p)
        if self.kind == "rational":
            return (5.0 * p + 2.0) / (p + 1.0)
        return np.interp(p, self.p_knots, self.u_knots)

    def _inverse(self, u):
        if self.kind == "log_shift":
            return np.exp(u) - 2.0
        if self.kind == "rational":
            return (u - 2.0) / (5.0 - u)
        return np.interp(u, self.u_knots, self.p_knots)

    def __call__(self, p):
        return h_eval(self, p)

    def to_dict(self) -> dict:
        if self.kind == "custom":
            return {"kind": "custom", "p": list(self.p_knots), "u": list(self.u_knots)}
        return {"kind": self.kind}


LOG_SHIFT = HFunction("log_shift")
RATIONAL = HFunction("rational")


def h_eval(h: HFunction, p):
    arr = np.asarray(p, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0) or np.any(arr > 1):
        raise DomainError("h is defined on [0, 1]")
    out = h._eval(arr)
    return float(out) if np.ndim(p) == 0 else out


def h_inverse(h: HFunction, u):
    arr = np.asarray(u, dtype=float)
    lo, hi = h.range()
    tol = 1e-12 * max(1.0, abs(hi))
    if np.any(np.isnan(arr)) or np.any(arr < lo - tol) or np.any(arr > hi + tol):
        raise DomainError(f"h^-1 is defined on [{lo}, {hi}]")
    out = np.clip(h._inverse(np.clip(arr, lo, hi)), 0.0, 1.0)
    return float(out) if np.ndim(u) == 0 else out


class HValidation(NamedTuple):
    valid: bool
    diagnostics: dict


def validate_h(h: HFunction, points: int = 1001, slack: float = 1e-12) -> HValidation:
    """Numerically check strict increase, concavity and a nonvanishing slope on [0, 1]."""
    p = np.linspace(0.0, 1.0, points)
    u = h._eval(p)
    d1 = np.diff(u)
    d2 = np.diff(u, 2)
    min_step = float(d1.min())
    max_curv = float(d2.max())
    diagnostics = {
        "increasing": bool(np.all(d1 > 0)),
        "slope_bounded_below": bool(min_step >= 1e-9),
        "concave": bool(max_curv <= slack),
        "positive": bool(u.min() > 0),
        "min_first_difference": min_step,
        "max_second_difference": max_curv,
    }
    if not math.isfinite(min_step) or not math.isfinite(max_curv):
        diagnostics["finite"] = False
    valid = all(v for k, v in diagnostics.items() if isinstance(v, bool))
    return HValidation(valid, diagnostics)
