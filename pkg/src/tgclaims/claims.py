"""Smallest and largest claim amounts of a portfolio of thinned transmuted risks.

Risk i pays ``Y_i = I_i * X_i`` with ``I_i ~ Bernoulli(p_i)`` and ``X_i``
transmuted-G with parameter ``lam_i``.  Both extremes are mixtures of an atom
at zero and an absolutely continuous part on (0, inf).

Everything is a function of the baseline survival level ``s = Fbar(x)``: the
grids, quantiles and bisections below work in ``s`` so that any baseline that
can invert its survival function is supported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .baseline import BaselineSpec, _nonneg, _out, _prob
from .errors import ArityError, DomainError, UndefinedHazardError
from .transmuted import check_lambda, tg_quantile

__all__ = [
    "Portfolio",
    "ExtremeDistribution",
    "SmallestHazard",
    "largest_cdf",
    "largest_sf",
    "largest_reversed_hazard",
    "smallest_sf",
    "smallest_hazard",
    "largest_bound_portfolio",
    "largest_bound_sf",
    "smallest_bound_portfolio",
    "smallest_bound_sf",
    "extreme_quantile",
    "sample",
]

BISECTION_STEPS = 60


@dataclass(frozen=True)
class Portfolio:
    base: BaselineSpec
    lambdas: tuple
    probs: tuple

    def __post_init__(self):
        lam = np.atleast_1d(np.asarray(self.lambdas, dtype=float))
        p = np.atleast_1d(np.asarray(self.probs, dtype=float))
        if lam.ndim != 1 or lam.size < 1 or lam.shape != p.shape:
            raise ArityError(
                f"lambdas and probs must be non-empty and of equal length, got {lam.size} and {p.size}"
            )
        check_lambda(lam)
        if np.any(np.isnan(p)) or np.any(p <= 0) or np.any(p > 1):
            raise DomainError(f"claim probabilities must lie in (0, 1], got {self.probs}")
        object.__setattr__(self, "lambdas", tuple(lam.tolist()))
        object.__setattr__(self, "probs", tuple(p.tolist()))

    @property
    def n(self) -> int:
        return len(self.lambdas)

    @property
    def lam(self) -> np.ndarray:
        return np.asarray(self.lambdas)

    @property
    def p(self) -> np.ndarray:
        return np.asarray(self.probs)

    def permuted(self, order) -> Portfolio:
        order = list(order)
        return Portfolio(self.base, self.lam[order], self.p[order])

    def smallest(self) -> ExtremeDistribution:
        return ExtremeDistribution(self, "smallest")

    def largest(self) -> ExtremeDistribution:
        return ExtremeDistribution(self, "largest")

    def to_dict(self) -> dict:
        return {"lambdas": list(self.lambdas), "probs": list(self.probs)}


def _risk_sf(lam, F, Fbar):
    """Per-risk transmuted survival, shape (..., n)."""
    return Fbar[..., None] * (1.0 - lam * F[..., None])


class SmallestHazard(NamedTuple):
    rate: np.ndarray | float
    atom: float


@dataclass(frozen=True)
class ExtremeDistribution:
    """Distribution of ``min`` (``kind='smallest'``) or ``max`` of the claims."""

    portfolio: Portfolio
    kind: str

    def __post_init__(self):
        if self.kind not in ("smallest", "largest"):
            raise ValueError(f"kind must be 'smallest' or 'largest', got {self.kind!r}")

    @property
    def base(self) -> BaselineSpec:
        return self.portfolio.base

    @property
    def atom_at_zero(self) -> float:
        p = self.portfolio.p
        if self.kind == "smallest":
            return float(-np.expm1(np.sum(np.log(p))))
        return float(np.prod(1.0 - p))

    @property
    def continuous_mass(self) -> float:
        p = self.portfolio.p
        if self.kind == "smallest":
            return float(np.prod(p))
        with np.errstate(divide="ignore"):
            return float(-np.expm1(np.sum(np.log1p(-p))))

    # -- evaluation in terms of (F, Fbar) ---------------------------------

    def _sf_from(self, F, Fbar):
        pf = self.portfolio
        g = _risk_sf(pf.lam, F, Fbar)
        if self.kind == "smallest":
            return np.prod(pf.p) * np.prod(g, axis=-1)
        with np.errstate(divide="ignore"):
            return -np.expm1(np.sum(np.log1p(-pf.p * g), axis=-1))

    def _cdf_from(self, F, Fbar):
        pf = self.portfolio
        if self.kind == "largest":
            return np.prod(1.0 - pf.p * _risk_sf(pf.lam, F, Fbar), axis=-1)
        return 1.0 - self._sf_from(F, Fbar)

    def _parts(self, x):
        x = _nonneg(x)
        return x, self.base._cdf(x), self.base._sf(x)

    def cdf(self, x):
        _, F, Fbar = self._parts(x)
        return _out(self._cdf_from(F, Fbar), x)

    def sf(self, x):
        _, F, Fbar = self._parts(x)
        return _out(self._sf_from(F, Fbar), x)

    def continuous_hazard(self, x):
        """Hazard of the continuous part, ``-d/dx log sf`` for x > 0.

        At x = 0 this is the right limit; the atom is reported separately.
        """
        x, F, Fbar = self._parts(x)
        pf = self.portfolio
        if self.kind == "smallest":
            sf = self._sf_from(F, Fbar)
            if np.any(sf <= 0):
                raise UndefinedHazardError("smallest-claim survival function is 0")
            lam = pf.lam
            factor = (1.0 + lam * (Fbar - F)[..., None]) / (1.0 - lam * F[..., None])
            return _out(np.sum(factor, axis=-1) * self.base._hazard(x), x)
        sf = self._sf_from(F, Fbar)
        if np.any(sf <= 0):
            raise UndefinedHazardError("largest-claim survival function is 0")
        return _out(self._density(x, F, Fbar) / sf, x)

    def continuous_reversed_hazard(self, x):
        """``d/dx log cdf`` of the continuous part (right limit at x = 0)."""
        x, F, Fbar = self._parts(x)
        pf = self.portfolio
        if self.kind == "largest":
            f = self.base._pdf(x)[..., None]
            lam, p = pf.lam, pf.p
            a = p * _risk_sf(lam, F, Fbar)
            with np.errstate(divide="ignore", invalid="ignore"):
                terms = f * (1.0 + lam * (Fbar - F)[..., None]) * p / (1.0 - a)
            return _out(np.sum(terms, axis=-1), x)
        cdf = self._cdf_from(F, Fbar)
        if np.any(cdf <= 0):
            raise UndefinedHazardError("smallest-claim cdf is 0")
        return _out(self._density(x, F, Fbar) / cdf, x)

    def _density(self, x, F, Fbar):
        pf = self.portfolio
        lam, p = pf.lam, pf.p
        f = self.base._pdf(x)[..., None]
        g = _risk_sf(lam, F, Fbar)
        dens = f * (1.0 + lam * (Fbar - F)[..., None])
        if self.kind == "smallest":
            # d/dx of P * prod g_i
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(g > 0, dens / g, 0.0)
            return self._sf_from(F, Fbar) * np.sum(ratio, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            return self._cdf_from(F, Fbar) * np.sum(p * dens / (1.0 - p * g), axis=-1)

    def pdf(self, x):
        """Density of the continuous part (integrates to ``continuous_mass``)."""
        x, F, Fbar = self._parts(x)
        return _out(self._density(x, F, Fbar), x)

    # -- inversion ---------------------------------------------------------

    def _sf_of_level(self, s):
        return self._sf_from(1.0 - s, s)

    def _solve_sf(self, target):
        """Baseline survival level ``s`` with ``sf(isf(s)) == target``.

        ``sf`` is increasing in ``s`` on [0, 1]; plain bisection, vectorised.
        """
        target = np.asarray(target, dtype=float)
        lo = np.zeros_like(target)
        hi = np.ones_like(target)
        for _ in range(BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            above = self._sf_of_level(mid) >= target
            hi = np.where(above, mid, hi)
            lo = np.where(above, lo, mid)
        return hi

    def quantile(self, u):
        """Right-continuous inverse of the cdf; 0 on the atom."""
        arr = _prob(u)
        target = 1.0 - arr
        s = self._solve_sf(target)
        x = np.where(arr <= self.atom_at_zero, 0.0, self.base._isf(np.maximum(s, 1e-300)))
        return _out(x, u)

    def continuous_quantile(self, c):
        """Quantile of the law of the claim given that it is positive."""
        arr = np.asarray(c, dtype=float)
        if np.any(arr <= 0) or np.any(arr >= 1):
            raise DomainError("continuous-part level must lie in (0, 1)")
        s = self._solve_sf(self.continuous_mass * (1.0 - arr))
        return _out(self.base._isf(np.maximum(s, 1e-300)), c)

    def sample(self, count: int, seed=None) -> np.ndarray:
        return sample(self, count, seed)

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.portfolio.to_dict(), "atom_at_zero": self.atom_at_zero}


def largest_cdf(pf: Portfolio, x):
    return pf.largest().cdf(x)


def largest_sf(pf: Portfolio, x):
    return pf.largest().sf(x)


def largest_reversed_hazard(pf: Portfolio, x):
    """Reversed hazard of the largest claim; 1 at x = 0 by convention."""
    arr = _nonneg(x)
    rate = np.asarray(pf.largest().continuous_reversed_hazard(arr), dtype=float)
    return _out(np.where(arr == 0, 1.0, rate), x)


def smallest_sf(pf: Portfolio, x):
    return pf.smallest().sf(x)


def smallest_hazard(pf: Portfolio, x) -> SmallestHazard:
    """Continuous-part hazard of the smallest claim plus its atom mass ``1 - prod p``."""
    d = pf.smallest()
    return SmallestHazard(d.continuous_hazard(x), d.atom_at_zero)


def largest_bound_portfolio(pf: Portfolio, h) -> Portfolio:
    """Homogeneous two-risk portfolio whose largest claim bounds ``pf``'s from below."""
    from .majorization import h_eval, h_inverse

    if pf.n != 2:
        raise ArityError(f"the largest-claim bound is defined for two risks, got {pf.n}")
    lam_bar = float(np.mean(pf.lam))
    p_bar = float(h_inverse(h, np.mean(h_eval(h, pf.p))))
    return Portfolio(pf.base, (lam_bar, lam_bar), (p_bar, p_bar))


def largest_bound_sf(pf: Portfolio, h, x):
    return largest_bound_portfolio(pf, h).largest().sf(x)


def smallest_bound_portfolio(pf: Portfolio) -> Portfolio:
    p_geo = float(np.exp(np.mean(np.log(pf.p))))
    lam_top = float(np.max((1.0 + pf.lam) / 2.0))
    return Portfolio(pf.base, (lam_top,) * pf.n, (p_geo,) * pf.n)


def smallest_bound_sf(pf: Portfolio, x):
    return smallest_bound_portfolio(pf).smallest().sf(x)


def extreme_quantile(dist: ExtremeDistribution, u):
    return dist.quantile(u)


def sample(dist: ExtremeDistribution, count: int, seed=None) -> np.ndarray:
    """Draw ``count`` i.i.d. copies of the extreme claim.

    Each risk gets a Bernoulli occurrence and a transmuted severity drawn by
    inversion; a risk without a claim contributes 0, so the minimum is 0 as
    soon as any risk stays silent.
    """
    if int(count) != count or count < 1:
        raise ArityError(f"count must be a positive integer, got {count}")
    pf = dist.portfolio
    rng = np.random.default_rng(seed)
    occurs = rng.random((int(count), pf.n)) < pf.p
    severity = tg_quantile(pf.base, pf.lam, rng.random((int(count), pf.n)))
    claims = np.where(occurs, severity, 0.0)
    return claims.min(axis=1) if dist.kind == "smallest" else claims.max(axis=1)
