"""Transmuted-G wrapper around a baseline: F_lam(x) = F(x) * (1 + lam * Fbar(x)).

``lam`` may be a scalar or an array broadcastable against ``x``.  All
functions evaluate F, Fbar and f once and build everything from them; F and
Fbar are taken from the baseline separately rather than as ``1 - F`` so tails
keep their relative precision.
"""

from __future__ import annotations

import numpy as np

from .baseline import BaselineSpec, _nonneg, _prob
from .errors import DomainError, UndefinedHazardError

__all__ = [
    "check_lambda",
    "tg_cdf",
    "tg_sf",
    "tg_pdf",
    "tg_hazard",
    "tg_reversed_hazard",
    "tg_quantile",
    "tg_isf",
]


def check_lambda(lam):
    arr = np.asarray(lam, dtype=float)
    if np.any(np.isnan(arr)) or np.any(np.abs(arr) > 1.0):
        raise DomainError(f"transmutation parameter must lie in [-1, 1], got {lam}")
    return arr


def _res(value, x, lam):
    if np.ndim(x) == 0 and np.ndim(lam) == 0:
        return float(value)
    return value


def _parts(base: BaselineSpec, x):
    x = _nonneg(x)
    return x, base._cdf(x), base._sf(x)


def tg_cdf(base: BaselineSpec, lam, x):
    lam = check_lambda(lam)
    _, F, Fbar = _parts(base, x)
    return _res(F * (1.0 + lam * Fbar), x, lam)


def tg_sf(base: BaselineSpec, lam, x):
    lam = check_lambda(lam)
    _, F, Fbar = _parts(base, x)
    return _res(Fbar * (1.0 - lam * F), x, lam)


def tg_pdf(base: BaselineSpec, lam, x):
    lam = check_lambda(lam)
    x, F, Fbar = _parts(base, x)
    return _res(base._pdf(x) * (1.0 + lam * (Fbar - F)), x, lam)


def tg_hazard(base: BaselineSpec, lam, x):
    """Hazard ``r(x) (1 + lam (1 - 2F)) / (1 - lam F)`` of the transmuted law."""
    lam = check_lambda(lam)
    x, F, Fbar = _parts(base, x)
    if np.any(Fbar * (1.0 - lam * F) <= 0):
        raise UndefinedHazardError("hazard undefined where the survival function is 0")
    return _res(base._hazard(x) * (1.0 + lam * (Fbar - F)) / (1.0 - lam * F), x, lam)


def tg_reversed_hazard(base: BaselineSpec, lam, x):
    lam = check_lambda(lam)
    x, F, Fbar = _parts(base, x)
    cdf = F * (1.0 + lam * Fbar)
    if np.any(cdf <= 0):
        raise UndefinedHazardError("reversed hazard undefined where the cdf is 0")
    return _res(base._pdf(x) * (1.0 + lam * (Fbar - F)) / cdf, x, lam)


def _cdf_level(lam, u):
    # Root in [0, 1] of lam*v**2 - (1+lam)*v + u = 0, written without the
    # 1/lam factor so lam -> 0 is continuous and cancellation-free.
    b = 1.0 + lam
    v = 2.0 * u / (b + np.sqrt(np.maximum(b * b - 4.0 * lam * u, 0.0)))
    return np.minimum(v, np.nextafter(1.0, 0.0))


def tg_quantile(base: BaselineSpec, lam, u):
    lam = check_lambda(lam)
    arr = _prob(u)
    with np.errstate(invalid="ignore", divide="ignore"):
        v = np.where(arr == 0, 0.0, _cdf_level(lam, arr))
    return _res(base._quantile(v), u, lam)


def tg_isf(base: BaselineSpec, lam, s):
    """Inverse survival: x with ``tg_sf(x) == s`` for ``s`` in (0, 1]."""
    lam = check_lambda(lam)
    arr = np.asarray(s, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr <= 0) or np.any(arr > 1):
        raise DomainError("survival level must lie in (0, 1]")
    c = 1.0 - lam
    w = 2.0 * arr / (c + np.sqrt(c * c + 4.0 * lam * arr))
    return _res(base._isf(np.minimum(w, 1.0)), s, lam)
