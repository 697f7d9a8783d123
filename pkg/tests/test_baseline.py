import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tgclaims import Exponential, GridSpec, Tabulated, Weibull, baseline_from_dict, is_dfr
from tgclaims.baseline import base_cdf, base_hazard, base_pdf, base_quantile
from tgclaims.errors import DomainError, UndefinedHazardError

closed_form = st.one_of(
    st.builds(Exponential, st.floats(0.05, 20)),
    st.builds(Weibull, st.floats(0.2, 5), st.floats(0.1, 10)),
)


def test_cdf_examples():
    assert base_cdf(Exponential(1.0), math.log(2)) == pytest.approx(0.5, abs=1e-15)
    assert base_cdf(Weibull(1, 1), 0.0) == 0.0
    assert base_cdf(Weibull(2, 0.6), 0.6) == pytest.approx(1 - math.exp(-1), abs=1e-15)


def test_pdf_examples():
    assert base_pdf(Exponential(2.0), 0.0) == 0.5
    assert base_pdf(Weibull(2, 1), 0.0) == 0.0
    assert base_pdf(Exponential(1.0), 1.0) == pytest.approx(math.exp(-1), rel=1e-15)


def test_pdf_is_infinite_at_zero_for_small_shape():
    assert base_pdf(Weibull(0.3, 1.5), 0.0) == math.inf


def test_quantile_examples():
    assert base_quantile(Exponential(1.0), 0.5) == pytest.approx(math.log(2), rel=1e-14)
    assert base_quantile(Weibull(2, 1), 1 - math.exp(-1)) == pytest.approx(1.0, rel=1e-14)


def test_tabulated_quantile_tracks_closed_form():
    x = np.linspace(0, 12, 4001)
    tab = Tabulated(tuple(x), tuple(1 - np.exp(-x)))
    assert base_quantile(tab, 0.5) == pytest.approx(math.log(2), abs=2e-5)
    assert base_cdf(tab, 20.0) == 1.0


def test_hazard_examples():
    assert base_hazard(Exponential(2.0), np.array([0.0, 1.0, 7.0])) == pytest.approx([0.5] * 3)
    assert base_hazard(Weibull(1, 3), 2.5) == pytest.approx(1 / 3)
    w = Weibull(0.3, 1.5)
    assert base_hazard(w, 1.0) > base_hazard(w, 2.0)
    x = 1.7
    assert base_hazard(w, x) == pytest.approx(0.3 * x ** (-0.7) / 1.5**0.3, rel=1e-13)


def test_hazard_undefined_past_support():
    tab = Tabulated((0.0, 1.0, 2.0), (0.0, 0.5, 1.0))
    with pytest.raises(UndefinedHazardError):
        base_hazard(tab, 2.5)


@pytest.mark.parametrize("fn", [base_cdf, base_pdf, base_hazard])
def test_negative_x_is_a_domain_error(fn):
    with pytest.raises(DomainError):
        fn(Exponential(1.0), -0.1)


@pytest.mark.parametrize("u", [-0.1, 1.0, 1.5, float("nan")])
def test_quantile_rejects_bad_levels(u):
    with pytest.raises(DomainError):
        base_quantile(Exponential(1.0), u)


def test_dfr_examples():
    assert is_dfr(Exponential(1.0)).holds
    assert is_dfr(Weibull(0.3, 1.5)).holds
    check = is_dfr(Weibull(2, 0.6))
    assert not check.holds and check.witness is not None and check.witness > 0


def test_constructor_validation():
    for bad in (lambda: Exponential(0), lambda: Weibull(-1, 1), lambda: Tabulated((0.0, 1.0), (0.2, 1.0))):
        with pytest.raises(ValueError):
            bad()


def test_from_dict_round_trip():
    for spec in (Exponential(0.5), Weibull(0.3, 1.5), Tabulated((0.0, 1.0, 3.0), (0.0, 0.4, 1.0))):
        assert baseline_from_dict(spec.to_dict()) == spec
    with pytest.raises(ValueError):
        baseline_from_dict({"kind": "gamma", "shape": 2})


@given(closed_form, st.floats(0.001, 0.999))
def test_quantile_round_trip(spec, u):
    assert abs(spec.cdf(spec.quantile(u)) - u) <= 1e-10


@given(closed_form)
def test_cdf_is_a_distribution_function(spec):
    x = spec.quantile(np.linspace(0, 0.9999, 500))
    F = spec.cdf(x)
    assert F[0] == 0.0
    assert np.all((F >= 0) & (F <= 1)) and np.all(np.diff(F) >= 0)
    assert spec.cdf(spec.quantile(1 - 1e-12)) == pytest.approx(1.0, abs=1e-11)


@given(closed_form)
def test_pdf_matches_finite_difference(spec):
    x = spec.quantile(np.linspace(0.02, 0.98, 49))
    step = 1e-5 * x
    fd = (spec.cdf(x + step) - spec.cdf(x - step)) / (2 * step)
    np.testing.assert_allclose(spec.pdf(x), fd, rtol=1e-6)


@given(closed_form)
def test_pdf_integrates_to_one(spec):
    # integrate in the probability scale: int f dx = int f(Q(u)) Q'(u) du
    u = np.linspace(0, 1 - 1e-9, 200001)
    x = spec.quantile(u)
    mass = np.sum(0.5 * (spec.pdf(x[1:]) + spec.pdf(x[:-1])) * np.diff(x))
    mass = mass if np.isfinite(mass) else np.sum(spec.pdf(x[1:]) * np.diff(x))
    assert mass == pytest.approx(1.0, abs=1e-3)


def test_dfr_respects_grid_slack():
    assert is_dfr(Exponential(3.0), GridSpec(point_count=64)).margin <= 1e-12
