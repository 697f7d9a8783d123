import numpy as np
import pytest

from cases import (
    EXP_CHAIN,
    EXP_MAX,
    EXP_MAX_STAR,
    EXP_MIN,
    EXP_MIN_STAR,
    H_FUNCTIONS,
    WB_CHAIN,
    WB_MAX,
    WB_MAX_STAR,
    WB_MIN,
    WB_MIN_STAR,
    largest_chain_case,
    random_baseline,
    random_sn_matrix,
    smallest_case,
)
from tgclaims import (
    LOG_SHIFT,
    RATIONAL,
    Exponential,
    HFunction,
    Portfolio,
    Weibull,
    check_bounds,
    check_thm_largest_chain,
    check_thm_largest_rh,
    check_thm_smallest_disp,
    check_thm_smallest_hr,
    check_thm_smallest_st,
)
from tgclaims.majorization import TTransform, apply_t_transform, h_inverse
from tgclaims.theorems import THEOREM_IDS, TheoremVerdict, check_largest_bound, check_smallest_bound

UNIT = Exponential(1.0)
SOUNDNESS_COUNT = 200


def failed(verdict):
    return [c.name for c in verdict.conditions if not c.holds]


@pytest.mark.parametrize(
    "pf, star, h, chain", [(EXP_MAX, EXP_MAX_STAR, LOG_SHIFT, EXP_CHAIN), (WB_MAX, WB_MAX_STAR, RATIONAL, WB_CHAIN)], ids=["exp", "weibull"]
)
def test_largest_chain_worked(pf, star, h, chain):
    v = check_thm_largest_chain(pf, star, h, chain)
    assert v.theorem_id == "largest_st_chain"
    assert v.hypotheses_hold and v.confirmed and not v.exploratory
    assert v.implied_order.order_kind == "st"


def test_largest_chain_identity_on_two_risks():
    pf = Portfolio(UNIT, (0.2, -0.3), (0.4, 0.6))
    v = check_thm_largest_chain(pf, pf, LOG_SHIFT, [TTransform(1.0, 0, 1, 2)])
    assert v.theorem_id == "largest_st_two_risks"
    assert v.confirmed and v.numeric_confirmation.margin == 0.0


def test_largest_chain_swapped_fails_hypotheses():
    v = check_thm_largest_chain(EXP_MAX_STAR, EXP_MAX, LOG_SHIFT, EXP_CHAIN)
    assert not v.hypotheses_hold and v.implied_order is None and v.exploratory
    assert "chain maps (lambda, h(p)) onto (lambda*, h(p*))" in failed(v)
    assert v.numeric_confirmation is not None  # still run, labelled exploratory


def test_largest_chain_without_chain_or_h():
    v = check_thm_largest_chain(EXP_MAX, EXP_MAX_STAR, LOG_SHIFT, [])
    assert "T-transform chain supplied" in failed(v)
    v = check_thm_largest_chain(EXP_MAX, EXP_MAX_STAR, None, EXP_CHAIN)
    assert not v.hypotheses_hold


def test_largest_chain_same_structure_collapses():
    pf = Portfolio(UNIT, (-0.5, 0.2, 0.7), (0.8, 0.5, 0.3))
    chain = [TTransform(0.3, 0, 2, 3), TTransform(0.9, 2, 0, 3)]
    from tgclaims.majorization import ParamMatrix, chain_apply

    final, _ = chain_apply(ParamMatrix.from_portfolio(pf, LOG_SHIFT), chain)
    star = Portfolio(UNIT, final.row_lambda, tuple(h_inverse(LOG_SHIFT, np.array(final.row_u))))
    v = check_thm_largest_chain(pf, star, LOG_SHIFT, chain)
    assert v.theorem_id == "largest_st_same_structure" and v.notes["collapsed_length"] == 1
    assert v.confirmed


def test_largest_chain_rejects_mismatched_setting():
    with pytest.raises(ValueError):
        check_thm_largest_chain(EXP_MAX, WB_MAX_STAR, LOG_SHIFT, EXP_CHAIN)


def test_largest_rh_examples():
    base = Portfolio(UNIT, (0.5, 0.5), (0.9, 0.8))
    assert check_thm_largest_rh(base, base, LOG_SHIFT).confirmed
    star = Portfolio(UNIT, (0.5, 0.5), (0.7, 0.7))
    v = check_thm_largest_rh(base, star, LOG_SHIFT)
    assert v.hypotheses_hold and v.confirmed
    big = Portfolio(UNIT, (0.5, 0.5), (0.99, 0.99))
    low = Portfolio(UNIT, (0.5, 0.5), (0.5, 0.5))
    v = check_thm_largest_rh(low, big, LOG_SHIFT)
    assert failed(v) == ["h(p*) weakly submajorized by h(p)"]
    assert "1 largest" in v.conditions[-1].detail


def test_largest_rh_unequal_lambda_is_a_failed_condition():
    v = check_thm_largest_rh(Portfolio(UNIT, (0.5, 0.4), (0.9, 0.8)), Portfolio(UNIT, (0.5, 0.5), (0.7, 0.7)), LOG_SHIFT)
    assert "common lambda in both portfolios" in failed(v)


@pytest.mark.parametrize("pf, star", [(EXP_MIN, EXP_MIN_STAR), (WB_MIN, WB_MIN_STAR)], ids=["exp", "weibull"])
@pytest.mark.parametrize("check", [check_thm_smallest_st, check_thm_smallest_hr])
def test_smallest_worked(check, pf, star):
    v = check(pf, star)
    assert v.hypotheses_hold and v.confirmed


def test_smallest_identical_and_swapped():
    for check in (check_thm_smallest_st, check_thm_smallest_hr):
        assert check(EXP_MIN, EXP_MIN).confirmed
        assert "prod p* <= prod p" in failed(check(EXP_MIN_STAR, EXP_MIN))


def test_hr_and_st_share_conditions():
    rng = np.random.default_rng(8)
    for _ in range(20):
        pf, star = smallest_case(rng)
        a, b = check_thm_smallest_st(pf, star), check_thm_smallest_hr(pf, star)
        assert a.conditions == b.conditions


def test_smallest_disp_examples():
    star = Portfolio(Exponential(20.0), (0.2, 0.4), (0.5, 0.5))
    plain = Portfolio(Exponential(20.0), (0.1, 0.3), (0.6, 0.7))
    v = check_thm_smallest_disp(plain, star)
    assert v.hypotheses_hold and v.confirmed
    assert "bound=0.288462" in v.conditions[-1].detail
    v = check_thm_smallest_disp(WB_MIN, WB_MIN_STAR)
    assert failed(v) == ["baseline is DFR"]
    v = check_thm_smallest_disp(Portfolio(Exponential(20.0), (-0.9, 0.1), (0.6, 0.7)), Portfolio(Exponential(20.0), (-0.5, 0.3), (0.5, 0.5)))
    assert failed(v) == ["0 <= lambda*_i <= 1"] and "[1]" in v.conditions[3].detail


def test_smallest_disp_infinite_density_fails():
    base = Weibull(0.3, 1.5)
    v = check_thm_smallest_disp(Portfolio(base, (0.1, 0.3), (0.6, 0.7)), Portfolio(base, (0.2, 0.4), (0.5, 0.5)))
    assert failed(v) == ["f(0) <= (1 - prod p*) / sum(1 + lambda*)"] and "inf" in v.conditions[-1].detail


def test_bounds_examples():
    homo = Portfolio(UNIT, (0.3, 0.3), (0.6, 0.6))
    largest, smallest = check_bounds(homo, LOG_SHIFT)
    assert largest.confirmed and largest.numeric_confirmation.margin == pytest.approx(0.0, abs=1e-12)
    assert smallest.confirmed
    _, smallest = check_bounds(EXP_MIN)
    assert smallest.confirmed
    ones = Portfolio(UNIT, (1.0, 1.0, 1.0), (0.5, 0.3, 0.7))
    _, tight = check_bounds(ones)
    assert tight.numeric_confirmation.margin == pytest.approx(0.0, abs=1e-12)
    three, _ = check_bounds(EXP_MIN, LOG_SHIFT)
    assert "exactly two risks" in failed(three) and three.numeric_confirmation is None


def test_conditions_named_once():
    verdicts = [
        check_thm_largest_chain(EXP_MAX, EXP_MAX_STAR, LOG_SHIFT, EXP_CHAIN),
        check_thm_largest_rh(EXP_MAX, EXP_MAX_STAR, LOG_SHIFT),
        check_thm_smallest_disp(EXP_MIN, EXP_MIN_STAR),
        *check_bounds(Portfolio(UNIT, (0.3, 0.1), (0.6, 0.2)), LOG_SHIFT),
    ]
    for v in verdicts:
        names = [c.name for c in v.conditions]
        assert len(names) == len(set(names))
        assert v.theorem_id in THEOREM_IDS
        assert "[" in v.render() and v.to_dict()["theorem_id"] == v.theorem_id


def test_implied_order_requires_all_hypotheses():
    from tgclaims.theorems import Condition, ImpliedOrder

    with pytest.raises(ValueError):
        TheoremVerdict("smallest_st", [Condition("x", False, "")], ImpliedOrder("st", "a", "b"))


def test_invalid_h_blocks_implication():
    convex = HFunction.from_callable(lambda p: 1 + p**2)
    v = check_thm_largest_rh(Portfolio(UNIT, (0.5, 0.5), (0.9, 0.8)), Portfolio(UNIT, (0.5, 0.5), (0.7, 0.7)), convex)
    assert not v.hypotheses_hold and "concave" in v.conditions[0].detail


# -- soundness: random scenarios meeting the hypotheses by construction -----


def _collect(make, check, seed):
    rng = np.random.default_rng(seed)
    verdicts, attempts = [], 0
    while len(verdicts) < SOUNDNESS_COUNT:
        attempts += 1
        assert attempts < 20 * SOUNDNESS_COUNT, "generator rarely meets the hypotheses"
        case = make(rng)
        if case is None:
            continue
        v = check(*case)
        assert v.hypotheses_hold, (failed(v), case)
        verdicts.append((v, case))
    return verdicts


def _assert_sound(verdicts):
    bad = [(v.numeric_confirmation.witness, v.numeric_confirmation.margin, case) for v, case in verdicts if not v.confirmed]
    assert not bad, bad[:3]


def _chain_case(rng):
    h = H_FUNCTIONS[rng.choice(list(H_FUNCTIONS))]
    case = largest_chain_case(rng, h, n=int(rng.integers(2, 5)))
    return None if case is None else (case[0], case[1], h, case[2])


def _rh_case(rng):
    h = H_FUNCTIONS[rng.choice(list(H_FUNCTIONS))]
    n = int(rng.integers(2, 5))
    base = random_baseline(rng)
    lam = (float(rng.uniform(-1, 1)),) * n
    p = rng.uniform(0.05, 1.0, n)
    u = h(p)
    for _ in range(2):
        i, j = rng.choice(n, 2, replace=False)
        w = rng.uniform()
        u[i], u[j] = w * u[i] + (1 - w) * u[j], (1 - w) * u[i] + w * u[j]
    floor = h(0.01)
    u_star = np.maximum(u - rng.uniform(0, 0.3, n) * (rng.random(n) < 0.5), floor)
    return Portfolio(base, lam, tuple(p)), Portfolio(base, lam, tuple(h_inverse(h, u_star))), h


def _disp_case(rng):
    n = int(rng.integers(2, 5))
    pf, star = smallest_case(rng, n, base=UNIT)
    if np.any(star.lam < 0):
        return None
    need = float(np.sum(1 + star.lam) / (1 - np.prod(star.p)))
    base = Exponential(need * float(rng.uniform(1.0, 3.0)))
    return Portfolio(base, pf.lambdas, pf.probs), Portfolio(base, star.lambdas, star.probs)


def _largest_bound_case(rng):
    h = H_FUNCTIONS[rng.choice(list(H_FUNCTIONS))]
    m = random_sn_matrix(rng, h, 2)
    return Portfolio(random_baseline(rng), m.row_lambda, tuple(h_inverse(h, np.array(m.row_u)))), h


def test_soundness_largest_chain():
    _assert_sound(_collect(_chain_case, check_thm_largest_chain, 101))


def test_soundness_largest_rh():
    _assert_sound(_collect(_rh_case, check_thm_largest_rh, 102))


def test_soundness_smallest_st():
    _assert_sound(_collect(lambda rng: smallest_case(rng, int(rng.integers(2, 5))), check_thm_smallest_st, 103))


def test_soundness_smallest_hr():
    _assert_sound(_collect(lambda rng: smallest_case(rng, int(rng.integers(2, 5))), check_thm_smallest_hr, 104))


def test_soundness_smallest_disp():
    _assert_sound(_collect(_disp_case, check_thm_smallest_disp, 105))


def test_soundness_largest_bound():
    _assert_sound(_collect(_largest_bound_case, check_largest_bound, 106))


def test_soundness_smallest_bound():
    _assert_sound(_collect(lambda rng: (smallest_case(rng, int(rng.integers(1, 5)))[0],), check_smallest_bound, 107))


def test_single_t_transform_applies_in_one_step():
    pf = Portfolio(UNIT, (-0.5, 0.2, 0.7), (0.8, 0.5, 0.3))
    from tgclaims.majorization import ParamMatrix

    t = TTransform(0.25, 0, 1, 3)
    m = apply_t_transform(ParamMatrix.from_portfolio(pf, RATIONAL), t)
    star = Portfolio(UNIT, m.row_lambda, tuple(h_inverse(RATIONAL, np.array(m.row_u))))
    v = check_thm_largest_chain(pf, star, RATIONAL, [t])
    assert v.theorem_id == "largest_st_single_t" and v.confirmed
