"""Hypothesis checkers for the extreme-claim comparison results.

Each checker takes the unstarred portfolio ``pf`` (the one expected to be
larger) and the starred portfolio ``pf_star``, lists every hypothesis with
its status, names the implied ordering when all of them hold, and runs the
matching numeric order check either way.  When a hypothesis fails the check
is still run but flagged ``exploratory``: the results are sufficient
conditions, not necessary ones.

Theorem identifiers:

=========================  ==================================================
``largest_st_two_risks``   2 risks, chain majorization of (lam, h(p)) -> st
``largest_st_single_t``    n risks, one T-transform -> st
``largest_st_same_structure``  chain of T-transforms sharing one swap -> st
``largest_st_chain``       chain with different swaps, partial products in S_n
``largest_rh``             common lam, h(p*) weakly submajorized -> rh
``smallest_st``            prod p* <= prod p, lam weakly submajorized -> st
``smallest_hr``            same hypotheses -> hr
``smallest_disp``          plus DFR baseline, lam* in [0,1], f(0) bound -> disp
``largest_bound``          homogeneous lower bound for the largest claim
``smallest_bound``         homogeneous lower bound for the smallest claim
=========================  ==================================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .claims import Portfolio, largest_bound_portfolio, smallest_bound_portfolio
from .grid import GridSpec
from .baseline import is_dfr
from .majorization import (
    HFunction,
    ParamMatrix,
    chain_apply,
    collapse_chain,
    h_eval,
    in_S_n,
    submajorization_violation,
    validate_h,
)
from .orders import OrderVerdict, check_disp, check_hr, check_rh, check_st

__all__ = [
    "THEOREM_IDS",
    "CHAIN_TOLERANCE",
    "Condition",
    "ImpliedOrder",
    "TheoremVerdict",
    "check_thm_largest_chain",
    "check_thm_largest_rh",
    "check_thm_smallest_st",
    "check_thm_smallest_hr",
    "check_thm_smallest_disp",
    "check_largest_bound",
    "check_smallest_bound",
    "check_bounds",
]

THEOREM_IDS = (
    "largest_st_two_risks",
    "largest_st_single_t",
    "largest_st_same_structure",
    "largest_st_chain",
    "largest_rh",
    "smallest_st",
    "smallest_hr",
    "smallest_disp",
    "largest_bound",
    "smallest_bound",
)

# Published parameter vectors carry four decimals.
CHAIN_TOLERANCE = 5e-4


class Condition(NamedTuple):
    name: str
    holds: bool
    detail: str = ""


class ImpliedOrder(NamedTuple):
    order_kind: str
    smaller: str
    larger: str

    def __str__(self):
        return f"{self.smaller} <=_{self.order_kind} {self.larger}"


@dataclass
class TheoremVerdict:
    theorem_id: str
    conditions: list[Condition]
    implied_order: ImpliedOrder | None = None
    numeric_confirmation: OrderVerdict | None = None
    exploratory: bool = False
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.theorem_id not in THEOREM_IDS:
            raise ValueError(f"unknown theorem id {self.theorem_id!r}")
        if self.implied_order is not None and not self.hypotheses_hold:
            raise ValueError("an ordering can only be implied when every hypothesis holds")

    @property
    def hypotheses_hold(self) -> bool:
        return all(c.holds for c in self.conditions)

    @property
    def confirmed(self) -> bool | None:
        """True/False once an implied ordering has been checked numerically."""
        if self.implied_order is None or self.numeric_confirmation is None:
            return None
        return self.numeric_confirmation.holds

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "conditions": [c._asdict() for c in self.conditions],
            "hypotheses_hold": self.hypotheses_hold,
            "implied_order": None if self.implied_order is None else {**self.implied_order._asdict(), "statement": str(self.implied_order)},
            "numeric_confirmation": None if self.numeric_confirmation is None else self.numeric_confirmation.to_dict(),
            "exploratory": self.exploratory,
            "confirmed": self.confirmed,
            "notes": self.notes,
        }

    def render(self) -> str:
        lines = [f"[{self.theorem_id}]"]
        for c in self.conditions:
            mark = "x" if c.holds else " "
            lines.append(f"  [{mark}] {c.name}" + (f"  ({c.detail})" if c.detail else ""))
        if self.implied_order is not None:
            lines.append(f"  implies: {self.implied_order}")
        else:
            lines.append("  implies: nothing (hypotheses not met)")
        v = self.numeric_confirmation
        if v is not None:
            label = "exploratory check" if self.exploratory else "numeric confirmation"
            state = "holds" if v.holds else f"fails at {v.witness}"
            lines.append(f"  {label}: {v.order_kind} {state}, margin {v.margin:.3e}")
        return "\n".join(lines)


def _same_setting(pf: Portfolio, pf_star: Portfolio):
    if pf.base != pf_star.base:
        raise ValueError("both portfolios must share the baseline distribution")
    if pf.n != pf_star.n:
        raise ValueError(f"portfolios have different sizes {pf.n} and {pf_star.n}")


def _h_condition(h: HFunction | None) -> Condition:
    name = "h strictly increasing and concave with nonzero derivative"
    if h is None:
        return Condition(name, False, "no h supplied")
    check = validate_h(h)
    if check.valid:
        return Condition(name, True, h.kind)
    failed = [k for k, v in check.diagnostics.items() if v is False]
    return Condition(name, False, "failed: " + ", ".join(failed))


def _sn_condition(m: ParamMatrix, label="(lambda, h(p)) in S_n") -> Condition:
    res = in_S_n(m)
    return Condition(label, res.holds, res.reason)


def _finish(theorem_id, conditions, order, confirm, notes=None) -> TheoremVerdict:
    """Attach the implied order when warranted and run the numeric check."""
    ok = all(c.holds for c in conditions)
    verdict = TheoremVerdict(
        theorem_id,
        conditions,
        implied_order=order if ok else None,
        exploratory=not ok,
        notes=notes or {},
    )
    verdict.numeric_confirmation = confirm() if confirm is not None else None
    return verdict


def _max_name(n):
    return f"Y[{n}:{n}]"


def _min_name(n):
    return f"Y[1:{n}]"


def check_thm_largest_chain(
    pf: Portfolio,
    pf_star: Portfolio,
    h: HFunction | None,
    chain,
    grid: GridSpec = GridSpec(),
) -> TheoremVerdict:
    """Largest claims under chain majorization of the (lam, h(p)) matrix.

    A single T-transform, a chain of transforms sharing one swap, and a mixed
    chain are distinguished; only the mixed case requires the partial products
    to stay in S_n.  Same-structure runs are collapsed first.
    """
    _same_setting(pf, pf_star)
    chain = list(chain or [])
    n = pf.n
    collapsed = collapse_chain(chain)
    if n == 2:
        theorem_id = "largest_st_two_risks"
    elif len(chain) <= 1:
        theorem_id = "largest_st_single_t"
    elif len(collapsed) == 1:
        theorem_id = "largest_st_same_structure"
    else:
        theorem_id = "largest_st_chain"

    conditions = [_h_condition(h)]
    notes = {"chain_length": len(chain), "collapsed_length": len(collapsed)}
    if h is None:
        conditions.append(Condition("(lambda, h(p)) in S_n", False, "no h supplied"))
        conditions.append(Condition("T-transform chain supplied", bool(chain), ""))
        conditions.append(Condition("chain maps (lambda, h(p)) onto (lambda*, h(p*))", False, "no h supplied"))
    else:
        start = ParamMatrix.from_portfolio(pf, h)
        target = ParamMatrix.from_portfolio(pf_star, h)
        conditions.append(_sn_condition(start))
        conditions.append(Condition("T-transform chain supplied", bool(chain), "" if chain else "no chain supplied"))
        if chain:
            final, _ = chain_apply(start, chain)
            err = float(np.max(np.abs(final.as_array() - target.as_array())))
            notes["chain_result"] = {"lambda": list(final.row_lambda), "h_p": list(final.row_u)}
            conditions.append(
                Condition(
                    "chain maps (lambda, h(p)) onto (lambda*, h(p*))",
                    err <= CHAIN_TOLERANCE,
                    f"max entry error {err:.2e} (tolerance {CHAIN_TOLERANCE:g})",
                )
            )
        else:
            conditions.append(Condition("chain maps (lambda, h(p)) onto (lambda*, h(p*))", False, "no chain supplied"))
        if theorem_id == "largest_st_chain":
            _, steps = chain_apply(start, collapsed)
            bad = [k + 1 for k, m in enumerate(steps[:-1]) if not in_S_n(m).holds]
            conditions.append(
                Condition(
                    "partial products of the chain in S_n",
                    not bad,
                    "" if not bad else f"partial product(s) {bad} leave S_n",
                )
            )
    order = ImpliedOrder("st", "Y*" + _max_name(n)[1:], _max_name(n))
    return _finish(theorem_id, conditions, order, lambda: check_st(pf_star.largest(), pf.largest(), grid), notes)


def check_thm_largest_rh(pf: Portfolio, pf_star: Portfolio, h: HFunction | None, grid: GridSpec = GridSpec()) -> TheoremVerdict:
    """Largest claims of portfolios with one common lam, compared in the reversed hazard rate order."""
    _same_setting(pf, pf_star)
    n = pf.n
    conditions = [_h_condition(h)]
    all_lam = np.concatenate((pf.lam, pf_star.lam))
    common = bool(np.all(all_lam == all_lam[0]))
    conditions.append(
        Condition("common lambda in both portfolios", common, "" if common else "lambda vectors are not one common value")
    )
    if h is None:
        conditions.append(Condition("h(p*) weakly submajorized by h(p)", False, "no h supplied"))
    else:
        k = submajorization_violation(h_eval(h, pf_star.p), h_eval(h, pf.p))
        conditions.append(
            Condition(
                "h(p*) weakly submajorized by h(p)",
                k is None,
                "" if k is None else f"sum of the {k} largest h(p*) exceeds that of h(p)",
            )
        )
    order = ImpliedOrder("rh", "Y*" + _max_name(n)[1:], _max_name(n))
    return _finish("largest_rh", conditions, order, lambda: check_rh(pf_star.largest(), pf.largest(), grid))


def _smallest_conditions(pf: Portfolio, pf_star: Portfolio) -> list[Condition]:
    prod, prod_star = float(np.prod(pf.p)), float(np.prod(pf_star.p))
    k = submajorization_violation(pf.lam, pf_star.lam)
    return [
        Condition("prod p* <= prod p", prod_star <= prod, f"{prod_star:.6g} vs {prod:.6g}"),
        Condition(
            "lambda weakly submajorized by lambda*",
            k is None,
            "" if k is None else f"sum of the {k} largest lambda exceeds that of lambda*",
        ),
    ]


def check_thm_smallest_st(pf: Portfolio, pf_star: Portfolio, grid: GridSpec = GridSpec()) -> TheoremVerdict:
    _same_setting(pf, pf_star)
    n = pf.n
    order = ImpliedOrder("st", "Y*" + _min_name(n)[1:], _min_name(n))
    return _finish("smallest_st", _smallest_conditions(pf, pf_star), order, lambda: check_st(pf_star.smallest(), pf.smallest(), grid))


def check_thm_smallest_hr(pf: Portfolio, pf_star: Portfolio, grid: GridSpec = GridSpec()) -> TheoremVerdict:
    """Same hypotheses as the st result; the hr check includes the step at the atom."""
    _same_setting(pf, pf_star)
    n = pf.n
    order = ImpliedOrder("hr", "Y*" + _min_name(n)[1:], _min_name(n))
    notes = {"atom_ratio": float(np.prod(pf.p) / np.prod(pf_star.p))}
    return _finish(
        "smallest_hr", _smallest_conditions(pf, pf_star), order, lambda: check_hr(pf_star.smallest(), pf.smallest(), grid), notes
    )


def check_thm_smallest_disp(pf: Portfolio, pf_star: Portfolio, grid: GridSpec = GridSpec()) -> TheoremVerdict:
    """Dispersive comparison of smallest claims over a DFR baseline.

    The density bound at 0 is evaluated exactly as stated; a baseline whose
    density is infinite at 0 fails it.
    """
    _same_setting(pf, pf_star)
    n = pf.n
    conditions = _smallest_conditions(pf, pf_star)
    dfr = is_dfr(pf.base, grid)
    conditions.append(Condition("baseline is DFR", dfr.holds, "" if dfr.holds else f"hazard increases near x={dfr.witness:.6g}"))
    out = [i + 1 for i, v in enumerate(pf_star.lambdas) if not 0.0 <= v <= 1.0]
    conditions.append(Condition("0 <= lambda*_i <= 1", not out, "" if not out else f"violated at index {out}"))
    f0 = float(pf.base.pdf(0.0))
    limit = (1.0 - float(np.prod(pf_star.p))) / float(np.sum(1.0 + pf_star.lam))
    ok = math.isfinite(f0) and f0 <= limit
    conditions.append(Condition("f(0) <= (1 - prod p*) / sum(1 + lambda*)", ok, f"f(0)={f0:.6g}, bound={limit:.6g}"))
    order = ImpliedOrder("disp", "Y*" + _min_name(n)[1:], _min_name(n))
    return _finish("smallest_disp", conditions, order, lambda: check_disp(pf_star.smallest(), pf.smallest(), grid))


def check_largest_bound(pf: Portfolio, h: HFunction | None, grid: GridSpec = GridSpec()) -> TheoremVerdict:
    """Homogeneous two-risk lower bound on the survival of the largest claim.

    The bound is itself the survival function of a homogeneous portfolio, so
    the comparison is an st check with that portfolio as the smaller side.
    """
    conditions = [Condition("exactly two risks", pf.n == 2, f"n={pf.n}"), _h_condition(h)]
    if h is not None and pf.n == 2:
        conditions.append(_sn_condition(ParamMatrix.from_portfolio(pf, h), "(lambda, h(p)) in S_2"))
        bound = largest_bound_portfolio(pf, h)
        confirm = lambda: check_st(bound.largest(), pf.largest(), grid)  # noqa: E731
        notes = {"bound_portfolio": bound.to_dict()}
    else:
        conditions.append(Condition("(lambda, h(p)) in S_2", False, "not evaluated"))
        confirm, notes = None, {}
    order = ImpliedOrder("st", "homogeneous bound", _max_name(2))
    return _finish("largest_bound", conditions, order, confirm, notes)


def check_smallest_bound(pf: Portfolio, grid: GridSpec = GridSpec()) -> TheoremVerdict:
    bound = smallest_bound_portfolio(pf)
    k = submajorization_violation(pf.lam, bound.lam)
    conditions = [
        Condition(
            "lambda weakly submajorized by the homogeneous lambda~",
            k is None,
            f"lambda~={bound.lambdas[0]:.6g}",
        ),
        Condition(
            "p~^n equals prod p",
            math.isclose(float(np.prod(bound.p)), float(np.prod(pf.p)), rel_tol=1e-12),
            f"p~={bound.probs[0]:.6g}",
        ),
    ]
    order = ImpliedOrder("st", "homogeneous bound", _min_name(pf.n))
    return _finish(
        "smallest_bound",
        conditions,
        order,
        lambda: check_st(bound.smallest(), pf.smallest(), grid),
        {"bound_portfolio": bound.to_dict()},
    )


def check_bounds(pf: Portfolio, h: HFunction | None = None, grid: GridSpec = GridSpec()) -> list[TheoremVerdict]:
    """Both homogeneous-portfolio bounds; the largest-claim one needs n = 2 and h."""
    return [check_largest_bound(pf, h, grid), check_smallest_bound(pf, grid)]
