"""Command-line front end: ``tgclaims {check,verify,curves,simulate}``.

Exit codes: 0 success, 2 when a requested hypothesis, order or Monte Carlo
check fails, 1 on bad input or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from .orders import ORDER_KINDS, EmpiricalSF, variance_of_sample, check_order, comparison_grid, dkw_radius
from .scenario import MAX_SEED, Scenario, ScenarioError, load_scenarios
from .theorems import (
    check_bounds,
    check_thm_largest_chain,
    check_thm_largest_rh,
    check_thm_smallest_disp,
    check_thm_smallest_hr,
    check_thm_smallest_st,
)

EXIT_OK, EXIT_INPUT, EXIT_FAILED = 0, 1, 2

THEOREM_SELECTORS = ("auto", "largest-chain", "largest-rh", "smallest-st", "smallest-hr", "smallest-disp", "bounds")
CURVE_POINTS = 512
DEFAULT_MC_COUNT = 1_000_000
MIN_MC_COUNT = 10_000
DKW_CONFIDENCE = 0.999


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_atomic(path: Path, text: str) -> None:
    """Write via a temp file in the same directory and rename over the target."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def _prepare_out(out: str | None) -> Path | None:
    if out is None:
        return None
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


# -- check ------------------------------------------------------------------


def _theorem_verdicts(sc: Scenario, selector: str):
    a, b, grid = sc.portfolio_a, sc.portfolio_b, sc.grid
    if selector == "auto":
        if sc.extreme == "largest":
            selector = "largest-chain" if sc.chain else "largest-rh"
        else:
            selector = "smallest-st"
    if selector == "largest-chain":
        return [check_thm_largest_chain(a, b, sc.h, sc.chain, grid)]
    if selector == "largest-rh":
        return [check_thm_largest_rh(a, b, sc.h, grid)]
    if selector == "smallest-st":
        return [check_thm_smallest_st(a, b, grid)]
    if selector == "smallest-hr":
        return [check_thm_smallest_hr(a, b, grid)]
    if selector == "smallest-disp":
        return [check_thm_smallest_disp(a, b, grid)]
    # bounds apply to each portfolio on its own
    return check_bounds(a, sc.h, grid) + check_bounds(b, sc.h, grid)


def cmd_check(args) -> int:
    scenarios = _load(args)
    out = _prepare_out(args.out)
    if args.validate_only:
        print(f"{len(scenarios)} scenario(s) valid")
        return EXIT_OK
    reports, text, code = [], [], EXIT_OK
    for sc in scenarios:
        verdicts = _theorem_verdicts(sc, args.theorem)
        for v in verdicts:
            if not v.hypotheses_hold or v.confirmed is False:
                code = EXIT_FAILED
        reports.append({"scenario": sc.to_dict(), "theorem": args.theorem, "verdicts": [v.to_dict() for v in verdicts]})
        text.append(f"== {sc.name} ==")
        text.extend(v.render() for v in verdicts)
    rendered = "\n".join(text) + "\n"
    print(rendered, end="")
    if out is not None:
        write_atomic(out / "check_report.json", _dump({"reports": reports, "exit_code": code}))
        write_atomic(out / "check_report.txt", rendered)
    return code


# -- verify -----------------------------------------------------------------


def cmd_verify(args) -> int:
    scenarios = _load(args)
    out = _prepare_out(args.out)
    if args.validate_only:
        print(f"{len(scenarios)} scenario(s) valid")
        return EXIT_OK
    reports, code = [], EXIT_OK
    for sc in scenarios:
        d_star, d = sc.distributions()
        verdict = check_order(args.order, d_star, d, sc.grid)
        if not verdict.holds:
            code = EXIT_FAILED
        state = "holds" if verdict.holds else f"fails at {verdict.witness}"
        print(f"{sc.name}: Y*[{sc.extreme}] <=_{args.order} Y[{sc.extreme}] {state} (margin {verdict.margin:.3e})")
        reports.append({"scenario": sc.to_dict(), "verdict": verdict.to_dict()})
    if out is not None:
        write_atomic(out / "verify_report.json", _dump({"reports": reports, "exit_code": code}))
    return code


# -- curves -----------------------------------------------------------------


def _fmt(v: float) -> str:
    return repr(float(v))


def _curve_rows(dist, x, full: bool):
    sf = np.asarray(dist.sf(x))
    if not full:
        return "x,sf\n" + "".join(f"{_fmt(a)},{_fmt(b)}\n" for a, b in zip(x, sf))
    cdf = np.asarray(dist.cdf(x))
    if dist.kind == "smallest":
        rate = np.asarray(dist.continuous_hazard(x))
    else:
        rate = np.asarray(dist.continuous_reversed_hazard(x))
    return "x,cdf,sf,hazard_or_rh\n" + "".join(
        f"{_fmt(a)},{_fmt(c)},{_fmt(s)},{_fmt(r)}\n" for a, c, s, r in zip(x, cdf, sf, rate)
    )


def cmd_curves(args) -> int:
    scenarios = _load(args)
    if args.validate_only:
        print(f"{len(scenarios)} scenario(s) valid")
        return EXIT_OK
    out = _prepare_out(args.out or ".")
    points = args.grid_points or CURVE_POINTS
    for sc in scenarios:
        d_star, d = sc.distributions()
        x = comparison_grid(d_star, d, sc.grid.refined(points))
        for label, dist in (("", d), ("_star", d_star)):
            stem = f"{sc.name}_{sc.extreme}{label}"
            write_atomic(out / f"{stem}.csv", _curve_rows(dist, x, full=False))
            write_atomic(out / f"{stem}_full.csv", _curve_rows(dist, x, full=True))
            print(out / f"{stem}.csv")
    return EXIT_OK


# -- simulate ---------------------------------------------------------------


def simulate_scenario(sc: Scenario, count: int, seed: int) -> dict:
    """Monte Carlo fidelity report for both extremes of both portfolios."""
    children = np.random.SeedSequence(seed).spawn(4)
    radius = dkw_radius(count, DKW_CONFIDENCE)
    result = {"count": count, "seed": seed, "dkw_radius": radius, "dkw_confidence": DKW_CONFIDENCE, "extremes": {}}
    passed = True
    k = 0
    for extreme in ("smallest", "largest"):
        d_star, d = sc.distributions(extreme)
        block = {}
        for label, dist in (("portfolio_a", d), ("portfolio_b", d_star)):
            draws = dist.sample(count, np.random.default_rng(children[k]))
            k += 1
            emp = EmpiricalSF(draws)
            dist_sup = emp.sup_distance(dist)
            atom = dist.atom_at_zero
            freq = emp.atom_frequency()
            atom_se = math.sqrt(max(atom * (1.0 - atom), 0.0) / count)
            var = variance_of_sample(draws)
            entry = {
                "sup_distance": dist_sup,
                "within_dkw": dist_sup <= radius,
                "atom_at_zero": atom,
                "atom_frequency": freq,
                "atom_se": atom_se,
                "atom_within_3se": abs(freq - atom) <= 3.0 * atom_se + 1e-15,
                "variance": var.variance,
                "variance_se": var.standard_error,
            }
            passed = passed and entry["within_dkw"] and entry["atom_within_3se"]
            block[label] = entry
        va, vb = block["portfolio_a"], block["portfolio_b"]
        se = math.hypot(va["variance_se"], vb["variance_se"])
        block["variance_comparison"] = {
            "var_b_minus_var_a": vb["variance"] - va["variance"],
            "se": se,
            "var_b_le_var_a_within_3se": vb["variance"] <= va["variance"] + 3.0 * se,
        }
        result["extremes"][extreme] = block
    result["passed"] = passed
    return result


def cmd_simulate(args) -> int:
    scenarios = _load(args)
    if args.validate_only:
        print(f"{len(scenarios)} scenario(s) valid")
        return EXIT_OK
    count = args.count if args.count is not None else DEFAULT_MC_COUNT
    if count < MIN_MC_COUNT:
        print(f"error: --count must be at least {MIN_MC_COUNT}", file=sys.stderr)
        return EXIT_INPUT
    out = _prepare_out(args.out)
    reports, code = [], EXIT_OK
    for sc in scenarios:
        seed = sc.seed if args.seed is None else args.seed
        res = simulate_scenario(sc, count, seed)
        if not res["passed"]:
            code = EXIT_FAILED
        for extreme, block in res["extremes"].items():
            for label in ("portfolio_a", "portfolio_b"):
                e = block[label]
                print(
                    f"{sc.name} {extreme} {label}: sup|F_n - F| = {e['sup_distance']:.5f} "
                    f"(radius {res['dkw_radius']:.5f}), atom {e['atom_frequency']:.5f} vs {e['atom_at_zero']:.5f}, "
                    f"var {e['variance']:.5g} +/- {e['variance_se']:.2g}"
                )
        reports.append({"scenario": sc.to_dict(), "simulation": res})
    if out is not None:
        write_atomic(out / "simulate_report.json", _dump({"reports": reports, "exit_code": code}))
    return code


# -- plumbing ---------------------------------------------------------------


def _load(args) -> list[Scenario]:
    scenarios = load_scenarios(args.scenario)
    return [sc.with_grid_points(getattr(args, "grid_points", None)) for sc in scenarios]


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < MAX_SEED:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2**64)")
    return value


def _grid_points(text: str) -> int:
    value = int(text)
    if value < 16:
        raise argparse.ArgumentTypeError("grid points must be >= 16")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tgclaims",
        description="Extreme claim amounts in transmuted-G portfolios: theorem checks, order checks, curves, Monte Carlo.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, grid=True):
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--out", help="directory for reports / CSV files")
        if grid:
            p.add_argument("--grid-points", type=_grid_points, help="override the scenario grid size")
        p.add_argument("--validate-only", action="store_true", help="parse and validate the scenario, then stop")

    p = sub.add_parser("check", help="check theorem hypotheses and confirm the implied ordering")
    common(p)
    p.add_argument("--theorem", choices=THEOREM_SELECTORS, default="auto")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", help="numerically check one stochastic order, b <= a")
    common(p)
    p.add_argument("--order", choices=ORDER_KINDS, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("curves", help="write survival-function curves as CSV")
    common(p)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("simulate", help="Monte Carlo comparison against the analytic distributions")
    common(p, grid=False)
    p.add_argument("--count", type=int, help=f"draws per distribution (default {DEFAULT_MC_COUNT})")
    p.add_argument("--seed", type=_seed, help="override the scenario seed")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {args.scenario}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
