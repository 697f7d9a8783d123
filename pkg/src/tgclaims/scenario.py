"""Scenario files: JSON descriptions of two portfolios to compare.

A file holds one scenario object, or ``{"scenarios": [...]}`` with several.
Example::

    {
      "name": "exp_largest",
      "baseline": {"kind": "exponential", "mean": 0.5},
      "portfolio_a": {"lambdas": [-0.7, 0.8, -0.9], "probs": [0.4, 0.2, 0.7]},
      "portfolio_b": {"lambdas": [-0.1806, 0.0896, -0.709], "probs": [0.4345, 0.3698, 0.4711]},
      "h": "log_shift",
      "chain": [{"omega": 0.9, "i": 2, "j": 3}, {"omega": 0.3, "i": 1, "j": 3}],
      "extreme": "largest",
      "grid": {"point_count": 1024, "coverage": [1e-4, 0.9999], "slack": 1e-12},
      "seed": 7
    }

``portfolio_a`` is the unstarred portfolio and ``portfolio_b`` the starred
one; every check asks whether b's extreme claim is the smaller.  Chain
indices are 1-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .baseline import BaselineSpec, baseline_from_dict
from .claims import ExtremeDistribution, Portfolio
from .grid import GridSpec
from .majorization import HFunction, TTransform

__all__ = ["Scenario", "ScenarioError", "load_scenarios", "parse_scenarios", "scenario_from_dict"]

MAX_SEED = 2**64


class ScenarioError(ValueError):
    """Malformed scenario input; the message names the offending field or line."""


@dataclass(frozen=True)
class Scenario:
    name: str
    baseline: BaselineSpec
    portfolio_a: Portfolio
    portfolio_b: Portfolio
    h: HFunction | None = None
    chain: tuple = ()
    extreme: str = "smallest"
    grid: GridSpec = field(default_factory=GridSpec)
    seed: int = 0

    def distributions(self, extreme: str | None = None) -> tuple[ExtremeDistribution, ExtremeDistribution]:
        """(starred, unstarred) extreme-claim distributions."""
        kind = extreme or self.extreme
        return ExtremeDistribution(self.portfolio_b, kind), ExtremeDistribution(self.portfolio_a, kind)

    def with_grid_points(self, count: int | None) -> Scenario:
        return self if count is None else replace(self, grid=self.grid.refined(count))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "baseline": self.baseline.to_dict(),
            "portfolio_a": self.portfolio_a.to_dict(),
            "portfolio_b": self.portfolio_b.to_dict(),
            "h": None if self.h is None else self.h.to_dict(),
            "chain": [t.to_dict() for t in self.chain],
            "extreme": self.extreme,
            "grid": self.grid.to_dict(),
            "seed": self.seed,
        }


def _h_from(value, where) -> HFunction | None:
    if value is None:
        return None
    if isinstance(value, str):
        value = {"kind": value}
    if not isinstance(value, dict) or "kind" not in value:
        raise ScenarioError(f"{where}: expected a name or an object with 'kind'")
    try:
        if value["kind"] == "custom":
            return HFunction.tabulated(value["p"], value["u"])
        return HFunction(value["kind"])
    except (KeyError, ValueError, TypeError) as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def _portfolio(base, value, where) -> Portfolio:
    if not isinstance(value, dict):
        raise ScenarioError(f"{where}: expected an object with 'lambdas' and 'probs'")
    for key in ("lambdas", "probs"):
        if key not in value:
            raise ScenarioError(f"{where}.{key}: missing")
        if not isinstance(value[key], list) or not all(isinstance(v, (int, float)) for v in value[key]):
            raise ScenarioError(f"{where}.{key}: expected a list of numbers")
    try:
        return Portfolio(base, tuple(value["lambdas"]), tuple(value["probs"]))
    except ValueError as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def scenario_from_dict(d: dict, default_name: str = "scenario") -> Scenario:
    if not isinstance(d, dict):
        raise ScenarioError("scenario: expected a JSON object")
    known = {"name", "baseline", "portfolio_a", "portfolio_b", "h", "chain", "extreme", "grid", "seed"}
    extra = sorted(set(d) - known)
    if extra:
        raise ScenarioError(f"unknown field(s): {', '.join(extra)}")
    name = str(d.get("name", default_name))
    if "baseline" not in d:
        raise ScenarioError("baseline: missing")
    try:
        base = baseline_from_dict(d["baseline"])
    except (KeyError, ValueError, TypeError) as exc:
        raise ScenarioError(f"baseline: {exc}") from None
    for key in ("portfolio_a", "portfolio_b"):
        if key not in d:
            raise ScenarioError(f"{key}: missing")
    a = _portfolio(base, d["portfolio_a"], "portfolio_a")
    b = _portfolio(base, d["portfolio_b"], "portfolio_b")
    if a.n != b.n:
        raise ScenarioError(f"portfolio_b: has {b.n} risks but portfolio_a has {a.n}")
    h = _h_from(d.get("h"), "h")

    chain_spec = d.get("chain") or []
    if not isinstance(chain_spec, list):
        raise ScenarioError("chain: expected a list")
    if chain_spec and h is None:
        raise ScenarioError("h: required when a chain is given")
    chain = []
    for k, t in enumerate(chain_spec):
        where = f"chain[{k}]"
        try:
            chain.append(TTransform.from_one_based(t["omega"], t["i"], t["j"], a.n))
        except (KeyError, TypeError) as exc:
            raise ScenarioError(f"{where}: missing or malformed field {exc}") from None
        except ValueError as exc:
            raise ScenarioError(f"{where}: {exc}") from None

    extreme = d.get("extreme", "largest" if chain else "smallest")
    if extreme not in ("smallest", "largest"):
        raise ScenarioError(f"extreme: expected 'smallest' or 'largest', got {extreme!r}")

    g = d.get("grid") or {}
    try:
        grid = GridSpec(
            point_count=g.get("point_count", 1024),
            coverage=tuple(g.get("coverage", (1e-4, 1.0 - 1e-4))),
            slack=g.get("slack", 1e-12),
        )
    except (ValueError, TypeError, AttributeError) as exc:
        raise ScenarioError(f"grid: {exc}") from None

    seed = d.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < MAX_SEED:
        raise ScenarioError("seed: expected an integer in [0, 2**64)")
    return Scenario(name, base, a, b, h, tuple(chain), extreme, grid, seed)


def parse_scenarios(text: str, default_name: str = "scenario") -> list[Scenario]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if isinstance(data, dict) and "scenarios" in data:
        items = data["scenarios"]
        if not isinstance(items, list) or not items:
            raise ScenarioError("scenarios: expected a non-empty list")
        out = []
        for k, item in enumerate(items):
            try:
                out.append(scenario_from_dict(item, f"{default_name}_{k + 1}"))
            except ScenarioError as exc:
                raise ScenarioError(f"scenarios[{k}].{exc}") from None
        names = [s.name for s in out]
        if len(set(names)) != len(names):
            raise ScenarioError("scenarios: names must be unique")
        return out
    return [scenario_from_dict(data, default_name)]


def load_scenarios(path) -> list[Scenario]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc.strerror}") from None
    return parse_scenarios(text, path.stem)
