"""Scenario ingestion and validation.

Scenarios are JSON files with explicit units (meters, seconds, radians).
Unknown fields are rejected so typos fail fast.  On load the pursuers are
relabeled into counterclockwise hull order; the permutation applied is kept
on the scenario so reports can be traced back to the input order.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

from .errors import (
    DegenerateHull,
    ParseError,
    RedundantPursuer,
    SpeedRatioOutOfRange,
    ValidationError,
)
from .geometry import Vec2, area_vector, hull_order, polygon_area
from .policies import PolicySpec
from .simulation import AgentParams, Thresholds, WorldState
from .strategies import PhiSelection

__all__ = ["Scenario", "load_scenario", "parse_scenario", "bundled_scenario_path"]

_TOP_KEYS = {
    "pursuer_starts",
    "evader_start",
    "params",
    "phi_rule",
    "policy",
    "dt",
    "t_max",
    "seed",
    "thresholds",
}
_PARAM_KEYS = {"v", "mu_max", "r_c"}
_POLICY_KEYS = {"kind", "period", "hold", "seed", "speed_fraction"}
_PHI_KEYS = {"rule", "phi", "phi_j", "phi_k"}
_THRESHOLD_KEYS = {"eps_act", "eps_exit", "eps_violation", "lambda_tol"}


@dataclass(frozen=True)
class Scenario:
    """Fully resolved experiment description.

    ``input_order`` maps each counterclockwise label (position i = label
    i + 1) to the 1-based index of that pursuer in the source file.
    """

    pursuer_starts: tuple[Vec2, ...]
    evader_start: Vec2
    params: AgentParams
    phi: PhiSelection
    policy: PolicySpec
    dt: float
    t_max: Optional[float]
    seed: int
    thresholds: Thresholds
    input_order: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.pursuer_starts)

    def initial_world(self) -> WorldState:
        return WorldState(
            t=0.0, pursuers=self.pursuer_starts, evader=self.evader_start
        )

    def with_overrides(
        self,
        mu_max: Optional[float] = None,
        evader_start: Optional[Vec2] = None,
        policy: Optional[PolicySpec] = None,
        seed: Optional[int] = None,
    ) -> "Scenario":
        """Derive a variant, re-resolving the rotation angles when they follow
        the lower-bound rule and the evader speed changes."""
        params = self.params
        phi = self.phi
        if mu_max is not None and mu_max != params.mu_max:
            params = dataclasses.replace(params, mu_max=mu_max)
            if phi.rule == "lower_bound":
                phi = PhiSelection.lower_bound(mu_max)
        out = dataclasses.replace(
            self,
            params=params,
            phi=phi,
            evader_start=evader_start if evader_start is not None else self.evader_start,
            policy=policy if policy is not None else self.policy,
            seed=seed if seed is not None else self.seed,
        )
        _validate(out, reorder=False)
        return out

    def to_dict(self) -> dict:
        return {
            "pursuer_starts": [p.as_tuple() for p in self.pursuer_starts],
            "evader_start": self.evader_start.as_tuple(),
            "params": {
                "v": list(self.params.v),
                "mu_max": self.params.mu_max,
                "r_c": self.params.r_c,
            },
            "phi_rule": {
                "rule": self.phi.rule,
                "phi_j": self.phi.phi_j,
                "phi_k": self.phi.phi_k,
            },
            "policy": {
                "kind": self.policy.kind,
                "period": self.policy.period,
                "hold": self.policy.hold,
                "seed": self.policy.seed,
                "speed_fraction": self.policy.speed_fraction,
            },
            "dt": self.dt,
            "t_max": self.t_max,
            "seed": self.seed,
            "thresholds": {
                "eps_act": self.thresholds.eps_act,
                "eps_exit": self.thresholds.eps_exit,
                "eps_violation": self.thresholds.eps_violation,
                "lambda_tol": self.thresholds.lam_tol,
            },
            "input_order": list(self.input_order),
        }


def bundled_scenario_path(name: str) -> Path:
    """Path of a scenario file shipped with the package (e.g. "table1.json")."""
    ref = resources.files("encircle").joinpath("data", name)
    with resources.as_file(ref) as path:
        return Path(path)


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Load and validate a scenario file, filling documented defaults."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}"
        ) from exc
    return parse_scenario(raw, source=str(path))


def _reject_unknown(d: dict, allowed: set[str], ctx: str) -> None:
    unknown = sorted(set(d) - allowed)
    if unknown:
        raise ParseError(f"{ctx}: unknown field(s) {', '.join(unknown)}")


def _number(value: Any, ctx: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{ctx}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ParseError(f"{ctx}: must be finite, got {value!r}")
    return float(value)


def _point(value: Any, ctx: str) -> Vec2:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ParseError(f"{ctx}: expected [x, y], got {value!r}")
    return Vec2(_number(value[0], f"{ctx}[0]"), _number(value[1], f"{ctx}[1]"))


def parse_scenario(raw: Any, source: str = "<scenario>") -> Scenario:
    if not isinstance(raw, dict):
        raise ParseError(f"{source}: top level must be a JSON object")
    _reject_unknown(raw, _TOP_KEYS, source)
    for key in ("pursuer_starts", "evader_start", "params"):
        if key not in raw:
            raise ParseError(f"{source}: missing required field {key!r}")

    starts_raw = raw["pursuer_starts"]
    if not isinstance(starts_raw, list) or len(starts_raw) < 3:
        raise ParseError(f"{source}: pursuer_starts needs at least 3 points")
    pursuers = tuple(
        _point(p, f"{source}: pursuer_starts[{i}]") for i, p in enumerate(starts_raw)
    )
    evader = _point(raw["evader_start"], f"{source}: evader_start")

    pd = raw["params"]
    if not isinstance(pd, dict):
        raise ParseError(f"{source}: params must be an object")
    _reject_unknown(pd, _PARAM_KEYS, f"{source}: params")
    mu_max = _number(pd.get("mu_max", 0.0), f"{source}: params.mu_max")
    r_c = _number(pd.get("r_c"), f"{source}: params.r_c") if "r_c" in pd else None
    if r_c is None:
        raise ParseError(f"{source}: params.r_c is required")
    v_raw = pd.get("v", 1.0)
    if isinstance(v_raw, list):
        v = tuple(_number(x, f"{source}: params.v[{i}]") for i, x in enumerate(v_raw))
        if len(v) != len(pursuers):
            raise ParseError(f"{source}: params.v must list one speed per pursuer")
    else:
        v = (_number(v_raw, f"{source}: params.v"),) * len(pursuers)

    phi_raw = raw.get("phi_rule", {"rule": "lower_bound"})
    if not isinstance(phi_raw, dict):
        raise ParseError(f"{source}: phi_rule must be an object")
    _reject_unknown(phi_raw, _PHI_KEYS, f"{source}: phi_rule")
    rule = phi_raw.get("rule", "lower_bound")
    if rule == "lower_bound":
        try:
            phi = PhiSelection.lower_bound(mu_max)
        except SpeedRatioOutOfRange as exc:
            raise ValidationError(f"{source}: {exc}") from exc
    elif rule == "fixed":
        phi = PhiSelection.fixed(_number(phi_raw.get("phi"), f"{source}: phi_rule.phi"))
    elif rule == "per_edge":
        phi = PhiSelection.per_edge(
            _number(phi_raw.get("phi_j"), f"{source}: phi_rule.phi_j"),
            _number(phi_raw.get("phi_k"), f"{source}: phi_rule.phi_k"),
        )
    else:
        raise ParseError(f"{source}: phi_rule.rule must be lower_bound|fixed|per_edge")

    pol_raw = raw.get("policy", {"kind": "stationary"})
    if not isinstance(pol_raw, dict):
        raise ParseError(f"{source}: policy must be an object")
    _reject_unknown(pol_raw, _POLICY_KEYS, f"{source}: policy")
    if "kind" not in pol_raw:
        raise ParseError(f"{source}: policy.kind is required")
    seed_val = pol_raw.get("seed")
    if seed_val is not None and not isinstance(seed_val, int):
        raise ParseError(f"{source}: policy.seed must be an integer")
    policy = PolicySpec(
        kind=pol_raw["kind"],
        period=_number(pol_raw.get("period", 0.3), f"{source}: policy.period"),
        hold=_number(pol_raw.get("hold", 0.1), f"{source}: policy.hold"),
        seed=seed_val,
        speed_fraction=_number(
            pol_raw.get("speed_fraction", 1.0), f"{source}: policy.speed_fraction"
        ),
    )

    dt = _number(raw.get("dt", 0.005), f"{source}: dt")
    t_max = (
        _number(raw["t_max"], f"{source}: t_max")
        if raw.get("t_max") is not None
        else None
    )
    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ParseError(f"{source}: seed must be an integer")

    thr_raw = raw.get("thresholds", {})
    if not isinstance(thr_raw, dict):
        raise ParseError(f"{source}: thresholds must be an object")
    _reject_unknown(thr_raw, _THRESHOLD_KEYS, f"{source}: thresholds")

    scenario = _assemble(
        pursuers, evader, v, mu_max, r_c, phi, policy, dt, t_max, seed, thr_raw, source
    )
    return scenario


def _assemble(
    pursuers: tuple[Vec2, ...],
    evader: Vec2,
    v: tuple[float, ...],
    mu_max: float,
    r_c: float,
    phi: PhiSelection,
    policy: PolicySpec,
    dt: float,
    t_max: Optional[float],
    seed: int,
    thr_raw: dict,
    source: str,
) -> Scenario:
    try:
        order = hull_order(list(pursuers))
    except RedundantPursuer as exc:
        raise ValidationError(f"{source}: {exc} at t=0") from exc
    except DegenerateHull as exc:
        raise ValidationError(f"{source}: {exc}") from exc

    perm = order.indices  # label i+1 <- input pursuer perm[i]
    relabeled = tuple(pursuers[i - 1] for i in perm)
    v_relabeled = tuple(v[i - 1] for i in perm)

    hull_area = polygon_area(relabeled)
    defaults = Thresholds.for_hull_area(hull_area)
    eps_act = float(thr_raw.get("eps_act", defaults.eps_act))
    thresholds = Thresholds(
        eps_act=eps_act,
        eps_exit=float(thr_raw.get("eps_exit", 2 * eps_act)),
        eps_violation=float(thr_raw.get("eps_violation", 5 * eps_act)),
        lam_tol=float(thr_raw.get("lambda_tol", defaults.lam_tol)),
    )

    scenario = Scenario(
        pursuer_starts=relabeled,
        evader_start=evader,
        params=AgentParams(v=v_relabeled, mu_max=mu_max, r_c=r_c),
        phi=phi,
        policy=policy,
        dt=dt,
        t_max=t_max,
        seed=seed,
        thresholds=thresholds,
        input_order=perm,
    )
    _validate(scenario, reorder=False, source=source)
    return scenario


def _validate(scenario: Scenario, reorder: bool, source: str = "<scenario>") -> None:
    params = scenario.params
    if scenario.dt <= 0:
        raise ValidationError(f"{source}: dt must be > 0")
    if scenario.t_max is not None and scenario.t_max <= 0:
        raise ValidationError(f"{source}: t_max must be > 0")
    if any(vi != 1.0 for vi in params.v):
        raise ValidationError(
            f"{source}: the capture controller requires unit pursuer speeds"
        )
    if not 0.0 <= params.mu_max < 1.0:
        raise ValidationError(
            f"{source}: the capture controller requires 0 <= mu_max < 1, got {params.mu_max}"
        )
    if not scenario.phi.in_theorem2_range(params.mu_max):
        lo, hi = (
            math.asin(params.mu_max),
            math.pi / 2 - math.asin(1 - params.mu_max),
        )
        raise ValidationError(
            f"{source}: phi angles ({scenario.phi.phi_j:.6g}, {scenario.phi.phi_k:.6g}) "
            f"outside the admissible interval [{lo:.6g}, {hi:.6g}]"
        )

    world = scenario.initial_world()
    areas = area_vector(world)
    if areas.min() <= 0:
        raise ValidationError(
            f"{source}: evader start is not strictly inside the hull "
            f"(min area {areas.min():.6g})"
        )
    if min(world.distances()) <= params.r_c:
        raise ValidationError(
            f"{source}: evader start lies within the capture radius of a pursuer"
        )
