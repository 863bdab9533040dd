"""Fixed-step episode engine: explicit-Euler kinematics, phase switching with
hysteresis, capture detection with sub-step interpolation, and trace records.

``EpisodeRunner`` advances one control step at a time so the same engine
drives both offline runs and the live steering service; identical control
sequences therefore produce identical traces.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import IO, TYPE_CHECKING, Callable, Optional, Sequence, Union

from . import analysis
from .errors import (
    InvalidState,
    NotInitiallyEncircled,
    NumericalDivergence,
    RedundantPursuer,
)
from .geometry import (
    ActiveEdge,
    AreaVector,
    DEFAULT_LAMBDA_TOL,
    EdgeFrame,
    Vec2,
    area_vector,
    detect_active_edge,
    edge_frames,
    hull_order,
)
from .strategies import theorem2_controller

if TYPE_CHECKING:  # pragma: no cover
    from .policies import EvaderPolicy
    from .scenario import Scenario

__all__ = [
    "AgentParams",
    "Thresholds",
    "WorldState",
    "ControlInput",
    "PhaseState",
    "TraceRecord",
    "EpisodeResult",
    "Capture",
    "step",
    "detect_capture",
    "update_phase",
    "EpisodeRunner",
    "run_episode",
    "write_trace_csv",
    "TRACE_FLOAT_FORMAT",
]

log = logging.getLogger("encircle.simulation")

TRACE_FLOAT_FORMAT = ".9g"

# mu_max this close to 1 makes 10x the capture bound impractically long.
_NEAR_UNITY_MU = 0.95
_FALLBACK_T_MAX = 100.0


@dataclass(frozen=True)
class AgentParams:
    """Speeds and capture radius shared by one episode."""

    v: tuple[float, ...]
    mu_max: float
    r_c: float

    def __post_init__(self) -> None:
        if self.r_c <= 0:
            raise InvalidState(f"capture radius must be > 0, got {self.r_c}")
        if any(vi <= 0 for vi in self.v):
            raise InvalidState("every pursuer speed must be > 0")
        if self.mu_max < 0:
            raise InvalidState(f"mu_max must be >= 0, got {self.mu_max}")

    @property
    def n(self) -> int:
        return len(self.v)


@dataclass(frozen=True)
class Thresholds:
    """Tolerances for the switching surface, in m^2 (areas) and unitless (lam).

    The enter/exit pair forms a hysteresis band so the discontinuous switch at
    zero edge area does not chatter under fixed-step integration.
    """

    eps_act: float
    eps_exit: float
    eps_violation: float
    lam_tol: float = DEFAULT_LAMBDA_TOL

    def __post_init__(self) -> None:
        if not (self.eps_violation > self.eps_act > 0):
            raise InvalidState("require eps_violation > eps_act > 0")
        if self.eps_exit <= self.eps_act:
            raise InvalidState("require eps_exit > eps_act")
        if self.lam_tol < 0:
            raise InvalidState("lam_tol must be >= 0")

    @classmethod
    def for_hull_area(cls, hull_area: float) -> "Thresholds":
        """Scale-free defaults: eps_act = 1e-3 x hull area, exit at 2x, violation at 5x."""
        eps_act = 1e-3 * abs(hull_area)
        return cls(eps_act=eps_act, eps_exit=2 * eps_act, eps_violation=5 * eps_act)


@dataclass(frozen=True)
class WorldState:
    """Positions at time t; pursuers are in fixed counterclockwise label order.

    Pre-capture states keep every pursuer-evader distance >= r_c; the runner
    ends the episode at the first crossing.
    """

    t: float
    pursuers: tuple[Vec2, ...]
    evader: Vec2

    def distances(self) -> tuple[float, ...]:
        return tuple((p - self.evader).norm() for p in self.pursuers)


@dataclass(frozen=True)
class ControlInput:
    """One step's controls: unit heading per pursuer plus evader speed/direction."""

    pursuer_dirs: tuple[Vec2, ...]
    evader_speed: float
    evader_dir: Vec2

    @classmethod
    def from_angles(
        cls, thetas: Sequence[float], mu: float, psi: float
    ) -> "ControlInput":
        return cls(
            pursuer_dirs=tuple(Vec2(math.cos(t), math.sin(t)) for t in thetas),
            evader_speed=mu,
            evader_dir=Vec2(math.cos(psi), math.sin(psi)),
        )

    @property
    def pursuer_headings(self) -> tuple[float, ...]:
        return tuple(d.angle() for d in self.pursuer_dirs)

    @property
    def psi(self) -> float:
        return self.evader_dir.angle()


@dataclass(frozen=True)
class PhaseState:
    """Controller mode: interior (active is None) or edge phase on (j, k)."""

    active: Optional[tuple[int, int]]
    entered_at: float

    @property
    def mode(self) -> str:
        return "interior" if self.active is None else "edge"


@dataclass(frozen=True)
class TraceRecord:
    t: float
    pursuers: tuple[Vec2, ...]
    evader: Vec2
    areas: AreaVector
    V: float
    d_min: float
    mode: str
    active: Optional[tuple[int, int]]
    encircled: bool


@dataclass(frozen=True)
class EpisodeResult:
    captured: bool
    t_capture: Optional[float]
    captured_by: Optional[int]
    t_bound: float
    tau: Optional[float]
    min_area_seen: float
    encirclement_ok: bool

    def to_dict(self) -> dict:
        return {
            "captured": self.captured,
            "t_capture": self.t_capture,
            "captured_by": self.captured_by,
            "t_bound": self.t_bound,
            "tau": self.tau,
            "min_area_seen": self.min_area_seen,
            "encirclement_ok": self.encirclement_ok,
        }


@dataclass(frozen=True)
class Capture:
    """First pursuer to reach the capture radius, with interpolated time."""

    index: int
    t_capture: float
    frac: float


def step(
    world: WorldState, control: ControlInput, params: AgentParams, dt: float
) -> WorldState:
    """Explicit Euler step; per-step displacement is exactly dt * speed."""
    if dt <= 0:
        raise InvalidState(f"dt must be > 0, got {dt}")
    pursuers = tuple(
        Vec2(p.x + dt * v * d.x, p.y + dt * v * d.y)
        for p, d, v in zip(world.pursuers, control.pursuer_dirs, params.v)
    )
    mu = control.evader_speed
    ed = control.evader_dir
    evader = Vec2(world.evader.x + dt * mu * ed.x, world.evader.y + dt * mu * ed.y)
    return WorldState(t=world.t + dt, pursuers=pursuers, evader=evader)


def detect_capture(
    prev: WorldState, nxt: WorldState, r_c: float
) -> Optional[Capture]:
    """First crossing of the capture radius within the step, if any.

    Distances are interpolated linearly across the step; simultaneous
    crossings report the lowest pursuer label.
    """
    if not prev.t < nxt.t:
        raise InvalidState("detect_capture requires prev.t < nxt.t")
    dt = nxt.t - prev.t
    best_s: Optional[float] = None
    best_i = -1
    for i, (a, b) in enumerate(zip(prev.pursuers, nxt.pursuers)):
        d0 = (a - prev.evader).norm()
        d1 = (b - nxt.evader).norm()
        if d0 <= r_c:
            s = 0.0  # should not happen pre-capture; treat as immediate
        elif d1 <= r_c:
            s = (d0 - r_c) / (d0 - d1)
        else:
            continue
        if best_s is None or s < best_s:
            best_s = s
            best_i = i
    if best_s is None:
        return None
    return Capture(index=best_i + 1, t_capture=prev.t + best_s * dt, frac=best_s)


def update_phase(
    phase: PhaseState,
    areas: AreaVector,
    frames: Sequence[EdgeFrame],
    thr: Thresholds,
    t: float,
) -> PhaseState:
    """Hysteretic mode transition: enter at area <= eps_act, leave at >= eps_exit.

    A held edge is also released when the evader's projection leaves the
    segment, which hands over to the neighboring edge on the next detection.
    """
    if phase.active is not None:
        j, _k = phase.active
        i = j - 1  # edges are ((1,2), (2,3), ..., (n,1)); edge position = j - 1
        f = frames[i]
        in_segment = -thr.lam_tol <= f.lam <= 1.0 + thr.lam_tol
        if areas[i] < thr.eps_exit and in_segment:
            return phase
    event = detect_active_edge(
        areas, frames, thr.eps_act, thr.eps_violation, thr.lam_tol
    )
    if isinstance(event, ActiveEdge):
        if phase.active == (event.j, event.k):
            return phase
        return PhaseState(active=(event.j, event.k), entered_at=t)
    if phase.active is None:
        return phase
    return PhaseState(active=None, entered_at=t)


def _lerp_world(prev: WorldState, nxt: WorldState, s: float) -> WorldState:
    pursuers = tuple(
        Vec2(a.x + s * (b.x - a.x), a.y + s * (b.y - a.y))
        for a, b in zip(prev.pursuers, nxt.pursuers)
    )
    e0, e1 = prev.evader, nxt.evader
    return WorldState(
        t=prev.t + s * (nxt.t - prev.t),
        pursuers=pursuers,
        evader=Vec2(e0.x + s * (e1.x - e0.x), e0.y + s * (e1.y - e0.y)),
    )


StrategyFn = Callable[[WorldState, PhaseState], tuple[Vec2, ...]]


class EpisodeRunner:
    """Single episode advanced one control step at a time.

    The runner owns its trace and phase bookkeeping; callers supply the evader
    control per step, so an offline policy loop and a live steering session
    produce step-for-step identical episodes from identical control
    sequences.
    """

    def __init__(self, scenario: "Scenario", strategy: Optional[StrategyFn] = None):
        self.scenario = scenario
        self.params = scenario.params
        self.thr = scenario.thresholds
        self.dt = scenario.dt
        if strategy is None:
            sel = scenario.phi
            strategy = lambda w, ph: theorem2_controller(w, ph, sel)  # noqa: E731
        self.strategy = strategy

        world = WorldState(
            t=0.0, pursuers=scenario.pursuer_starts, evader=scenario.evader_start
        )
        areas = area_vector(world)
        if areas.min() <= 0:
            raise NotInitiallyEncircled(
                f"initial areas must all be positive, got min {areas.min():.6g}"
            )
        dists = world.distances()
        if min(dists) <= self.params.r_c:
            raise InvalidState("episode would start inside the capture radius")

        self.V0 = sum(dists)
        self.t_bound = analysis.capture_time_bound(
            self.V0, self.params.n, self.params.r_c, self.params.mu_max
        )
        if scenario.t_max is not None:
            self.t_max = scenario.t_max
        elif self.params.mu_max > _NEAR_UNITY_MU:
            self.t_max = _FALLBACK_T_MAX
        else:
            self.t_max = 10.0 * self.t_bound

        self.world = world
        self.phase = update_phase(
            PhaseState(active=None, entered_at=0.0), areas, edge_frames(world), self.thr, 0.0
        )
        self.trace: list[TraceRecord] = []
        self.result: Optional[EpisodeResult] = None
        self.min_area_seen = math.inf
        self.redundancy_events = 0
        self._observe(areas)

    # -- bookkeeping ---------------------------------------------------------

    def _observe(self, areas: Optional[AreaVector] = None) -> None:
        world = self.world
        if areas is None:
            areas = area_vector(world)
        dists = world.distances()
        self.min_area_seen = min(self.min_area_seen, areas.min())
        self.trace.append(
            TraceRecord(
                t=world.t,
                pursuers=world.pursuers,
                evader=world.evader,
                areas=areas,
                V=sum(dists),
                d_min=min(dists),
                mode=self.phase.mode,
                active=self.phase.active,
                encircled=areas.min() >= -self.thr.eps_violation,
            )
        )
        if world.t > 0.0:
            self._check_redundancy()

    def _check_redundancy(self) -> None:
        try:
            hull_order(list(self.world.pursuers))
        except RedundantPursuer as exc:
            self.redundancy_events += 1
            if self.redundancy_events == 1:
                log.warning("t=%.4f: %s (labels kept fixed)", self.world.t, exc)
        except Exception:  # collinear collapse near capture is non-fatal too
            self.redundancy_events += 1

    def _finish(self, captured: bool, cap: Optional[Capture]) -> EpisodeResult:
        encirclement_ok = self.min_area_seen >= -self.thr.eps_violation
        tau = None
        if captured and cap is not None:
            tau = cap.t_capture / self.t_bound if self.t_bound > 0 else math.inf
        self.result = EpisodeResult(
            captured=captured,
            t_capture=cap.t_capture if cap else None,
            captured_by=cap.index if cap else None,
            t_bound=self.t_bound,
            tau=tau,
            min_area_seen=self.min_area_seen,
            encirclement_ok=encirclement_ok,
        )
        return self.result

    # -- stepping ------------------------------------------------------------

    def advance(self, mu: float, psi: float) -> Optional[EpisodeResult]:
        """Apply one zero-order-hold evader control and integrate one step.

        Returns the episode result once the episode has ended, else None.
        """
        if self.result is not None:
            return self.result
        if self.world.t >= self.t_max - 1e-12:
            return self._finish(captured=False, cap=None)

        mu = min(max(mu, 0.0), self.params.mu_max)
        try:
            control = ControlInput(
                pursuer_dirs=self.strategy(self.world, self.phase),
                evader_speed=mu,
                evader_dir=Vec2(math.cos(psi), math.sin(psi)),
            )
            nxt = step(self.world, control, self.params, self.dt)
        except ValueError as exc:
            raise NumericalDivergence(str(exc)) from exc

        cap = detect_capture(self.world, nxt, self.params.r_c)
        if cap is not None:
            self.world = _lerp_world(self.world, nxt, cap.frac)
            self._observe()
            return self._finish(captured=True, cap=cap)

        self.world = nxt
        areas = area_vector(nxt)
        self.phase = update_phase(
            self.phase, areas, edge_frames(nxt), self.thr, nxt.t
        )
        self._observe(areas)
        return None


def run_episode(
    scenario: "Scenario",
    strategy: Optional[StrategyFn] = None,
    policy: Optional["EvaderPolicy"] = None,
) -> tuple[list[TraceRecord], EpisodeResult]:
    """Run one full episode under an evader policy (scenario's by default)."""
    from .policies import make_policy  # local import to keep layering acyclic

    runner = EpisodeRunner(scenario, strategy=strategy)
    if policy is None:
        policy = make_policy(
            scenario.policy, scenario.params.mu_max, scenario.thresholds, scenario.seed
        )
    policy.reset()
    while runner.result is None:
        mu, psi = policy.control(runner.world)
        runner.advance(mu, psi)
    return runner.trace, runner.result


def _fmt(x: float) -> str:
    return format(x, TRACE_FLOAT_FORMAT)


def write_trace_csv(trace: Sequence[TraceRecord], out: Union[IO[str], str]) -> None:
    """Write the per-step trace with '.' decimals and 9 significant digits."""
    if isinstance(out, str):
        with open(out, "w", encoding="utf-8", newline="\n") as fp:
            write_trace_csv(trace, fp)
        return
    n = len(trace[0].pursuers)
    cols = ["t"]
    for i in range(1, n + 1):
        cols += [f"x_p{i}", f"y_p{i}"]
    cols += ["x_e", "y_e"]
    cols += [f"A_{i}" for i in range(1, n + 1)]
    cols += ["V", "d_min", "mode", "active_j", "active_k", "encircled"]
    out.write(",".join(cols) + "\n")
    for rec in trace:
        row = [_fmt(rec.t)]
        for p in rec.pursuers:
            row += [_fmt(p.x), _fmt(p.y)]
        row += [_fmt(rec.evader.x), _fmt(rec.evader.y)]
        row += [_fmt(a) for a in rec.areas]
        row += [_fmt(rec.V), _fmt(rec.d_min), rec.mode]
        if rec.active is not None:
            row += [str(rec.active[0]), str(rec.active[1])]
        else:
            row += ["", ""]
        row.append("true" if rec.encircled else "false")
        out.write(",".join(row) + "\n")
