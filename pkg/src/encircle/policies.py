"""Evader policies: greedy, switching, random, stationary, closest-link, and
an externally driven policy fed by a steering session.

Each policy sees only the world state, the elapsed time and its own private
stream or inbox; none can inspect the pursuers' controller.  Every output
satisfies 0 <= mu <= mu_max.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np

from .errors import ValidationError
from .geometry import (
    ActiveEdge,
    area_vector,
    detect_active_edge,
    edge_frames,
    nearest_edge,
)

if TYPE_CHECKING:  # pragma: no cover
    from .simulation import Thresholds, WorldState

__all__ = [
    "PolicySpec",
    "EvaderPolicy",
    "GreedyPolicy",
    "SwitchingPolicy",
    "RandomPolicy",
    "StationaryPolicy",
    "ClosestLinkPolicy",
    "ExternalPolicy",
    "ReplayPolicy",
    "ControlInbox",
    "make_policy",
    "POLICY_KINDS",
]

POLICY_KINDS = (
    "greedy",
    "switching",
    "random",
    "stationary",
    "closest_link",
    "external",
)


@dataclass(frozen=True)
class PolicySpec:
    """Declarative policy choice carried by a scenario."""

    kind: str
    period: float = 0.3
    hold: float = 0.1
    seed: Optional[int] = None
    speed_fraction: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in POLICY_KINDS:
            raise ValidationError(
                f"unknown policy kind {self.kind!r}; expected one of {POLICY_KINDS}"
            )
        if self.period <= 0:
            raise ValidationError("policy period must be > 0")
        if self.hold <= 0:
            raise ValidationError("policy hold must be > 0")
        if not 0.0 <= self.speed_fraction <= 1.0:
            raise ValidationError("speed_fraction must lie in [0, 1]")


class EvaderPolicy:
    """Base class; subclasses implement control(world) -> (mu, psi)."""

    def reset(self) -> None:
        """Clear per-episode state; called once before each episode."""

    def control(self, world: "WorldState") -> tuple[float, float]:
        raise NotImplementedError


class StationaryPolicy(EvaderPolicy):
    def control(self, world: "WorldState") -> tuple[float, float]:
        return 0.0, 0.0


class GreedyPolicy(EvaderPolicy):
    """Flee the nearest pursuer at full speed; ties go to the lowest label."""

    def __init__(self, speed: float):
        self.speed = speed

    def control(self, world: "WorldState") -> tuple[float, float]:
        dists = world.distances()
        i = min(range(len(dists)), key=lambda i: dists[i])
        away = world.evader - world.pursuers[i]
        return self.speed, away.angle()


class ClosestLinkPolicy(EvaderPolicy):
    """Head for the nearest hull edge and then ride it outward.

    Off the boundary the heading points at the foot of the perpendicular on
    the nearest edge; once an edge is active the heading is its outward
    normal (alpha - pi/2), the direction that keeps the edge area pinned at
    zero while the active pursuers push the edge along.
    """

    def __init__(self, speed: float, thr: "Thresholds"):
        self.speed = speed
        self.thr = thr

    def control(self, world: "WorldState") -> tuple[float, float]:
        frames = edge_frames(world)
        event = detect_active_edge(
            area_vector(world),
            frames,
            self.thr.eps_act,
            self.thr.eps_violation,
            self.thr.lam_tol,
        )
        if isinstance(event, ActiveEdge):
            alpha = frames[event.j - 1].alpha
            return self.speed, alpha - math.pi / 2
        (j, _k), foot, dist = nearest_edge(world)
        if dist < 1e-12:
            return self.speed, frames[j - 1].alpha - math.pi / 2
        return self.speed, (foot - world.evader).angle()


class SwitchingPolicy(EvaderPolicy):
    """Approach the nearest edge, then alternate half-periods between
    edge-seeking and moving toward the pursuer centroid."""

    def __init__(self, speed: float, period: float, thr: "Thresholds"):
        self.speed = speed
        self.period = period
        self._edge_seeker = ClosestLinkPolicy(speed, thr)
        self._contact_t: Optional[float] = None
        self.thr = thr

    def reset(self) -> None:
        self._contact_t = None

    def control(self, world: "WorldState") -> tuple[float, float]:
        if self._contact_t is None:
            event = detect_active_edge(
                area_vector(world),
                edge_frames(world),
                self.thr.eps_act,
                self.thr.eps_violation,
                self.thr.lam_tol,
            )
            if isinstance(event, ActiveEdge):
                self._contact_t = world.t
            else:
                return self._edge_seeker.control(world)
        half = 0.5 * self.period
        m = int((world.t - self._contact_t) / half + 1e-9)
        if m % 2 == 0:
            return self._edge_seeker.control(world)
        n = len(world.pursuers)
        cx = sum(p.x for p in world.pursuers) / n
        cy = sum(p.y for p in world.pursuers) / n
        dx, dy = cx - world.evader.x, cy - world.evader.y
        if math.hypot(dx, dy) < 1e-12:
            return self.speed, 0.0
        return self.speed, math.atan2(dy, dx)


class RandomPolicy(EvaderPolicy):
    """Uniform heading redrawn every `hold` seconds, reproducible per seed."""

    def __init__(self, speed: float, hold: float, seed: int):
        self.speed = speed
        self.hold = hold
        self.seed = seed
        self._rng = np.random.default_rng(seed)
        self._draws: list[float] = []

    def reset(self) -> None:
        self._rng = np.random.default_rng(self.seed)
        self._draws = []

    def control(self, world: "WorldState") -> tuple[float, float]:
        k = int(world.t / self.hold + 1e-9)
        while len(self._draws) <= k:
            self._draws.append(float(self._rng.uniform(0.0, 2.0 * math.pi)))
        return self.speed, self._draws[k]


class ControlInbox:
    """Latest-wins control cell bridging a session handler and an episode loop.

    Single producer, single consumer; the lock is the only synchronization
    point between them.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._mu = 0.0
        self._psi = 0.0

    def put(self, mu: float, psi: float) -> None:
        with self._lock:
            self._mu = mu
            self._psi = psi

    def latest(self) -> tuple[float, float]:
        with self._lock:
            return self._mu, self._psi


class ExternalPolicy(EvaderPolicy):
    """Zero-order hold on the most recent steering command; (0, 0) until the
    first command arrives.  Speeds are clamped to [0, mu_max]."""

    def __init__(self, mu_max: float, inbox: Optional[ControlInbox] = None):
        self.mu_max = mu_max
        self.inbox = inbox if inbox is not None else ControlInbox()

    def control(self, world: "WorldState") -> tuple[float, float]:
        mu, psi = self.inbox.latest()
        return min(max(mu, 0.0), self.mu_max), psi


class ReplayPolicy(EvaderPolicy):
    """Replays a timestamped control log: each (t, mu, psi) entry takes effect
    from time t onward (zero-order hold), matching a recorded live session."""

    def __init__(self, entries: Sequence[tuple[float, float, float]]):
        self.entries = sorted(entries, key=lambda e: e[0])
        self._pos = 0
        self._current = (0.0, 0.0)

    def reset(self) -> None:
        self._pos = 0
        self._current = (0.0, 0.0)

    def control(self, world: "WorldState") -> tuple[float, float]:
        while (
            self._pos < len(self.entries)
            and self.entries[self._pos][0] <= world.t + 1e-12
        ):
            _, mu, psi = self.entries[self._pos]
            self._current = (mu, psi)
            self._pos += 1
        return self._current


def make_policy(
    spec: PolicySpec,
    mu_max: float,
    thr: "Thresholds",
    fallback_seed: int = 0,
) -> EvaderPolicy:
    """Instantiate the policy named by a spec for one episode."""
    speed = spec.speed_fraction * mu_max
    if spec.kind == "stationary":
        return StationaryPolicy()
    if spec.kind == "greedy":
        return GreedyPolicy(speed)
    if spec.kind == "closest_link":
        return ClosestLinkPolicy(speed, thr)
    if spec.kind == "switching":
        return SwitchingPolicy(speed, spec.period, thr)
    if spec.kind == "random":
        seed = spec.seed if spec.seed is not None else fallback_seed
        return RandomPolicy(speed, spec.hold, seed)
    if spec.kind == "external":
        return ExternalPolicy(mu_max)
    raise ValidationError(f"unknown policy kind {spec.kind!r}")
