"""Pursuer control laws: pure pursuit, the rotated edge-phase law, and the
admissibility ranges for the rotation angles.

Headings are unit vectors everywhere inside the package; angles appear only
at trace and protocol boundaries to avoid branch-cut artifacts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

from .errors import SpeedRatioOutOfRange, ZeroDistance
from .geometry import EdgeFrame, Vec2, edge_frame, rotate_ccw, rotate_cw

if TYPE_CHECKING:  # pragma: no cover
    from .simulation import PhaseState, WorldState

__all__ = [
    "PhiSelection",
    "pure_pursuit_heading",
    "edge_phase_headings",
    "encirclement_condition",
    "corollary1_phi_range",
    "theorem2_phi_range",
    "theorem2_controller",
]

_RANGE_TOL = 1e-9


@dataclass(frozen=True)
class PhiSelection:
    """Resolved rotation angles for the two active pursuers.

    ``rule`` records how the angles were chosen ("lower_bound", "fixed" or
    "per_edge"); ``phi_j``/``phi_k`` are the resolved values in radians.
    """

    phi_j: float
    phi_k: float
    rule: str = "per_edge"

    @classmethod
    def lower_bound(cls, mu_max: float) -> "PhiSelection":
        """Default selection: both angles at asin(mu_max)."""
        phi = math.asin(_checked_ratio(mu_max, allow_one=True))
        return cls(phi_j=phi, phi_k=phi, rule="lower_bound")

    @classmethod
    def fixed(cls, phi: float) -> "PhiSelection":
        return cls(phi_j=phi, phi_k=phi, rule="fixed")

    @classmethod
    def per_edge(cls, phi_j: float, phi_k: float) -> "PhiSelection":
        return cls(phi_j=phi_j, phi_k=phi_k, rule="per_edge")

    def in_corollary1_range(self, mu_max: float) -> bool:
        lo, hi = corollary1_phi_range(mu_max)
        return all(lo - _RANGE_TOL <= p <= hi + _RANGE_TOL for p in (self.phi_j, self.phi_k))

    def in_theorem2_range(self, mu_max: float) -> bool:
        lo, hi = theorem2_phi_range(mu_max)
        return all(lo - _RANGE_TOL <= p <= hi + _RANGE_TOL for p in (self.phi_j, self.phi_k))


def _checked_ratio(mu_max: float, allow_one: bool) -> float:
    if not math.isfinite(mu_max) or mu_max < 0:
        raise SpeedRatioOutOfRange(f"mu_max must be >= 0, got {mu_max}")
    if allow_one and mu_max > 1:
        raise SpeedRatioOutOfRange(f"mu_max must be <= 1, got {mu_max}")
    if not allow_one and mu_max >= 1:
        raise SpeedRatioOutOfRange(f"mu_max must be < 1, got {mu_max}")
    return mu_max


def pure_pursuit_heading(p: Vec2, e: Vec2) -> Vec2:
    """Unit vector from a pursuer straight toward the evader."""
    d = e - p
    n = d.norm()
    if n < 1e-12:
        raise ZeroDistance("pursuer and evader coincide")
    return Vec2(d.x / n, d.y / n)


def edge_phase_headings(frame: EdgeFrame, sel: PhiSelection) -> tuple[Vec2, Vec2]:
    """Rotated outward headings for the two pursuers of an active edge.

    With the evader on the edge, the vector from p_j to the evader is the
    edge direction u and the one from p_k is -u, so the headings reduce to
    (cos(alpha - phi_j), sin(alpha - phi_j)) and
    -(cos(alpha + phi_k), sin(alpha + phi_k)).
    """
    dir_j = rotate_cw(frame.u, sel.phi_j)
    dir_k = rotate_ccw(-frame.u, sel.phi_k)
    return dir_j, dir_k


def encirclement_condition(
    v_j: float,
    v_k: float,
    frame: EdgeFrame,
    sel: PhiSelection,
    mu_max: float,
) -> tuple[bool, float]:
    """Check whether the chosen angles hold the active edge against any evader.

    Returns (ok, margin) with
    margin = v_j d_ek sin(phi_j) + v_k d_ej sin(phi_k) - d_jk mu_max,
    the worst-case growth rate of twice the edge area.
    """
    margin = (
        v_j * frame.d_ek * math.sin(sel.phi_j)
        + v_k * frame.d_ej * math.sin(sel.phi_k)
        - frame.d_jk * mu_max
    )
    return margin >= 0.0, margin


def corollary1_phi_range(mu_max: float) -> tuple[float, float]:
    """Angle interval guaranteeing encirclement with unit speeds: [asin(mu_max), pi - asin(mu_max)]."""
    mu = _checked_ratio(mu_max, allow_one=True)
    lo = math.asin(mu)
    return lo, math.pi - lo


def theorem2_phi_range(mu_max: float) -> tuple[float, float]:
    """Tighter interval that adds the finite-time-capture guarantee.

    [asin(mu_max), pi/2 - asin(1 - mu_max)]; requires mu_max < 1 and is
    non-empty for every admissible value.
    """
    mu = _checked_ratio(mu_max, allow_one=False)
    return math.asin(mu), math.pi / 2 - math.asin(1.0 - mu)


def theorem2_controller(
    world: "WorldState",
    phase: "PhaseState",
    sel: PhiSelection,
) -> tuple[Vec2, ...]:
    """Full switched strategy: pure pursuit, except the two pursuers of an
    active edge use the rotated outward headings."""
    e = world.evader
    dirs = [pure_pursuit_heading(p, e) for p in world.pursuers]
    active: Optional[tuple[int, int]] = phase.active
    if active is not None:
        j, k = active
        dir_j, dir_k = edge_phase_headings(edge_frame(world, j, k), sel)
        dirs[j - 1] = dir_j
        dirs[k - 1] = dir_k
    return tuple(dirs)
