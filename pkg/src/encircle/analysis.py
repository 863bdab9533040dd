"""Certificates evaluated along trajectories: the sum-of-distances Lyapunov
value, the analytic capture-time bound, and the decomposition of the edge-area
rate into pursuer and evader terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np

from .errors import InvalidState, SpeedRatioOutOfRange
from .geometry import EdgeFrame, Vec2

if TYPE_CHECKING:  # pragma: no cover
    from .simulation import ControlInput, WorldState

__all__ = [
    "DiagnosticRates",
    "lyapunov_V",
    "capture_time_bound",
    "area_rate_decomposition",
    "closed_loop_edge_rate",
    "worst_case_edge_rate",
    "sample_in_triangle",
]


@dataclass(frozen=True)
class DiagnosticRates:
    """Pursuer/evader split of twice the edge-area rate: 2*A_dot = T_p + T_e."""

    T_p: float
    T_e: float
    A_dot: float
    alpha: float
    beta: float
    gamma: float


def lyapunov_V(world: "WorldState") -> float:
    """Sum of pursuer-evader distances; strictly positive pre-capture."""
    return sum((p - world.evader).norm() for p in world.pursuers)


def capture_time_bound(V0: float, n: int, r_c: float, mu_max: float) -> float:
    """Worst-case capture time (V0 - n*r_c) / (n * (1 - mu_max)).

    Requires mu_max < 1 (strictly slower evader) and V0 >= n*r_c (the
    simultaneous-capture floor of the Lyapunov value).
    """
    if mu_max >= 1:
        raise SpeedRatioOutOfRange(
            f"capture bound needs mu_max < 1, got {mu_max}"
        )
    floor = n * r_c
    if V0 < floor - 1e-12 * max(1.0, floor):
        raise InvalidState(f"V0={V0} below the capture floor {floor}")
    return max(0.0, V0 - floor) / (n * (1.0 - mu_max))


def area_rate_decomposition(
    world: "WorldState",
    control: "ControlInput",
    j: int,
    k: int,
    speeds: Optional[Sequence[float]] = None,
) -> DiagnosticRates:
    """Instantaneous rate of the signed area of triangle (e, p_j, p_k).

    T_p collects the pursuer contributions via perpendicular inner products,
    T_e the evader contribution; their sum is exactly twice the area rate for
    any state and control.
    """
    pj = world.pursuers[j - 1]
    pk = world.pursuers[k - 1]
    e = world.evader
    v_j = 1.0 if speeds is None else speeds[j - 1]
    v_k = 1.0 if speeds is None else speeds[k - 1]

    pdot_j = control.pursuer_dirs[j - 1] * v_j
    pdot_k = control.pursuer_dirs[k - 1] * v_k
    T_p = pdot_j.dot((e - pk).perp()) + pdot_k.dot((pj - e).perp())

    mu = control.evader_speed
    ed = control.evader_dir
    T_e = mu * ed.x * (pj.y - pk.y) + mu * ed.y * (pk.x - pj.x)

    alpha = math.atan2(pk.y - pj.y, pk.x - pj.x)
    beta = math.atan2(e.x - pk.x, pk.y - e.y)
    gamma = math.atan2(pj.x - e.x, e.y - pj.y)
    return DiagnosticRates(
        T_p=T_p, T_e=T_e, A_dot=0.5 * (T_p + T_e), alpha=alpha, beta=beta, gamma=gamma
    )


def closed_loop_edge_rate(
    frame: EdgeFrame,
    phi_j: float,
    phi_k: float,
    mu: float,
    psi: float,
    v_j: float = 1.0,
    v_k: float = 1.0,
) -> float:
    """Twice the edge-area rate under the rotated edge strategy, on the edge:

    v_j d_ek sin(phi_j) + v_k d_ej sin(phi_k) - d_jk mu sin(alpha - psi).
    """
    return (
        v_j * frame.d_ek * math.sin(phi_j)
        + v_k * frame.d_ej * math.sin(phi_k)
        - frame.d_jk * mu * math.sin(frame.alpha - psi)
    )


def worst_case_edge_rate(
    frame: EdgeFrame,
    phi_j: float,
    phi_k: float,
    mu_max: float,
    n_psi: int = 720,
) -> tuple[float, float]:
    """Minimum of the closed-loop edge rate over a heading grid.

    Sweeps psi over {2*pi*m/n_psi} and the evader speed over {0, mu_max}
    (the rate is linear in speed, so the extremes suffice).  Returns
    (min_rate, minimizing_psi).
    """
    best_rate = math.inf
    best_psi = 0.0
    pursuer_part = frame.d_ek * math.sin(phi_j) + frame.d_ej * math.sin(phi_k)
    for m in range(n_psi):
        psi = 2.0 * math.pi * m / n_psi
        for mu in (0.0, mu_max):
            rate = pursuer_part - frame.d_jk * mu * math.sin(frame.alpha - psi)
            if rate < best_rate:
                best_rate = rate
                best_psi = psi
    return best_rate, best_psi


def sample_in_triangle(
    rng: np.random.Generator, a: Vec2, b: Vec2, c: Vec2
) -> Vec2:
    """Uniform sample from triangle abc.

    Draws (u, v) on the unit square and reflects points with u + v > 1 back
    into the simplex, which preserves uniformity.
    """
    u = float(rng.random())
    v = float(rng.random())
    if u + v > 1.0:
        u, v = 1.0 - u, 1.0 - v
    return Vec2(
        a.x + u * (b.x - a.x) + v * (c.x - a.x),
        a.y + u * (b.y - a.y) + v * (c.y - a.y),
    )
