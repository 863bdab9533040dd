"""Monte Carlo capture-time studies.

Trials draw the evader start uniformly inside the pursuer triangle (redrawing
starts that fall within the capture radius of a pursuer), run one episode
each, and aggregate the capture times and the ratio tau of simulated capture
time to the analytic bound.  Each trial derives its random stream from
(seed, trial index), so results do not depend on execution order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .analysis import sample_in_triangle
from .errors import ValidationError
from .geometry import Vec2
from .policies import PolicySpec
from .scenario import Scenario
from .simulation import run_episode

__all__ = ["MCStats", "TrialRow", "MCResult", "monte_carlo", "TAU_HIST_BINS"]

log = logging.getLogger("encircle.experiments")

TAU_HIST_BINS = 20
_MAX_REJECTS_PER_TRIAL = 10_000


@dataclass(frozen=True)
class TrialRow:
    trial: int
    mu_max: float
    evader_start: Vec2
    captured: bool
    t_capture: Optional[float]
    t_bound: float
    tau: Optional[float]
    min_area_seen: float
    encirclement_ok: bool


@dataclass(frozen=True)
class MCStats:
    """Aggregate statistics for one evader speed."""

    mu_max: float
    trials: int
    captured: int
    not_captured: int
    rejected_samples: int
    mean_t: float
    std_t: float
    tau_values: tuple[float, ...]
    tau_max: float
    hist_edges: tuple[float, ...]
    hist_counts: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "mu_max": self.mu_max,
            "trials": self.trials,
            "captured": self.captured,
            "not_captured": self.not_captured,
            "rejected_samples": self.rejected_samples,
            "mean_t": self.mean_t,
            "std_t": self.std_t,
            "tau_max": self.tau_max,
            "tau_values": list(self.tau_values),
            "histogram": {
                "bin_edges": list(self.hist_edges),
                "counts": list(self.hist_counts),
            },
        }


@dataclass(frozen=True)
class MCResult:
    stats: MCStats
    rows: tuple[TrialRow, ...]


def _sample_start(
    rng: np.random.Generator, scenario: Scenario
) -> tuple[Vec2, int]:
    """Uniform start inside the pursuer triangle, at least r_c from each pursuer."""
    if scenario.n != 3:
        raise ValidationError("triangle sampling requires exactly 3 pursuers")
    a, b, c = scenario.pursuer_starts
    rejected = 0
    while True:
        pt = sample_in_triangle(rng, a, b, c)
        if min((p - pt).norm() for p in scenario.pursuer_starts) > scenario.params.r_c:
            return pt, rejected
        rejected += 1
        if rejected > _MAX_REJECTS_PER_TRIAL:
            raise ValidationError(
                "could not sample an evader start outside every capture disc"
            )


def monte_carlo(
    template: Scenario,
    trials: int,
    mu_values: Sequence[float],
    seed: int,
    policy: Optional[PolicySpec] = None,
) -> list[MCResult]:
    """Run `trials` seeded episodes per evader speed and aggregate statistics.

    Trials that do not end in capture are counted and reported, never
    dropped.  The same start points are reused across the listed speeds so
    tau distributions are comparable at matched initial conditions.
    """
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    if not mu_values:
        raise ValidationError("need at least one mu_max value")

    results: list[MCResult] = []
    for mu in mu_values:
        rows: list[TrialRow] = []
        rejected_total = 0
        for trial in range(trials):
            rng = np.random.default_rng((seed, trial))
            start, rejected = _sample_start(rng, template)
            rejected_total += rejected
            variant = template.with_overrides(
                mu_max=mu,
                evader_start=start,
                policy=policy,
                seed=seed + trial,
            )
            _trace, result = run_episode(variant)
            if not result.captured:
                log.warning(
                    "mu=%.3g trial %d not captured by t_max (start %.4g, %.4g)",
                    mu,
                    trial,
                    start.x,
                    start.y,
                )
            rows.append(
                TrialRow(
                    trial=trial,
                    mu_max=mu,
                    evader_start=start,
                    captured=result.captured,
                    t_capture=result.t_capture,
                    t_bound=result.t_bound,
                    tau=result.tau,
                    min_area_seen=result.min_area_seen,
                    encirclement_ok=result.encirclement_ok,
                )
            )
        if rejected_total:
            log.info(
                "mu=%.3g: redrew %d start(s) inside a capture disc", mu, rejected_total
            )
        results.append(
            MCResult(stats=_aggregate(mu, rows, rejected_total), rows=tuple(rows))
        )
    return results


def _aggregate(mu: float, rows: Sequence[TrialRow], rejected: int) -> MCStats:
    times = [r.t_capture for r in rows if r.captured and r.t_capture is not None]
    taus = [r.tau for r in rows if r.captured and r.tau is not None]
    counts, edges = np.histogram(taus, bins=TAU_HIST_BINS, range=(0.0, 1.0))
    mean_t = float(np.mean(times)) if times else float("nan")
    std_t = float(np.std(times, ddof=1)) if len(times) > 1 else 0.0
    return MCStats(
        mu_max=mu,
        trials=len(rows),
        captured=len(times),
        not_captured=len(rows) - len(times),
        rejected_samples=rejected,
        mean_t=mean_t,
        std_t=std_t,
        tau_values=tuple(taus),
        tau_max=max(taus) if taus else float("nan"),
        hist_edges=tuple(float(e) for e in edges),
        hist_counts=tuple(int(c) for c in counts),
    )
