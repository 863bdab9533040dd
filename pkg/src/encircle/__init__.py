"""Deterministic planar pursuit-evasion simulation with encirclement and
capture-time certificates, plus a live steering service for playing the
evader interactively."""

from . import errors
from .analysis import (
    DiagnosticRates,
    area_rate_decomposition,
    capture_time_bound,
    closed_loop_edge_rate,
    lyapunov_V,
    sample_in_triangle,
    worst_case_edge_rate,
)
from .experiments import MCResult, MCStats, monte_carlo
from .geometry import (
    ActiveEdge,
    AreaVector,
    EdgeFrame,
    HullOrder,
    Vec2,
    Violation,
    area_vector,
    detect_active_edge,
    edge_frame,
    hull_order,
    rotate_ccw,
    rotate_cw,
    signed_area,
)
from .policies import ControlInbox, EvaderPolicy, PolicySpec, make_policy
from .scenario import Scenario, bundled_scenario_path, load_scenario
from .simulation import (
    AgentParams,
    ControlInput,
    EpisodeResult,
    EpisodeRunner,
    PhaseState,
    Thresholds,
    TraceRecord,
    WorldState,
    detect_capture,
    run_episode,
    step,
    write_trace_csv,
)
from .strategies import (
    PhiSelection,
    corollary1_phi_range,
    edge_phase_headings,
    encirclement_condition,
    pure_pursuit_heading,
    theorem2_controller,
    theorem2_phi_range,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "Vec2",
    "HullOrder",
    "EdgeFrame",
    "AreaVector",
    "ActiveEdge",
    "Violation",
    "signed_area",
    "hull_order",
    "area_vector",
    "edge_frame",
    "detect_active_edge",
    "rotate_cw",
    "rotate_ccw",
    "PhiSelection",
    "pure_pursuit_heading",
    "edge_phase_headings",
    "encirclement_condition",
    "corollary1_phi_range",
    "theorem2_phi_range",
    "theorem2_controller",
    "PolicySpec",
    "EvaderPolicy",
    "ControlInbox",
    "make_policy",
    "AgentParams",
    "Thresholds",
    "WorldState",
    "ControlInput",
    "PhaseState",
    "TraceRecord",
    "EpisodeResult",
    "EpisodeRunner",
    "step",
    "detect_capture",
    "run_episode",
    "write_trace_csv",
    "DiagnosticRates",
    "lyapunov_V",
    "capture_time_bound",
    "area_rate_decomposition",
    "closed_loop_edge_rate",
    "worst_case_edge_rate",
    "sample_in_triangle",
    "MCStats",
    "MCResult",
    "monte_carlo",
    "Scenario",
    "load_scenario",
    "bundled_scenario_path",
    "__version__",
]
