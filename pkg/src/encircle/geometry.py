"""Planar primitives: signed sub-triangle areas, hull ordering and per-edge frames.

Everything in this module is a pure function over immutable value types, so it
can be called freely from concurrent episode runners.

Conventions used throughout the package:

* Pursuers carry fixed 1-based labels assigned once from the counterclockwise
  hull order of their initial positions.  Hull edge ``i`` (0-based position)
  joins labels ``i + 1`` and ``i % n + 2``, wrapping at ``n``.
* The signed area of triangle ``(e, p_j, p_k)`` is positive while the evader
  is inside the hull, zero on edge ``p_j p_k`` and negative once it has
  crossed that edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence, Union

from .errors import DegenerateEdge, DegenerateHull, RedundantPursuer

if TYPE_CHECKING:  # pragma: no cover
    from .simulation import WorldState

__all__ = [
    "Vec2",
    "HullOrder",
    "EdgeFrame",
    "AreaVector",
    "ActiveEdge",
    "Violation",
    "signed_area",
    "polygon_area",
    "hull_order",
    "edge_pairs",
    "area_vector",
    "edge_frame",
    "edge_frames",
    "detect_active_edge",
    "rotate_cw",
    "rotate_ccw",
    "closest_point_on_segment",
    "nearest_edge",
]

DEFAULT_LAMBDA_TOL = 1e-6


@dataclass(frozen=True, slots=True)
class Vec2:
    """Immutable planar point/vector in meters."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x}, {self.y})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, s: float) -> "Vec2":
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2") -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def angle(self) -> float:
        """Full-quadrant angle of the vector, in radians."""
        return math.atan2(self.y, self.x)

    def unit(self) -> "Vec2":
        n = self.norm()
        if n < 1e-12:
            raise DegenerateEdge("cannot normalize a near-zero vector")
        return Vec2(self.x / n, self.y / n)

    def perp(self) -> "Vec2":
        """Counterclockwise perpendicular (-y, x)."""
        return Vec2(-self.y, self.x)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class HullOrder:
    """Counterclockwise cyclic order of pursuer labels (1-based).

    The cycle is canonicalized to start at the smallest participating label.
    """

    indices: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.indices)

    def edges(self) -> tuple[tuple[int, int], ...]:
        idx = self.indices
        return tuple((idx[i], idx[(i + 1) % len(idx)]) for i in range(len(idx)))


@dataclass(frozen=True)
class EdgeFrame:
    """Derived geometry of one hull edge relative to the evader.

    ``lam`` is the evader's normalized coordinate along the edge measured from
    ``p_j`` toward ``p_k``; it lies in [0, 1] exactly when the orthogonal
    projection of the evader falls on the segment.
    """

    j: int
    k: int
    u: Vec2
    alpha: float
    d_ej: float
    d_ek: float
    d_jk: float
    lam: float


@dataclass(frozen=True)
class AreaVector:
    """Signed sub-triangle areas, one per hull edge in cyclic edge order."""

    areas: tuple[float, ...]

    def __iter__(self):
        return iter(self.areas)

    def __len__(self) -> int:
        return len(self.areas)

    def __getitem__(self, i: int) -> float:
        return self.areas[i]

    def min(self) -> float:
        return min(self.areas)

    def total(self) -> float:
        return sum(self.areas)


@dataclass(frozen=True)
class ActiveEdge:
    """Edge currently containing the evader (within tolerance)."""

    j: int
    k: int
    area: float


@dataclass(frozen=True)
class Violation:
    """Edge whose signed area dropped below the violation tolerance."""

    j: int
    k: int
    area: float


def signed_area(e: Vec2, pj: Vec2, pk: Vec2) -> float:
    """Signed area of triangle (e, pj, pk); antisymmetric in (pj, pk)."""
    return 0.5 * (
        e.x * (pj.y - pk.y) + pj.x * (pk.y - e.y) + pk.x * (e.y - pj.y)
    )


def polygon_area(points: Sequence[Vec2]) -> float:
    """Signed shoelace area of a polygon (positive for counterclockwise)."""
    n = len(points)
    acc = 0.0
    for i in range(n):
        a = points[i]
        b = points[(i + 1) % n]
        acc += a.x * b.y - b.x * a.y
    return 0.5 * acc


def hull_order(points: Sequence[Vec2]) -> HullOrder:
    """Counterclockwise cyclic ordering of point indices around their hull.

    Raises RedundantPursuer listing every 1-based index that is not a hull
    vertex (interior points, points on an edge between other vertices, and
    duplicates), and DegenerateHull when all points are collinear.
    """
    n = len(points)
    if n < 3:
        raise DegenerateHull(f"need at least 3 points, got {n}")

    order = sorted(range(n), key=lambda i: (points[i].x, points[i].y))

    def turn(o: int, a: int, b: int) -> float:
        return (points[a] - points[o]).cross(points[b] - points[o])

    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], i) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], i) <= 0:
            upper.pop()
        upper.append(i)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateHull("all points are collinear")

    missing = sorted(set(range(n)) - set(hull))
    if missing:
        raise RedundantPursuer(tuple(i + 1 for i in missing))

    start = hull.index(min(hull))
    cyc = hull[start:] + hull[:start]
    return HullOrder(indices=tuple(i + 1 for i in cyc))


def edge_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """Consecutive label pairs (1,2), (2,3), ..., (n,1) of a relabeled hull."""
    return tuple((i + 1, (i + 1) % n + 1) for i in range(n))


def area_vector(world: "WorldState") -> AreaVector:
    """One signed area per hull edge, vertex order (e, p_j, p_k)."""
    e = world.evader
    ps = world.pursuers
    n = len(ps)
    return AreaVector(
        tuple(signed_area(e, ps[i], ps[(i + 1) % n]) for i in range(n))
    )


def edge_frame(world: "WorldState", j: int, k: int) -> EdgeFrame:
    """Per-edge frame for consecutive labels j, k."""
    pj = world.pursuers[j - 1]
    pk = world.pursuers[k - 1]
    e = world.evader
    d = pk - pj
    d_jk = d.norm()
    if d_jk < 1e-12:
        raise DegenerateEdge(f"edge ({j},{k}) has zero length")
    u = Vec2(d.x / d_jk, d.y / d_jk)
    return EdgeFrame(
        j=j,
        k=k,
        u=u,
        alpha=math.atan2(u.y, u.x),
        d_ej=(e - pj).norm(),
        d_ek=(e - pk).norm(),
        d_jk=d_jk,
        lam=(e - pj).dot(u) / d_jk,
    )


def edge_frames(world: "WorldState") -> tuple[EdgeFrame, ...]:
    return tuple(edge_frame(world, j, k) for j, k in edge_pairs(len(world.pursuers)))


def detect_active_edge(
    areas: AreaVector,
    frames: Sequence[EdgeFrame],
    eps_act: float,
    eps_violation: float,
    lam_tol: float = DEFAULT_LAMBDA_TOL,
) -> Union[ActiveEdge, Violation, None]:
    """Classify the evader's relation to the hull boundary.

    Returns the smallest-area edge among those with area <= eps_act and the
    evader's projection within the segment (lam in [-lam_tol, 1 + lam_tol]);
    a Violation for the most negative edge if any area < -eps_violation; and
    None otherwise.  Ties go to the lowest edge position in cyclic order.
    """
    if not (eps_violation > eps_act > 0):
        raise ValueError("require eps_violation > eps_act > 0")

    worst_i = min(range(len(areas)), key=lambda i: areas[i])
    if areas[worst_i] < -eps_violation:
        f = frames[worst_i]
        return Violation(f.j, f.k, areas[worst_i])

    best: Optional[int] = None
    for i, f in enumerate(frames):
        if areas[i] <= eps_act and -lam_tol <= f.lam <= 1.0 + lam_tol:
            if best is None or areas[i] < areas[best]:
                best = i
    if best is None:
        return None
    f = frames[best]
    return ActiveEdge(f.j, f.k, areas[best])


def rotate_cw(v: Vec2, phi: float) -> Vec2:
    """Rotate v clockwise by phi: [cos p, sin p; -sin p, cos p] @ v."""
    c = math.cos(phi)
    s = math.sin(phi)
    return Vec2(c * v.x + s * v.y, -s * v.x + c * v.y)


def rotate_ccw(v: Vec2, phi: float) -> Vec2:
    """Rotate v counterclockwise by phi (transpose of the clockwise matrix)."""
    c = math.cos(phi)
    s = math.sin(phi)
    return Vec2(c * v.x - s * v.y, s * v.x + c * v.y)


def closest_point_on_segment(p: Vec2, a: Vec2, b: Vec2) -> tuple[Vec2, float]:
    """Foot of the perpendicular from p onto segment ab, with endpoint clamping.

    Returns (foot, distance).
    """
    d = b - a
    dd = d.dot(d)
    if dd < 1e-24:
        return a, (p - a).norm()
    t = (p - a).dot(d) / dd
    t = min(1.0, max(0.0, t))
    foot = Vec2(a.x + t * d.x, a.y + t * d.y)
    return foot, (p - foot).norm()


def nearest_edge(world: "WorldState") -> tuple[tuple[int, int], Vec2, float]:
    """Hull edge nearest to the evader (point-to-segment distance).

    Returns ((j, k), foot, distance); ties go to the first edge in cyclic
    order.
    """
    e = world.evader
    ps = world.pursuers
    best: Optional[tuple[tuple[int, int], Vec2, float]] = None
    for j, k in edge_pairs(len(ps)):
        foot, dist = closest_point_on_segment(e, ps[j - 1], ps[k - 1])
        if best is None or dist < best[2]:
            best = ((j, k), foot, dist)
    assert best is not None
    return best
