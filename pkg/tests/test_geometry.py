import math
from types import SimpleNamespace

import numpy as np
import pytest

from encircle.errors import DegenerateHull, RedundantPursuer
from encircle.geometry import (
    ActiveEdge,
    AreaVector,
    Vec2,
    Violation,
    area_vector,
    closest_point_on_segment,
    detect_active_edge,
    edge_frame,
    edge_frames,
    hull_order,
    polygon_area,
    rotate_ccw,
    rotate_cw,
    signed_area,
)


def world(pursuers, evader):
    return SimpleNamespace(pursuers=tuple(pursuers), evader=evader)


def cross_area(e, a, b):
    # independent oracle: half cross product of the edge vectors from e
    return 0.5 * ((a.x - e.x) * (b.y - e.y) - (b.x - e.x) * (a.y - e.y))


P1 = Vec2(0.0, 2.0)
P2 = Vec2(-1.0, 0.0)
P3 = Vec2(0.8, 0.0)
E = Vec2(0.0, 1.0)


class TestSignedArea:
    def test_hand_oracle(self):
        assert signed_area(E, P1, P2) == pytest.approx(0.5, abs=1e-15)

    def test_collinear(self):
        assert signed_area(Vec2(0.4, 1.0), P3, P1) == pytest.approx(0.0, abs=1e-15)

    def test_antisymmetry_example(self):
        assert signed_area(E, P2, P1) == pytest.approx(-0.5, abs=1e-15)

    def test_antisymmetry_random(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            e, a, b = (Vec2(*rng.uniform(-10, 10, 2)) for _ in range(3))
            assert signed_area(e, a, b) == pytest.approx(-signed_area(e, b, a), abs=1e-12)

    def test_matches_cross_oracle(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            e, a, b = (Vec2(*rng.uniform(-10, 10, 2)) for _ in range(3))
            assert signed_area(e, a, b) == pytest.approx(cross_area(e, a, b), rel=1e-12, abs=1e-12)

    def test_rigid_motion_invariance(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            pts = [Vec2(*rng.uniform(-5, 5, 2)) for _ in range(3)]
            a0 = signed_area(*pts)
            th = rng.uniform(0, 2 * math.pi)
            shift = Vec2(*rng.uniform(-20, 20, 2))
            moved = [rotate_ccw(p, th) + shift for p in pts]
            scale = max(1.0, abs(a0))
            assert signed_area(*moved) == pytest.approx(a0, abs=1e-9 * scale)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Vec2(float("nan"), 0.0)
        with pytest.raises(ValueError):
            Vec2(0.0, float("inf"))


class TestHullOrder:
    def test_already_counterclockwise(self):
        assert hull_order([P1, P2, P3]).indices == (1, 2, 3)

    def test_relabeling(self):
        assert hull_order([P1, P3, P2]).indices == (1, 3, 2)

    def test_interior_point_is_redundant(self):
        centroid = Vec2((P1.x + P2.x + P3.x) / 3, (P1.y + P2.y + P3.y) / 3)
        with pytest.raises(RedundantPursuer) as exc:
            hull_order([P1, P2, P3, centroid])
        assert exc.value.indices == (4,)

    def test_point_on_edge_is_redundant(self):
        mid = Vec2((P2.x + P3.x) / 2, (P2.y + P3.y) / 2)
        with pytest.raises(RedundantPursuer):
            hull_order([P1, P2, mid, P3])

    def test_collinear_degenerate(self):
        with pytest.raises(DegenerateHull):
            hull_order([Vec2(0, 0), Vec2(1, 0), Vec2(2, 0)])

    def test_positive_orientation(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            pts = [Vec2(*rng.uniform(-5, 5, 2)) for _ in range(6)]
            try:
                order = hull_order(pts)
            except (RedundantPursuer, DegenerateHull):
                continue
            ring = [pts[i - 1] for i in order.indices]
            assert polygon_area(ring) > 0

    def test_edges_wrap(self):
        assert hull_order([P1, P2, P3]).edges() == ((1, 2), (2, 3), (3, 1))


class TestAreaVector:
    def test_table1_areas(self):
        av = area_vector(world([P1, P2, P3], E))
        assert av.areas == pytest.approx((0.5, 0.9, 0.4), abs=1e-15)

    def test_evader_on_edge(self):
        av = area_vector(world([P1, P2, P3], Vec2(0.4, 1.0)))
        assert av[2] == pytest.approx(0.0, abs=1e-15)

    def test_partition(self):
        av = area_vector(world([P1, P2, P3], E))
        assert av.total() == pytest.approx(1.8, abs=1e-12)

    def test_partition_random(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            pts = [Vec2(*rng.uniform(-5, 5, 2)) for _ in range(5)]
            try:
                order = hull_order(pts)
            except (RedundantPursuer, DegenerateHull):
                continue
            ring = [pts[i - 1] for i in order.indices]
            w = rng.dirichlet(np.ones(len(ring)))
            e = Vec2(
                float(sum(wi * p.x for wi, p in zip(w, ring))),
                float(sum(wi * p.y for wi, p in zip(w, ring))),
            )
            av = area_vector(world(ring, e))
            hull_a = polygon_area(ring)
            assert av.total() == pytest.approx(hull_a, abs=1e-9 * abs(hull_a))
            assert av.min() >= -1e-12 * abs(hull_a)


class TestContainmentEquivalence:
    def test_against_half_plane_oracle(self):
        # inside iff the evader sits on the inner side of every supporting line
        def inside_oracle(ring, e):
            for a, b in zip(ring, ring[1:] + ring[:1]):
                nx, ny = -(b.y - a.y), (b.x - a.x)  # inward normal for ccw ring
                if (e.x - a.x) * nx + (e.y - a.y) * ny < 0:
                    return False
            return True

        rng = np.random.default_rng(12)
        checked = 0
        while checked < 10_000:
            n = int(rng.integers(3, 8))
            pts = [Vec2(*rng.uniform(-5, 5, 2)) for _ in range(n)]
            try:
                order = hull_order(pts)
            except (RedundantPursuer, DegenerateHull):
                continue
            ring = [pts[i - 1] for i in order.indices]
            if rng.random() < 0.5:
                w = rng.dirichlet(np.ones(len(ring)) * 0.6)
                e = Vec2(
                    float(sum(wi * p.x for wi, p in zip(w, ring))),
                    float(sum(wi * p.y for wi, p in zip(w, ring))),
                )
            else:
                e = Vec2(*rng.uniform(-6, 6, 2))
            av = area_vector(world(ring, e))
            if abs(av.min()) < 1e-12:  # boundary: both answers acceptable
                continue
            assert (av.min() >= 0) == inside_oracle(ring, e)
            checked += 1


class TestEdgeFrame:
    def test_table1_edge31(self):
        w = world([P1, P2, P3], Vec2(0.4, 1.0))
        f = edge_frame(w, 3, 1)
        assert (f.u.x, f.u.y) == pytest.approx((-0.3713906763541038, 0.9284766908852594), abs=1e-11)
        assert f.alpha == pytest.approx(1.9513027039072615, abs=1e-11)
        assert f.d_ej == pytest.approx(1.0770329614269007, abs=1e-11)
        assert f.d_ek == pytest.approx(1.0770329614269007, abs=1e-11)
        assert f.d_jk == pytest.approx(2.1540659228538015, abs=1e-11)
        assert f.lam == pytest.approx(0.5, abs=1e-12)

    def test_axis_aligned(self):
        w = world([Vec2(0, 0), Vec2(1, 0), Vec2(0, 5)], Vec2(0.25, 0.0))
        f = edge_frame(w, 1, 2)
        assert f.alpha == pytest.approx(0.0, abs=1e-15)
        assert f.lam == pytest.approx(0.25, abs=1e-15)
        assert f.d_ej == pytest.approx(0.25, abs=1e-15)
        assert f.d_ek == pytest.approx(0.75, abs=1e-15)

    def test_lambda_outside_segment(self):
        w = world([Vec2(0, 0), Vec2(1, 0), Vec2(0, 5)], Vec2(2.0, 0.0))
        assert edge_frame(w, 1, 2).lam == pytest.approx(2.0, abs=1e-15)

    def test_unit_norm_and_distance_sum(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            a = Vec2(*rng.uniform(-5, 5, 2))
            b = Vec2(*rng.uniform(-5, 5, 2))
            if (b - a).norm() < 1e-6:
                continue
            lam = float(rng.uniform(0, 1))
            e = Vec2(a.x + lam * (b.x - a.x), a.y + lam * (b.y - a.y))
            f = edge_frame(world([a, b, Vec2(99, 99)], e), 1, 2)
            assert f.u.norm() == pytest.approx(1.0, abs=1e-12)
            assert f.d_ej + f.d_ek == pytest.approx(f.d_jk, abs=1e-9 * f.d_jk)
            assert 0.0 <= f.lam <= 1.0 or math.isclose(f.lam, lam, abs_tol=1e-9)


class TestDetectActiveEdge:
    def frames(self, e):
        return edge_frames(world([P1, P2, P3], e))

    def test_single_sub_threshold_area(self):
        e = Vec2(0.4, 1.0)  # on edge (3,1), lam 0.5
        ev = detect_active_edge(AreaVector((0.5, 0.9, 0.0008)), self.frames(e), 0.001, 0.005)
        assert isinstance(ev, ActiveEdge) and (ev.j, ev.k) == (3, 1)

    def test_all_areas_large(self):
        ev = detect_active_edge(AreaVector((0.5, 0.9, 0.4)), self.frames(E), 0.001, 0.005)
        assert ev is None

    def test_violation(self):
        e = Vec2(0.4, 1.0)
        ev = detect_active_edge(AreaVector((0.5, 0.9, -0.01)), self.frames(e), 0.001, 0.005)
        assert isinstance(ev, Violation) and (ev.j, ev.k) == (3, 1)

    def test_projection_outside_segment_not_active(self):
        # collinear with edge (1,2) but beyond p2: small area yet lam out of range
        w = world([Vec2(0, 0), Vec2(1, 0), Vec2(0.5, 2)], Vec2(2.0, 1e-6))
        av = area_vector(w)
        ev = detect_active_edge(av, edge_frames(w), 0.001, 0.005)
        assert not (isinstance(ev, ActiveEdge) and (ev.j, ev.k) == (1, 2))

    def test_tie_breaks_to_lowest_edge_position(self):
        # evader at a vertex makes two edges zero-area; equal areas pick cyclic-first
        w = world([Vec2(0, 0), Vec2(2, 0), Vec2(0, 2)], Vec2(1e-9, 1e-9))
        ev = detect_active_edge(area_vector(w), edge_frames(w), 0.001, 0.005)
        assert isinstance(ev, ActiveEdge)


class TestRotations:
    def test_quarter_turn(self):
        v = rotate_cw(Vec2(1, 0), math.pi / 2)
        assert (v.x, v.y) == pytest.approx((0.0, -1.0), abs=1e-15)

    def test_cw_on_unit_vector_shifts_angle(self):
        rng = np.random.default_rng(14)
        for _ in range(100):
            alpha = float(rng.uniform(-math.pi, math.pi))
            phi = float(rng.uniform(0, math.pi))
            v = rotate_cw(Vec2(math.cos(alpha), math.sin(alpha)), phi)
            assert v.x == pytest.approx(math.cos(alpha - phi), abs=1e-12)
            assert v.y == pytest.approx(math.sin(alpha - phi), abs=1e-12)

    def test_inverse_pair_and_norm(self):
        rng = np.random.default_rng(15)
        for _ in range(100):
            v = Vec2(*rng.uniform(-3, 3, 2))
            phi = float(rng.uniform(0, 2 * math.pi))
            back = rotate_ccw(rotate_cw(v, phi), phi)
            assert (back.x, back.y) == pytest.approx((v.x, v.y), abs=1e-12)
            n = v.norm()
            if n > 0:
                assert rotate_cw(v, phi).norm() == pytest.approx(n, rel=1e-15, abs=1e-15)


class TestSegmentProjection:
    def test_table1_foot(self):
        foot, dist = closest_point_on_segment(E, P3, P1)
        assert (foot.x, foot.y) == pytest.approx((0.34482758620689646, 1.137931034482759), abs=1e-12)
        assert dist == pytest.approx(0.3713906763541037, abs=1e-12)

    def test_endpoint_clamping(self):
        foot, dist = closest_point_on_segment(Vec2(5, 5), Vec2(0, 0), Vec2(1, 0))
        assert (foot.x, foot.y) == (1.0, 0.0)
        assert dist == pytest.approx(math.hypot(4, 5), abs=1e-12)
