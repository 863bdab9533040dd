import math

import numpy as np
import pytest

from encircle.errors import ValidationError
from encircle.geometry import Vec2
from encircle.policies import (
    ControlInbox,
    ExternalPolicy,
    PolicySpec,
    RandomPolicy,
    ReplayPolicy,
    StationaryPolicy,
    make_policy,
)
from encircle.simulation import Thresholds, WorldState, run_episode

THR = Thresholds(eps_act=0.0018, eps_exit=0.0036, eps_violation=0.009)

P1 = Vec2(0.0, 2.0)
P2 = Vec2(-1.0, 0.0)
P3 = Vec2(0.8, 0.0)


def world(evader, pursuers=(P1, P2, P3), t=0.0):
    return WorldState(t=t, pursuers=tuple(pursuers), evader=evader)


class TestPolicySpec:
    def test_unknown_kind(self):
        with pytest.raises(ValidationError):
            PolicySpec(kind="zigzag")

    def test_bad_period(self):
        with pytest.raises(ValidationError):
            PolicySpec(kind="switching", period=0.0)

    def test_speed_fraction_range(self):
        with pytest.raises(ValidationError):
            PolicySpec(kind="greedy", speed_fraction=1.5)


class TestGreedy:
    def test_flees_nearest_due_south(self):
        pol = make_policy(PolicySpec(kind="greedy"), 0.7, THR)
        mu, psi = pol.control(world(Vec2(0, 1)))
        assert mu == pytest.approx(0.7)
        assert psi == pytest.approx(-math.pi / 2, abs=1e-12)

    def test_tie_breaks_to_lowest_label(self):
        sym = (Vec2(-1, 0), Vec2(1, 0), Vec2(0, 5))
        pol = make_policy(PolicySpec(kind="greedy"), 0.7, THR)
        mu, psi = pol.control(world(Vec2(0, 0.5), pursuers=sym))
        away_from_p1 = (Vec2(0, 0.5) - Vec2(-1, 0)).angle()
        assert psi == pytest.approx(away_from_p1, abs=1e-12)

    def test_zero_speed_degenerates_to_stationary(self):
        pol = make_policy(PolicySpec(kind="greedy"), 0.0, THR)
        mu, _ = pol.control(world(Vec2(0, 1)))
        assert mu == 0.0


class TestStationary:
    def test_always_zero(self):
        pol = StationaryPolicy()
        assert pol.control(world(Vec2(0, 1))) == (0.0, 0.0)


class TestClosestLink:
    def test_heads_to_nearest_edge_foot(self):
        pol = make_policy(PolicySpec(kind="closest_link"), 0.7, THR)
        mu, psi = pol.control(world(Vec2(0, 1)))
        assert mu == pytest.approx(0.7)
        assert psi == pytest.approx(0.3805063771123657, abs=1e-9)

    def test_rides_outward_normal_when_active(self):
        on_edge = Vec2(0.4, 1.0)  # on edge (3,1), alpha = 1.9513027
        pol = make_policy(PolicySpec(kind="closest_link"), 0.7, THR)
        _, psi = pol.control(world(on_edge))
        assert psi == pytest.approx(1.9513027039072615 - math.pi / 2, abs=1e-9)


class TestSwitching:
    def test_seeks_edge_before_contact(self):
        pol = make_policy(PolicySpec(kind="switching", period=0.3), 0.7, THR)
        pol.reset()
        _, psi = pol.control(world(Vec2(0, 1)))
        assert psi == pytest.approx(0.3805063771123657, abs=1e-9)

    def test_alternates_every_half_period_after_contact(self):
        pol = make_policy(PolicySpec(kind="switching", period=0.3), 0.7, THR)
        pol.reset()
        on_edge = Vec2(0.4, 1.0)
        # first contact at t=1.0 locks the cadence
        _, psi0 = pol.control(world(on_edge, t=1.0))
        assert psi0 == pytest.approx(1.9513027039072615 - math.pi / 2, abs=1e-9)
        # second half-period heads for the pursuer centroid
        _, psi1 = pol.control(world(on_edge, t=1.2))
        cen = Vec2((P1.x + P2.x + P3.x) / 3, (P1.y + P2.y + P3.y) / 3)
        assert psi1 == pytest.approx((cen - on_edge).angle(), abs=1e-9)
        # third half-period is edge-seeking again
        _, psi2 = pol.control(world(on_edge, t=1.33))
        assert psi2 == pytest.approx(psi0, abs=1e-9)


class TestRandom:
    def test_same_seed_same_sequence(self):
        seq = []
        for _ in range(2):
            pol = RandomPolicy(speed=0.7, hold=0.1, seed=123)
            pol.reset()
            seq.append([pol.control(world(Vec2(0, 1), t=0.005 * k))[1] for k in range(100)])
        assert seq[0] == seq[1]

    def test_zero_order_hold_within_window(self):
        pol = RandomPolicy(speed=0.7, hold=0.1, seed=5)
        pol.reset()
        psis = {pol.control(world(Vec2(0, 1), t=t))[1] for t in np.arange(0.0, 0.0999, 0.005)}
        assert len(psis) == 1

    def test_redraws_each_window(self):
        pol = RandomPolicy(speed=0.7, hold=0.1, seed=5)
        pol.reset()
        a = pol.control(world(Vec2(0, 1), t=0.0))[1]
        b = pol.control(world(Vec2(0, 1), t=0.1))[1]
        c = pol.control(world(Vec2(0, 1), t=0.2))[1]
        assert len({a, b, c}) == 3


class TestExternal:
    def test_default_before_first_message(self):
        pol = ExternalPolicy(mu_max=0.7)
        assert pol.control(world(Vec2(0, 1))) == (0.0, 0.0)

    def test_zero_order_hold(self):
        inbox = ControlInbox()
        pol = ExternalPolicy(mu_max=0.7, inbox=inbox)
        inbox.put(0.9 * 0.7, math.pi / 4)
        assert pol.control(world(Vec2(0, 1))) == (0.63, math.pi / 4)
        assert pol.control(world(Vec2(0, 1), t=1.0)) == (0.63, math.pi / 4)

    def test_clamps_speed(self):
        inbox = ControlInbox()
        pol = ExternalPolicy(mu_max=0.7, inbox=inbox)
        inbox.put(2 * 0.7, 0.0)
        mu, _ = pol.control(world(Vec2(0, 1)))
        assert mu == pytest.approx(0.7)


class TestReplay:
    def test_applies_entries_at_their_times(self):
        pol = ReplayPolicy([(0.0, 0.1, 0.0), (0.5, 0.7, 1.0)])
        pol.reset()
        assert pol.control(world(Vec2(0, 1), t=0.0)) == (0.1, 0.0)
        assert pol.control(world(Vec2(0, 1), t=0.499))[0] == 0.1
        assert pol.control(world(Vec2(0, 1), t=0.5)) == (0.7, 1.0)

    def test_default_before_first_entry(self):
        pol = ReplayPolicy([(0.5, 0.7, 1.0)])
        pol.reset()
        assert pol.control(world(Vec2(0, 1), t=0.0)) == (0.0, 0.0)


class TestAgainstController:
    @pytest.mark.parametrize(
        "kind", ["greedy", "switching", "random", "stationary", "closest_link"]
    )
    def test_all_policies_captured_and_encircled(self, table1, kind):
        sc = table1.with_overrides(policy=PolicySpec(kind=kind, seed=7))
        _, res = run_episode(sc)
        assert res.captured
        assert res.encirclement_ok
        assert res.tau is not None and res.tau < 1.0

    @pytest.mark.parametrize(
        "kind", ["greedy", "switching", "random", "closest_link"]
    )
    def test_speed_stays_within_limit(self, table1, kind):
        sc = table1.with_overrides(policy=PolicySpec(kind=kind, seed=7))
        trace, _ = run_episode(sc)
        mu_max = sc.params.mu_max
        dt = sc.dt
        for a, b in zip(trace, trace[1:]):
            moved = (b.evader - a.evader).norm()
            assert moved <= mu_max * (b.t - a.t) + 1e-12
