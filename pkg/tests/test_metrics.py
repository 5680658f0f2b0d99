import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vise.distributions import DistributionSpec, Family
from vise.errors import UndefinedMetricError
from vise.metrics import GameResult, accept_share, aci, aggregate, survival_rate
from vise.voting import ModeConfig, StrategyConfig, run_game


def result(num=0.0, den=4, survivors=2, accepted=0, played=2, n=2):
    return GameResult(n, num, den, survivors, accepted, played)


def scripted(*rows):
    it = iter(rows)
    return lambda rng, size: np.asarray(next(it), dtype=float)


class TestAci:
    def test_hand_trace(self):
        # step 1 accepted (+4, -2), step 2 rejected: (4 - 2 + 0 + 0) / 4
        alt = StrategyConfig.altruist(100)
        r = run_game(None, alt, ModeConfig("noextinct", 40.0, 2), 2, 0,
                     sampler=scripted([4, -2], [-4, 2]))
        assert r.accepted_steps == 1
        assert aci(r) == 0.5

    def test_all_rejected(self):
        r = run_game(None, StrategyConfig.egoist(), ModeConfig("noextinct", 40.0, 3), 3, 0,
                     sampler=scripted([-1, -1, 1], [-1, -1, 1], [0, 0, 0]))
        assert aci(r) == 0.0

    def test_dead_agent_leaves_denominator(self):
        # agent 1 ends step 1 at -2 and is gone for step 2
        alt = StrategyConfig.altruist(100)
        r = run_game(None, alt, ModeConfig("extinct", 0.0, 2), 2, 0,
                     sampler=scripted([4, -2], [1]))
        assert r.aci_denominator == 3
        assert aci(r) == pytest.approx(3 / 3)

    def test_zero_denominator(self):
        with pytest.raises(UndefinedMetricError):
            aci(result(den=0))

    def test_bounded_by_max_increment(self):
        spec = DistributionSpec(Family.SP, -3.0, 80.0, 3.0)
        seen = []
        r = run_game(spec, StrategyConfig.altruist(50), ModeConfig("extinct", 40.0, 200), 51, 7,
                     on_step=lambda rec: seen.append(np.abs(rec.increments).max()))
        assert abs(aci(r)) <= max(seen)


class TestSurvival:
    def test_fraction(self):
        assert survival_rate(result(survivors=134, n=201)) == 134 / 201

    def test_explicit_n(self):
        assert survival_rate(result(survivors=0), 201) == 0.0

    def test_noextinction_is_one(self):
        spec = DistributionSpec(Family.NORMAL, -10.0, 80.0)
        r = run_game(spec, StrategyConfig.altruist(30), ModeConfig("noextinct", 40.0, 100), 21, 3)
        assert survival_rate(r) == 1.0
        assert r.aci_denominator == 21 * 100

    def test_bad_n(self):
        with pytest.raises(ValueError):
            survival_rate(result(), 0)


class TestAcceptShare:
    def test_ratio(self):
        assert accept_share(result(accepted=1, played=4)) == 0.25

    def test_vanishes_far_below_zero(self):
        spec = DistributionSpec(Family.NORMAL, -400.0, 80.0)
        r = run_game(spec, StrategyConfig.egoist(), ModeConfig(), 201, 11)
        assert accept_share(r) < 0.01


class TestAggregate:
    def test_identical(self):
        s = aggregate([result(num=2.0)] * 5)
        assert s.aci_mean == 0.5 and s.aci_stderr == 0.0
        assert s.survival_stderr == 0.0 and s.replicates == 5

    def test_two_values(self):
        s = aggregate([result(num=4.0), result(num=12.0)])
        assert s.aci_mean == 2.0 and s.aci_stderr == 1.0

    def test_single_replicate(self):
        s = aggregate([result(num=4.0)])
        assert s.aci_mean == 1.0
        assert math.isnan(s.aci_stderr) and math.isnan(s.survival_stderr)

    def test_empty(self):
        with pytest.raises(ValueError):
            aggregate([])

    def test_per_game_then_average(self):
        # pooled would give 10/12; per-game average is (1 + 1/4) / 2
        s = aggregate([result(num=2.0, den=2), result(num=2.0, den=8)])
        assert s.aci_mean == 0.625

    @settings(max_examples=50)
    @given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=20), st.randoms())
    def test_permutation_invariant(self, nums, rnd):
        games = [result(num=v, survivors=i % 3) for i, v in enumerate(nums)]
        shuffled = games[:]
        rnd.shuffle(shuffled)
        assert aggregate(games) == aggregate(shuffled)

    @given(st.lists(st.integers(0, 201), min_size=2, max_size=30))
    def test_ranges(self, survivors):
        s = aggregate([result(survivors=v, n=201, accepted=v % 3, played=2) for v in survivors])
        assert 0.0 <= s.survival_mean <= 1.0
        assert s.survival_stderr >= 0.0 and s.aci_stderr >= 0.0
        assert 0.0 <= s.accept_share_mean <= 1.0
