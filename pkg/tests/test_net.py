import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from advstream import ConfigError, build_net, round_to_net


class TestBuildNet:
    def test_powers_of_two(self):
        assert build_net(8, 1.0).points == [1.0, 2.0, 4.0, 8.0]
        assert build_net(2, 1.0).points == [1.0, 2.0]

    def test_alpha_100_eps_tenth(self):
        # 1.1^0 .. 1.1^48 <= 100 < 1.1^49, plus alpha itself
        assert len(build_net(100, 0.1).points) == 50

    def test_first_point_is_one_last_is_alpha(self):
        for alpha, eps in ((2, 1.0), (37.5, 0.3), (1e8, 0.01)):
            net = build_net(alpha, eps)
            assert net.points[0] == 1.0
            assert net.points[-1] == alpha
            assert all(a < b for a, b in zip(net.points, net.points[1:]))

    def test_alpha_exact_power_not_duplicated(self):
        points = build_net(4, 1.0).points
        assert points == [1.0, 2.0, 4.0]

    @pytest.mark.parametrize("alpha,eps", [(1.5, 0.5), (100, 0.0), (100, 1.5), (100, -0.1)])
    def test_invalid_parameters(self, alpha, eps):
        with pytest.raises(ConfigError):
            build_net(alpha, eps)


class TestRoundToNet:
    def test_spec_values(self):
        net = build_net(8, 1.0)
        assert round_to_net(net, 3) == 4.0
        assert round_to_net(net, 0.5) == 0.0
        assert round_to_net(net, 9) == 8.0

    def test_exact_points_round_to_themselves(self):
        net = build_net(1e4, 0.3)
        for y in net.points:
            assert round_to_net(net, y) == y

    def test_size_bound(self):
        for alpha in (1e2, 1e4, 1e8):
            for eps in (0.01, 0.1, 0.5, 1.0):
                net = build_net(alpha, eps)
                assert len(net.points) + 1 <= 2 + math.ceil(
                    math.log(alpha) / math.log(1 + eps)
                )

    def test_soundness_sampled(self):
        rng = np.random.default_rng(20240)
        for alpha, eps in ((1e2, 0.5), (1e4, 0.1), (1e8, 0.01)):
            net = build_net(alpha, eps)
            xs = np.concatenate(
                [
                    rng.uniform(1.0, alpha, size=3000),
                    np.exp(rng.uniform(0.0, math.log(alpha), size=3000)),
                ]
            )
            for x in xs:
                y = net.round_up(float(x))
                assert x <= y <= (1 + eps) * x

    @given(st.floats(-5, 1e9), st.floats(-5, 1e9))
    @settings(deadline=None, max_examples=300)
    def test_monotone_and_idempotent(self, y1, y2):
        net = build_net(1e6, 0.25)
        r1, r2 = net.round_up(y1), net.round_up(y2)
        if y1 <= y2:
            assert r1 <= r2
        assert net.round_up(r1) == r1

    def test_membership(self):
        net = build_net(64, 1.0)
        assert 4.0 in net
        assert 3.0 not in net
        assert all(p in net for p in net.points)
