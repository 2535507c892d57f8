"""Multiplicative estimate net over [1, alpha] and output rounding.

The net is the geometric grid {(1+eps)^i : i >= 0, (1+eps)^i <= alpha} plus
alpha itself; zero is an implicit, always-valid output.  Rounding any
y in [1, alpha] up to the next grid point costs at most a (1+eps) factor,
values below 1 collapse to 0 and values above alpha clamp to alpha.  Both the
exact tracker and the robust wrapper emit only values from this vocabulary,
which is what caps the number of distinct estimates an adversary can see.
"""

from __future__ import annotations

from bisect import bisect_left

from .core import ConfigError


class EstimateNet:
    """Sorted rounding grid over [1, alpha] with granularity epsilon."""

    __slots__ = ("epsilon", "alpha", "points")

    def __init__(self, alpha: float, epsilon: float):
        if alpha < 2:
            raise ConfigError(f"net requires alpha >= 2, got {alpha}")
        if not 0 < epsilon <= 1:
            raise ConfigError(f"net granularity must be in (0, 1], got {epsilon}")
        self.alpha = float(alpha)
        self.epsilon = float(epsilon)
        points = []
        v = 1.0
        while v <= self.alpha:
            points.append(v)
            v *= 1.0 + self.epsilon
        if points[-1] != self.alpha:
            points.append(self.alpha)
        self.points = points

    def __len__(self) -> int:
        return len(self.points)

    def round_up(self, y: float) -> float:
        """Round y into {0} U points: below 1 -> 0, above alpha -> alpha,
        otherwise the smallest grid point >= y."""
        if y < 1.0:
            return 0.0
        if y > self.alpha:
            return self.alpha
        return self.points[bisect_left(self.points, y)]

    def __contains__(self, y: float) -> bool:
        i = bisect_left(self.points, y)
        return i < len(self.points) and self.points[i] == y

    def __repr__(self) -> str:
        return (
            f"EstimateNet(alpha={self.alpha!r}, epsilon={self.epsilon!r}, "
            f"size={len(self.points)})"
        )


def build_net(alpha: float, epsilon: float) -> EstimateNet:
    return EstimateNet(alpha, epsilon)


def round_to_net(net: EstimateNet, y: float) -> float:
    return net.round_up(y)
