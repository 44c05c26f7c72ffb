"""Directed-locomotion fitness of an episode trajectory.

The score combines progress along the target direction, a penalty for ending
up off the ideal line, and a reward for travelling straight: with d the
start-to-end distance, delta the angle between the travelled chord and the
target direction, and L the full path length,

    F = (d / (L + eps)) * (d * cot(delta) / (delta + 1) - w * d * tan(delta))

delta is clamped below so a perfectly straight run scores a large finite
value instead of diverging. A robot that never moves scores exactly zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class FitnessParams:
    gamma: float = 0.0  # target direction, radians, world frame
    w: float = 0.01  # lateral-deviation penalty factor
    epsilon: float = 1e-10
    delta_min: float = 0.01  # radians

    def __post_init__(self):
        if self.w <= 0 or self.epsilon <= 0:
            raise ValueError("w and epsilon must be positive")
        if not 0.0 < self.delta_min < math.pi / 2:
            raise ValueError("delta_min must be in (0, pi/2)")


@dataclass(frozen=True)
class PathMetrics:
    p0: tuple[float, float]
    p1: tuple[float, float]
    delta: float  # radians, >= 0
    length: float  # meters


def path_metrics_from_xy(xs, ys, gamma: float) -> PathMetrics:
    """Chord deviation angle and path length of a recorded (x, y) sequence."""
    if len(xs) == 0:
        raise ValueError("empty trace")
    p0 = (float(xs[0]), float(ys[0]))
    p1 = (float(xs[-1]), float(ys[-1]))
    dx = p1[0] - p0[0]
    dy = p1[1] - p0[1]
    if dx == 0.0 and dy == 0.0:
        delta = math.pi / 2  # stationary: direction undefined
    else:
        raw = math.atan2(dy, dx) - gamma
        delta = abs(math.atan2(math.sin(raw), math.cos(raw)))
    length = 0.0
    for i in range(1, len(xs)):
        length += math.hypot(float(xs[i]) - float(xs[i - 1]),
                             float(ys[i]) - float(ys[i - 1]))
    return PathMetrics(p0=p0, p1=p1, delta=delta, length=length)


def path_metrics(trace, gamma: float) -> PathMetrics:
    return path_metrics_from_xy(trace.x, trace.y, gamma)


def directed_fitness(m: PathMetrics, params: FitnessParams) -> float:
    d = math.hypot(m.p1[0] - m.p0[0], m.p1[1] - m.p0[1])
    if not (math.isfinite(d) and math.isfinite(m.delta) and math.isfinite(m.length)):
        raise ValueError("non-finite path metrics")
    delta = max(m.delta, params.delta_min)
    e1 = d / math.tan(delta)
    e2 = d * math.tan(delta)
    e3 = d / (m.length + params.epsilon)
    return e3 * (e1 / (delta + 1.0) - params.w * e2)
