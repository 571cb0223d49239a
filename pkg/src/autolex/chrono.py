"""Divergence times from lexical distances.

A lexical distance D in [0, 1) is mapped to a time

    T = -ln(1 - D) / (2 * epsilon)

which is strictly increasing in D, so the order of matrix entries (and
hence any tree built from their ranks) is unchanged. ``epsilon`` is the
replacement rate per unit time per lineage; the factor 2 accounts for
both lineages diverging from their common ancestor. Fix it either
directly or by calibrating on one pair with a known separation date.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SaturatedDistance, ZeroDistance
from .lexstat import PairMatrix

__all__ = ["TimeMatrix", "CalibrationPoint", "divergence_time", "calibrate"]


class TimeMatrix(PairMatrix):
    """Pairwise divergence times (non-negative, finite)."""


@dataclass(frozen=True)
class CalibrationPoint:
    pair: tuple[str, str]
    known_time: float

    def __post_init__(self):
        if not (self.known_time > 0 and math.isfinite(self.known_time)):
            raise ValueError(f"known_time must be a positive finite number, got {self.known_time}")
        a, b = self.pair
        if a == b:
            raise ValueError("calibration pair must name two different languages")
        object.__setattr__(self, "pair", (a, b))


def _check_epsilon(epsilon):
    if not (epsilon > 0 and math.isfinite(epsilon)):
        raise ValueError(f"epsilon must be a positive finite number, got {epsilon}")


def divergence_time(m: PairMatrix, epsilon: float = 1.0) -> TimeMatrix:
    _check_epsilon(epsilon)
    values = m.values
    saturated = np.argwhere(np.triu(values >= 1.0, k=1))
    if saturated.size:
        i, j = saturated[0]
        raise SaturatedDistance(m.labels[i], m.labels[j])
    times = -np.log1p(-values) / (2.0 * epsilon)
    np.fill_diagonal(times, 0.0)
    return TimeMatrix(m.labels, times)


def calibrate(m: PairMatrix, point: CalibrationPoint) -> float:
    """Rate ``epsilon`` for which ``divergence_time`` reproduces
    ``point.known_time`` on ``point.pair`` exactly."""
    a, b = point.pair
    try:
        d = m[a, b]
    except KeyError as exc:
        raise KeyError(f"calibration language {exc.args[0]!r} not in matrix") from None
    if d >= 1.0:
        raise SaturatedDistance(a, b)
    if d <= 0.0:
        raise ZeroDistance(a, b)
    return -math.log1p(-d) / (2.0 * point.known_time)
