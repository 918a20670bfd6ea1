"""Weighted points, growing squares and the pairwise predicates on them.

A point ``p`` owns the closed square of width ``t * p.w`` centred on it.
Corner coordinates are affine in ``t``.  All comparisons between distinct
points are perturbed: equal coordinates fall back to the point id, so any
two points are strictly ordered on every axis.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, NamedTuple


class CornerKind(enum.Enum):
    LowerLeft = "lower_left"
    UpperRight = "upper_right"


class Axis(enum.Enum):
    X = "x"
    Y = "y"


class DominanceClass(enum.Enum):
    NotDominating = 0
    DMinus = 1
    DPlus = 2


@dataclass(frozen=True, slots=True)
class WeightedPoint:
    id: int
    x: Any
    y: Any
    w: Any

    def __post_init__(self):
        if not self.w > 0:
            raise ValueError(f"point {self.id}: weight must be positive, got {self.w}")

    @property
    def key_x(self):
        return (self.x, self.id)

    @property
    def key_y(self):
        return (self.y, self.id)


class LinearMotion(NamedTuple):
    """``value(t) = a + b * t``."""

    a: Any
    b: Any

    def value(self, t):
        return self.a + self.b * t


class GammaKey(NamedTuple):
    value: Any
    tiebreak: int


def corner_motion(p: WeightedPoint, corner: CornerKind, axis: Axis) -> LinearMotion:
    centre = p.x if axis is Axis.X else p.y
    half = p.w / 2
    return LinearMotion(centre, -half if corner is CornerKind.LowerLeft else half)


def gamma_key(p: WeightedPoint) -> GammaKey:
    return GammaKey(p.x - p.y, p.id)


def dominates(p: WeightedPoint, q: WeightedPoint) -> bool:
    """True iff ``q`` lies below-left of ``p`` (ties broken by id)."""
    return q.key_x <= p.key_x and q.key_y <= p.key_y


def classify(p: WeightedPoint, q: WeightedPoint) -> DominanceClass:
    """Where ``p`` sits relative to ``q``: outside D(q), in D^-(q) or in D^+(q)."""
    if not dominates(p, q):
        return DominanceClass.NotDominating
    if gamma_key(p) < gamma_key(q):
        return DominanceClass.DMinus
    return DominanceClass.DPlus


def pairwise_intersection_time(p: WeightedPoint, q: WeightedPoint):
    """First ``t >= 0`` at which the closed squares of ``p`` and ``q`` touch."""
    gap = max(abs(p.x - q.x), abs(p.y - q.y))
    return 2 * gap / (p.w + q.w)


def squares_intersect(p: WeightedPoint, q: WeightedPoint, t) -> bool:
    """Direct closed-rectangle overlap test at time ``t``."""
    hp, hq = t * p.w / 2, t * q.w / 2
    return (p.x - hp <= q.x + hq and q.x - hq <= p.x + hp
            and p.y - hp <= q.y + hq and q.y - hq <= p.y + hp)


def merge(p: WeightedPoint, q: WeightedPoint, new_id: int) -> WeightedPoint:
    """Weighted centroid of ``p`` and ``q`` carrying their combined weight."""
    w = p.w + q.w
    alpha = p.w / w
    return WeightedPoint(
        new_id,
        alpha * p.x + (1 - alpha) * q.x,
        alpha * p.y + (1 - alpha) * q.y,
        w,
    )
