"""Agglomerative clustering of growing squares.

Squares grow until two touch; the pair is replaced by its weighted centroid
carrying the summed weight.  If that merged square already touches other
squares, it keeps absorbing them (smallest id first) at the same instant,
one binary merge at a time.  Among pairs touching at the same instant the
lexicographically smallest ``(min id, max id)`` goes first.
"""
from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .arith import EXACT, INF, Arithmetic
from .engine import Engine, EngineStats
from .geometry import WeightedPoint, merge, pairwise_intersection_time, squares_intersect
from .wbtree import DEFAULT_ALPHA


@dataclass(frozen=True)
class MergeEvent:
    time: object
    left: int
    right: int
    result: int
    x: object
    y: object
    w: object


@dataclass
class Dendrogram:
    leaves: list
    merges: list = field(default_factory=list)
    roots: list = field(default_factory=list)

    def __eq__(self, other):
        if not isinstance(other, Dendrogram):
            return NotImplemented
        return (self.leaves, self.merges, self.roots) == (other.leaves, other.merges, other.roots)

    def parents(self) -> dict:
        out = {}
        for m in self.merges:
            out[m.left] = m.result
            out[m.right] = m.result
        return out

    def first_divergence(self, other: "Dendrogram") -> Optional[str]:
        if self.leaves != other.leaves:
            return "leaf sets differ"
        for i, (a, b) in enumerate(zip(self.merges, other.merges)):
            if a != b:
                return f"merge {i}: {a} != {b}"
        if len(self.merges) != len(other.merges):
            return f"merge count {len(self.merges)} != {len(other.merges)}"
        if self.roots != other.roots:
            return f"roots {self.roots} != {other.roots}"
        return None


@dataclass
class RunStats:
    n: int = 0
    total_events: int = 0
    tournament_events: int = 0
    linking_events: int = 0
    peak_certificates: int = 0
    max_links_per_node: int = 0
    wall_time: float = 0.0
    mode: str = "exact"


def _check_input(points) -> list:
    points = list(points)
    ids = [p.id for p in points]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate point ids")
    return points


def cluster(
    points: Iterable[WeightedPoint],
    horizon=None,
    instances: int = 8,
    arith: Arithmetic = EXACT,
    alpha: float = DEFAULT_ALPHA,
    stats: Optional[RunStats] = None,
    track_links: bool = False,
) -> Dendrogram:
    """Simulate the growth process with the kinetic engine."""
    started = time.perf_counter()
    points = _check_input(points)
    horizon = INF if horizon is None else horizon
    dendro = Dendrogram(leaves=sorted(points, key=lambda p: p.id))
    engine = Engine(points, instances=instances, arith=arith, alpha=alpha)
    next_id = max((p.id for p in points), default=-1) + 1
    max_links = engine.max_links_per_node() if track_links else 0
    while len(engine) > 1:
        event = engine.advance_to_next_event(horizon)
        if event is None:
            break
        t, a, b = event
        z = merge(engine.delete(a), engine.delete(b), next_id)
        dendro.merges.append(MergeEvent(t, a, b, z.id, z.x, z.y, z.w))
        next_id += 1
        while (r := engine.intersects_query(z, t)) is not None:
            z2 = merge(z, engine.delete(r), next_id)
            dendro.merges.append(MergeEvent(t, z.id, r, z2.id, z2.x, z2.y, z2.w))
            next_id += 1
            z = z2
        engine.insert(z)
        if track_links:
            max_links = max(max_links, engine.max_links_per_node())
    dendro.roots = sorted(engine.registry)
    if stats is not None:
        s: EngineStats = engine.stats
        stats.n = len(points)
        stats.tournament_events = s.tournament_events
        stats.linking_events = s.linking_events
        stats.total_events = s.total_events
        stats.peak_certificates = s.peak_certificates
        stats.max_links_per_node = max_links
        stats.wall_time = time.perf_counter() - started
        stats.mode = arith.name
    return dendro


def brute_cluster(points: Iterable[WeightedPoint], horizon=None) -> Dendrogram:
    """Reference simulation over all pairwise contact times (heap with lazy deletion)."""
    points = _check_input(points)
    horizon = INF if horizon is None else horizon
    dendro = Dendrogram(leaves=sorted(points, key=lambda p: p.id))
    alive = {p.id: p for p in points}
    heap = []
    items = sorted(alive.values(), key=lambda p: p.id)
    for i, p in enumerate(items):
        for q in items[i + 1:]:
            heap.append((pairwise_intersection_time(p, q), p.id, q.id))
    heapq.heapify(heap)
    next_id = max(alive, default=-1) + 1
    while len(alive) > 1 and heap:
        t, a, b = heapq.heappop(heap)
        if a not in alive or b not in alive:
            continue
        if t > horizon:
            break
        z = merge(alive.pop(a), alive.pop(b), next_id)
        dendro.merges.append(MergeEvent(t, a, b, z.id, z.x, z.y, z.w))
        next_id += 1
        while True:
            hits = [r for r in alive.values() if squares_intersect(z, r, t)]
            if not hits:
                break
            r = min(hits, key=lambda p: p.id)
            del alive[r.id]
            z2 = merge(z, r, next_id)
            dendro.merges.append(MergeEvent(t, z.id, r.id, z2.id, z2.x, z2.y, z2.w))
            next_id += 1
            z = z2
        for r in alive.values():
            heapq.heappush(heap, (pairwise_intersection_time(z, r), r.id, z.id))
        alive[z.id] = z
    dendro.roots = sorted(alive)
    return dendro
