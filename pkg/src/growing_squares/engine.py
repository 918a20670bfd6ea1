"""The full kinetic structure: several linked instances under one clock.

Each instance sees the points through a quadrant reflection and detects one
dominance variant.  The default runs all eight (four reflections, both
variants).  Four instances (identity and x-reflection) already cover every
pair, since any two points are dominance-comparable in one of those frames.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Optional

from .arith import EXACT, INF, Arithmetic
from .geometry import WeightedPoint
from .linked import LinkedRangeStructure, OverlapError, Variant
from .wbtree import DEFAULT_ALPHA

log = logging.getLogger(__name__)

FRAMES_8 = ((1, 1), (-1, 1), (1, -1), (-1, -1))
FRAMES_4 = ((1, 1), (-1, 1))


@dataclass(frozen=True)
class QuadrantTransform:
    sx: int
    sy: int

    def apply(self, x, y):
        return self.sx * x, self.sy * y


@dataclass
class EngineStats:
    tournament_events: int = 0
    linking_events: int = 0
    peak_certificates: int = 0
    max_links_per_node: int = 0

    @property
    def total_events(self) -> int:
        return self.tournament_events + self.linking_events


class Engine:
    """Maintains disjoint growing squares and reports their first contacts."""

    def __init__(
        self,
        points: Iterable[WeightedPoint] = (),
        instances: int = 8,
        arith: Arithmetic = EXACT,
        alpha: float = DEFAULT_ALPHA,
        now=0,
    ):
        if instances not in (4, 8):
            raise ValueError("instances must be 4 or 8")
        points = list(points)
        self.arith = arith
        self.now = arith.num(now)
        self.registry: dict[int, WeightedPoint] = {}
        for p in points:
            if p.id in self.registry:
                raise ValueError(f"duplicate point id {p.id}")
            self.registry[p.id] = p
        frames = FRAMES_8 if instances == 8 else FRAMES_4
        counter = itertools.count()
        self.transforms = [QuadrantTransform(sx, sy) for sx, sy in frames]
        self.instances = [
            LinkedRangeStructure(points, variant, t.sx, t.sy, self.now, arith, alpha, counter)
            for t in self.transforms
            for variant in (Variant.PLUS, Variant.MINUS)
        ]
        self.stats = EngineStats()
        self._track_peak()

    def __len__(self):
        return len(self.registry)

    def __contains__(self, pid):
        return pid in self.registry

    def _track_peak(self) -> None:
        count = sum(inst.certificate_count() for inst in self.instances)
        if count > self.stats.peak_certificates:
            self.stats.peak_certificates = count

    def _set_now(self, t) -> None:
        if t < self.now and not self.arith.eq(t, self.now):
            raise ValueError(f"time moved backwards: {t} < {self.now}")
        self.now = t
        for inst in self.instances:
            inst.now = t

    # -- updates -------------------------------------------------------------

    def insert(self, p: WeightedPoint) -> None:
        if p.id in self.registry:
            raise KeyError(f"duplicate point id {p.id}")
        witness = self.intersects_query(p, self.now)
        if witness is not None:
            raise OverlapError(p.id, witness)
        self.registry[p.id] = p
        for inst in self.instances:
            inst.insert(p)
        self._track_peak()

    def delete(self, pid: int) -> WeightedPoint:
        p = self.registry.pop(pid)
        for inst in self.instances:
            inst.delete(pid)
        return p

    # -- simulation ------------------------------------------------------------

    def advance_to_next_event(self, horizon=INF):
        """Advance to the next contact between two squares.

        Returns ``(t, p, q)`` with ``p < q`` the smallest touching pair at the
        earliest contact time, or ``None`` if nothing touches by ``horizon``.
        The event stays pending until an update separates the pair.
        """
        while True:
            tour = min(self.instances, key=lambda i: _peek_key(i.tq))
            link_t = min(inst.next_link_time() for inst in self.instances)
            tour_t = tour.next_tournament_time()
            t = min(tour_t, link_t)
            if t == INF or t > horizon:
                return None
            if tour_t <= link_t:
                self._set_now(tour_t)
                tour.process_tournament_event()
                self.stats.tournament_events += 1
                continue
            self._set_now(link_t)
            pairs = set()
            for inst in self.instances:
                for cert in inst.link_certs_at(link_t):
                    pairs |= inst.failing_pairs(cert, link_t)
            p, q = min(pairs)
            self.stats.linking_events += 1
            return link_t, p, q

    # -- queries ---------------------------------------------------------------

    def touching(self, q: WeightedPoint, at=None) -> list:
        """Ids of every stored square meeting the square of ``q`` at ``at``."""
        return self._touching(q.x, q.y, q.w / 2, q.id, at)

    def _touching(self, x, y, half_w, qid, at) -> list:
        if at is None:
            at = self.now
        elif not self.arith.eq(at, self.now):
            raise ValueError("queries are answered against the current time only")
        found = set()
        for inst in self.instances:
            found |= inst.touching(x, y, half_w, at, qid)
        return sorted(found)

    def intersects_query(self, q: WeightedPoint, at=None) -> Optional[int]:
        """Smallest id whose square meets ``q``'s square at ``at``, else ``None``."""
        found = self.touching(q, at)
        return found[0] if found else None

    def contains_query(self, pt, at=None) -> Optional[int]:
        """Smallest id whose square contains the point ``pt = (x, y)``."""
        x, y = pt
        found = self._touching(x, y, 0, -1, at)
        return found[0] if found else None

    def max_links_per_node(self) -> int:
        value = max((inst.max_links_per_node() for inst in self.instances), default=0)
        self.stats.max_links_per_node = max(self.stats.max_links_per_node, value)
        return value


def _peek_key(queue):
    top = queue.peek()
    return (INF, 0) if top is None else (top.time, top.handle)
