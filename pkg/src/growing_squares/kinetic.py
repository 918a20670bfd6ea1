"""Certificates over affine motions and the addressable event queue."""
from __future__ import annotations

import enum
import itertools
from typing import Any, Iterator, Optional

from .arith import INF


class CertificateError(RuntimeError):
    """Raised on certificate bookkeeping bugs (violated or dead certificates)."""


class CertKind(enum.Enum):
    TournamentMin = "tournament_min"
    TournamentMax = "tournament_max"
    Linking = "linking"


def failure_time(lhs, rhs, now, eps=0.0):
    """Earliest ``t >= now`` at which ``lhs(t) <= rhs(t)`` stops holding.

    ``lhs`` and ``rhs`` are ``(a, b)`` pairs describing ``a + b*t``.  A crossing
    counts as failure at the instant of equality.  Returns ``INF`` when the
    motions never cross after ``now``.  With ``eps > 0`` (float mode) a
    violation within tolerance is read as failing right now.
    """
    la, lb = lhs
    ra, rb = rhs
    if lb <= rb:
        lv, rv = la + lb * now, ra + rb * now
        if lv > rv and not (eps and lv - rv <= eps * max(1.0, abs(lv), abs(rv))):
            raise CertificateError(f"assertion already violated at t={now}")
        return INF
    t = (ra - la) / (lb - rb)
    if t < now:
        if eps and now - t <= eps * max(1.0, abs(now)):
            return now
        raise CertificateError(f"assertion already violated at t={now}")
    return t


class Certificate:
    """A scheduled comparison; ``pos`` is its slot in the owning queue."""

    __slots__ = ("handle", "kind", "time", "lhs", "rhs", "node", "partner", "pos")

    def __init__(self, kind: CertKind, lhs, rhs, time, node: Any = None, partner: Any = None):
        self.kind = kind
        self.lhs = lhs
        self.rhs = rhs
        self.time = time
        self.node = node
        self.partner = partner
        self.handle = -1
        self.pos = -1

    @property
    def live(self) -> bool:
        return self.pos >= 0

    def __repr__(self):
        return f"Certificate({self.kind.name}, t={self.time}, h={self.handle})"


class EventQueue:
    """Binary min-heap over certificates keyed by ``(time, handle)``.

    Every certificate knows its heap slot so ``cancel`` is O(log n) and exact.
    Handles come from ``counter``; engines share one counter across all their
    queues so that handle order is global.
    """

    def __init__(self, counter: Optional[Iterator[int]] = None):
        self._heap: list[Certificate] = []
        self._counter = counter if counter is not None else itertools.count()

    def __len__(self):
        return len(self._heap)

    def __iter__(self):
        return iter(self._heap)

    def schedule(self, cert: Certificate) -> int:
        if cert.pos >= 0:
            raise CertificateError(f"{cert!r} already scheduled")
        cert.handle = next(self._counter)
        heap = self._heap
        cert.pos = len(heap)
        heap.append(cert)
        self._up(cert.pos)
        return cert.handle

    def cancel(self, cert: Certificate) -> None:
        heap = self._heap
        i = cert.pos
        if i < 0 or i >= len(heap) or heap[i] is not cert:
            raise CertificateError(f"cancel of dead certificate {cert!r}")
        last = heap.pop()
        cert.pos = -1
        if last is not cert:
            heap[i] = last
            last.pos = i
            self._down(i)
            self._up(last.pos)

    def peek(self) -> Optional[Certificate]:
        return self._heap[0] if self._heap else None

    def pop(self) -> Certificate:
        cert = self._heap[0]
        self.cancel(cert)
        return cert

    def pop_due(self, now_bound) -> Optional[Certificate]:
        """Pop the minimum certificate if it fails no later than ``now_bound``."""
        top = self.peek()
        if top is None or top.time > now_bound:
            return None
        return self.pop()

    def _less(self, a: Certificate, b: Certificate) -> bool:
        return a.time < b.time or (a.time == b.time and a.handle < b.handle)

    def _up(self, i: int) -> None:
        heap = self._heap
        item = heap[i]
        while i > 0:
            parent = (i - 1) >> 1
            p = heap[parent]
            if self._less(item, p):
                heap[i] = p
                p.pos = i
                i = parent
            else:
                break
        heap[i] = item
        item.pos = i

    def _down(self, i: int) -> None:
        heap = self._heap
        n = len(heap)
        item = heap[i]
        while True:
            c = 2 * i + 1
            if c >= n:
                break
            if c + 1 < n and self._less(heap[c + 1], heap[c]):
                c += 1
            child = heap[c]
            if self._less(child, item):
                heap[i] = child
                child.pos = i
                i = c
            else:
                break
        heap[i] = item
        item.pos = i
