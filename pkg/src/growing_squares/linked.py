"""Two interlinked three-layer range trees over square corners.

Layers are ordered on x, then y, then the gamma key (``x - y``).  The third
layer doubles as a kinetic tournament.  Lower-left corners (the ``T^L``
role, min tournament) and upper-right corners (the ``T^R`` role, max
tournament) are kept on the same tree shape, so every tournament node plays
both roles: ``links_l`` holds its links as a lower-left node ``w``,
``links_r`` as an upper-right node ``z``.

A link ``(w, z)`` exists iff ``w`` is canonical for the query point of ``z``
and vice versa; its certificate asserts that the rightmost upper-right corner
stored at ``z`` stays left of (``PLUS``) or below (``MINUS``) the leftmost
lower-left corner stored at ``w``.
"""
from __future__ import annotations

import enum
import itertools
from typing import Iterable

from .arith import EXACT, INF, Arithmetic
from .geometry import WeightedPoint
from .kinetic import Certificate, CertKind, EventQueue, failure_time
from .tournament import Rec, TNode, Tournament
from .wbtree import DEFAULT_ALPHA, WBTree, is_canonical_ge, is_canonical_le


class Variant(enum.Enum):
    """PLUS detects pairs ``p in D+(q)`` on x; MINUS pairs ``p in D-(q)`` on y."""

    PLUS = "plus"
    MINUS = "minus"


class OverlapError(ValueError):
    def __init__(self, new_id, witness):
        super().__init__(f"square {new_id} overlaps existing square {witness}")
        self.new_id = new_id
        self.witness = witness


def _xkey(rec):
    return rec.kx


def _ykey(rec):
    return rec.ky


def _local_sig(node):
    parent = node.parent
    if parent is None:
        return (node.lo, node.hi)
    return (node.lo, node.hi, parent.lo, parent.hi)


class LinkedRangeStructure:
    """Detects the first intersection among pairs related by one dominance variant.

    ``sx``/``sy`` reflect coordinates before insertion, so four quadrant
    frames can be served by the same code.
    """

    def __init__(
        self,
        points: Iterable[WeightedPoint] = (),
        variant: Variant = Variant.PLUS,
        sx: int = 1,
        sy: int = 1,
        now=0,
        arith: Arithmetic = EXACT,
        alpha: float = DEFAULT_ALPHA,
        counter=None,
    ):
        self.variant = variant
        self.sx, self.sy = sx, sy
        self.arith = arith
        self.eps = 0.0 if arith.exact else arith.eps
        self.alpha = alpha
        self.now = now
        counter = counter if counter is not None else itertools.count()
        self.tq = EventQueue(counter)
        self.lq = EventQueue(counter)
        self.recs: dict[int, Rec] = {}
        self.tournament_events = 0
        self.link_refreshes = 0
        self.rebuilt_mass = 0
        self._reports: dict = {}
        self._dirty: dict = {}
        recs = [self.to_rec(p) for p in points]
        for r in recs:
            if r.id in self.recs:
                raise ValueError(f"duplicate point id {r.id}")
            self.recs[r.id] = r
        self.primary = WBTree(
            recs,
            key=_xkey,
            alpha=alpha,
            make_assoc=self._make_secondary,
            assoc_insert=self._assoc_insert,
            assoc_delete=self._assoc_delete,
            drop_assoc=self._drop_secondary,
        )
        if self.primary.root is not None:
            self._mark_secondary(self.primary.root.assoc, self.primary.root)
            for u in self.primary.nodes():
                if u.parent is not None:
                    self._mark_secondary(u.assoc, u)
            self._refresh_dirty()

    # -- point records -------------------------------------------------------

    def to_rec(self, p: WeightedPoint) -> Rec:
        x, y = self.sx * p.x, self.sy * p.y
        axis = x if self.variant is Variant.PLUS else y
        return Rec(p.id, x, y, axis, p.w / 2)

    def __len__(self):
        return len(self.recs)

    # -- associated-structure callbacks ---------------------------------------

    def _make_secondary(self, u):
        items = sorted(u.items(), key=_ykey)
        tree = WBTree(
            items,
            key=_ykey,
            alpha=self.alpha,
            make_assoc=self._make_tournament,
            assoc_insert=self._assoc_insert,
            assoc_delete=self._assoc_delete,
            drop_assoc=self._drop_tournament,
            presorted=True,
        )
        tree.owner = u
        tree.snap = None
        return tree

    def _make_tournament(self, v):
        items = sorted(v.items(), key=lambda r: r.kg)
        return Tournament(self, items, owner=v, presorted=True)

    def _assoc_insert(self, tree, rec):
        self._reports[id(tree)] = tree.insert(rec)

    def _assoc_delete(self, tree, rec):
        self._reports[id(tree)] = tree.delete(tree.key(rec))

    def _drop_secondary(self, tree):
        for v in tree.nodes():
            if v.assoc is not None:
                self._drop_tournament(v.assoc)
                v.assoc = None

    def _drop_tournament(self, tour):
        for n in tour.nodes():
            self.release_node(n)

    def release_node(self, node: TNode) -> None:
        """Cancel every certificate held by a tournament node leaving the structure."""
        for cert in (node.lcert, node.hcert):
            if cert is not None and cert.pos >= 0:
                self.tq.cancel(cert)
        node.lcert = node.hcert = None
        self._unlink(node)
        self._dirty.pop(node, None)

    # -- updates -------------------------------------------------------------

    def insert(self, p: WeightedPoint, now=None) -> None:
        """Insert a square (the caller guarantees it is disjoint from the others)."""
        if now is not None:
            self.now = now
        if p.id in self.recs:
            raise KeyError(f"duplicate point id {p.id}")
        rec = self.to_rec(p)
        self.recs[p.id] = rec
        self._reports.clear()
        report = self.primary.insert(rec)
        self._after_update(report)

    def delete(self, pid: int, now=None) -> None:
        if now is not None:
            self.now = now
        rec = self.recs.pop(pid)
        self._reports.clear()
        report = self.primary.delete(rec.kx)
        self._after_update(report)

    def _after_update(self, report) -> None:
        self.rebuilt_mass += report.rebuilt_mass
        removed = {id(n) for n in report.removed}
        for u in _candidates(report, removed):
            tree = u.assoc
            if u in report.fresh or tree.snap != _local_sig(u):
                self._mark_secondary(tree, u)
            else:
                sub = self._reports.get(id(tree))
                if sub is not None:
                    self._process_secondary(tree, sub)
        self._reports.clear()
        self._refresh_dirty()

    def _process_secondary(self, tree, report) -> None:
        removed = {id(n) for n in report.removed}
        for v in _candidates(report, removed):
            tour = v.assoc
            if v in report.fresh or tour.snap != _local_sig(v):
                self._mark_tournament(tour, v)
            else:
                sub = self._reports.get(id(tour))
                if sub is not None:
                    self._process_tournament(tour, sub)

    def _process_tournament(self, tour, report) -> None:
        removed = {id(n) for n in report.removed}
        moved = {id(n) for n in report.path} | {id(n) for n in report.rotated}
        dirty = self._dirty
        for n in _candidates(report, removed):
            sig = _local_sig(n)
            if id(n) in moved or n.snap != sig:
                n.snap = sig
                dirty[n] = True

    def _mark_secondary(self, tree, u) -> None:
        tree.snap = _local_sig(u)
        for v in tree.nodes():
            self._mark_tournament(v.assoc, v)

    def _mark_tournament(self, tour, v) -> None:
        tour.snap = _local_sig(v)
        dirty = self._dirty
        for n in tour.nodes():
            n.snap = _local_sig(n)
            dirty[n] = True

    # -- links ---------------------------------------------------------------

    def _unlink(self, node: TNode) -> None:
        lq = self.lq
        for z, cert in node.links_l.items():
            if cert.pos >= 0:
                lq.cancel(cert)
            del z.links_r[node]
        node.links_l.clear()
        for w, cert in node.links_r.items():
            if cert.pos >= 0:
                lq.cancel(cert)
            del w.links_l[node]
        node.links_r.clear()

    def _refresh_dirty(self) -> None:
        dirty = list(self._dirty)
        self._dirty.clear()
        for d in dirty:
            self._unlink(d)
        cache = ({}, {}, {}, {})
        for d in dirty:
            self._link_node(d, cache)

    def refresh_links(self, node: TNode) -> None:
        """Recompute every link of ``node`` from scratch."""
        self._unlink(node)
        self._link_node(node, ({}, {}, {}, {}))

    def _link_node(self, d: TNode, cache) -> None:
        """Add all links of ``d`` in both roles.

        Candidates come from the opposite role's canonical query; the reverse
        membership test is applied layer by layer so that whole primary and
        secondary subtrees failing it are skipped.
        """
        self.link_refreshes += 1
        l1, l2, r1, r2 = cache
        v = d.tree.owner
        u = v.tree.owner
        plus = self.variant is Variant.PLUS
        # d as lower-left node w: partners z in QR(low_point(d))
        vs = l2.get((u, v))
        if vs is None:
            us = l1.get(u)
            if us is None:
                us = l1[u] = [u2 for u2 in self.primary.canonical_le(u.lo) if is_canonical_ge(u, u2.hi)]
            vs = l2[(u, v)] = [v2 for u2 in us for v2 in u2.assoc.canonical_le(v.lo)
                               if is_canonical_ge(v, v2.hi)]
        links = d.links_l
        for v2 in vs:
            tour = v2.assoc
            if plus:
                for z in tour.canonical_le(d.lo, True):
                    if z not in links and is_canonical_ge(d, z.hi, True):
                        self._add_link(d, z)
            else:
                for z in tour.canonical_ge(d.hi, True):
                    if z not in links and is_canonical_le(d, z.lo, True):
                        self._add_link(d, z)
        # d as upper-right node z: partners w in QL(high_point(d))
        vs = r2.get((u, v))
        if vs is None:
            us = r1.get(u)
            if us is None:
                us = r1[u] = [u2 for u2 in self.primary.canonical_ge(u.hi) if is_canonical_le(u, u2.lo)]
            vs = r2[(u, v)] = [v2 for u2 in us for v2 in u2.assoc.canonical_ge(v.hi)
                               if is_canonical_le(v, v2.lo)]
        links = d.links_r
        for v2 in vs:
            tour = v2.assoc
            if plus:
                for w in tour.canonical_ge(d.hi, True):
                    if w not in links and is_canonical_le(d, w.lo, True):
                        self._add_link(w, d)
            else:
                for w in tour.canonical_le(d.lo, True):
                    if w not in links and is_canonical_ge(d, w.hi, True):
                        self._add_link(w, d)

    def _add_link(self, w: TNode, z: TNode) -> None:
        cert = self._link_cert(w, z)
        w.links_l[z] = cert
        z.links_r[w] = cert

    def _link_cert(self, w: TNode, z: TNode) -> Certificate:
        a, b = z.hw, w.lw
        cert = Certificate(CertKind.Linking, a, b,
                           failure_time((a.ha, a.hb), (b.la, b.lb), self.now, self.eps), w, z)
        self.lq.schedule(cert)
        return cert

    def _relink_cert(self, w: TNode, z: TNode) -> None:
        old = w.links_l[z]
        if old.pos >= 0:
            self.lq.cancel(old)
        cert = self._link_cert(w, z)
        w.links_l[z] = cert
        z.links_r[w] = cert

    # -- query points and canonical tests -------------------------------------

    @staticmethod
    def chain(node: TNode):
        v = node.tree.owner
        return v.tree.owner, v, node

    def low_point(self, w: TNode):
        """The query point of ``w`` in its lower-left role."""
        v = w.tree.owner
        u = v.tree.owner
        return (u.lo, v.lo, w.lo if self.variant is Variant.PLUS else w.hi)

    def high_point(self, z: TNode):
        """The query point of ``z`` in its upper-right role."""
        v = z.tree.owner
        u = v.tree.owner
        return (u.hi, v.hi, z.hi if self.variant is Variant.PLUS else z.lo)

    def in_QL(self, w: TNode, q) -> bool:
        """O(1) test: is ``w`` among the canonical nodes of ``QL(q)``?"""
        v = w.tree.owner
        u = v.tree.owner
        if not (is_canonical_ge(u, q[0]) and is_canonical_ge(v, q[1])):
            return False
        if self.variant is Variant.PLUS:
            return is_canonical_ge(w, q[2], strict=True)
        return is_canonical_le(w, q[2], strict=True)

    def in_QR(self, z: TNode, p) -> bool:
        v = z.tree.owner
        u = v.tree.owner
        if not (is_canonical_le(u, p[0]) and is_canonical_le(v, p[1])):
            return False
        if self.variant is Variant.PLUS:
            return is_canonical_le(z, p[2], strict=True)
        return is_canonical_ge(z, p[2], strict=True)

    def QL(self, q) -> list:
        """Tournament nodes jointly covering the points above-right of ``q`` on the detecting side of gamma."""
        out = []
        plus = self.variant is Variant.PLUS
        if self.primary.root is None:
            return out
        for u in self.primary.canonical_ge(q[0]):
            for v in u.assoc.canonical_ge(q[1]):
                tour = v.assoc
                out.extend(tour.canonical_ge(q[2], True) if plus else tour.canonical_le(q[2], True))
        return out

    def QR(self, p) -> list:
        out = []
        plus = self.variant is Variant.PLUS
        if self.primary.root is None:
            return out
        for u in self.primary.canonical_le(p[0]):
            for v in u.assoc.canonical_le(p[1]):
                tour = v.assoc
                out.extend(tour.canonical_le(p[2], True) if plus else tour.canonical_ge(p[2], True))
        return out

    # -- kinetic events --------------------------------------------------------

    def next_tournament_time(self):
        top = self.tq.peek()
        return INF if top is None else top.time

    def next_link_time(self):
        top = self.lq.peek()
        return INF if top is None else top.time

    def process_tournament_event(self) -> list:
        """Pop and repair the earliest tournament certificate; ``now`` moves to its time."""
        cert = self.tq.pop()
        self.now = cert.time
        self.tournament_events += 1
        changed = cert.node.tree.handle_failure(cert)
        for node, lo_changed, hi_changed in changed:
            if lo_changed:
                for z in list(node.links_l):
                    self._relink_cert(node, z)
            if hi_changed:
                for w in list(node.links_r):
                    self._relink_cert(w, node)
        return [node for node, _, _ in changed]

    def link_certs_at(self, t) -> list:
        """Every linking certificate whose failure time equals ``t``."""
        eq = self.arith.eq
        heap = self.lq._heap
        out, stack = [], [0] if heap else []
        while stack:
            i = stack.pop()
            cert = heap[i]
            if cert.time <= t or eq(cert.time, t):
                if eq(cert.time, t):
                    out.append(cert)
                for c in (2 * i + 1, 2 * i + 2):
                    if c < len(heap):
                        stack.append(c)
        return out

    def failing_pairs(self, cert: Certificate, t) -> set:
        """All point pairs covered by ``cert`` whose squares touch at ``t``."""
        w, z = cert.node, cert.partner
        eq = self.arith.eq
        lo_val = w.lw.la + w.lw.lb * t
        hi_val = z.hw.ha + z.hw.hb * t
        if not eq(lo_val, hi_val) and hi_val < lo_val:
            return set()
        ps = _leaves_where(w, lambda n: eq(n.lw.la + n.lw.lb * t, lo_val))
        qs = _leaves_where(z, lambda n: eq(n.hw.ha + n.hw.hb * t, hi_val))
        return {(min(p, q), max(p, q)) for p in ps for q in qs}

    def first_failure(self, horizon=INF):
        """Process tournament events up to the first linking failure.

        Returns ``(t, p, q)`` with the lexicographically smallest pair among
        those touching at ``t``, or ``None`` when nothing fails by ``horizon``.
        """
        while True:
            tt, tl = self.next_tournament_time(), self.next_link_time()
            if min(tt, tl) > horizon or min(tt, tl) == INF:
                return None
            if tt <= tl:
                self.process_tournament_event()
                continue
            self.now = tl
            pairs = set()
            for cert in self.link_certs_at(tl):
                pairs |= self.failing_pairs(cert, tl)
            p, q = min(pairs)
            return tl, p, q

    # -- direct queries --------------------------------------------------------

    def touching(self, x, y, half_w, t, qid) -> set:
        """Ids of stored squares meeting the query square (centre, half-width) at ``t``."""
        q = self.to_rec(WeightedPoint(qid, x, y, 1))
        h = half_w * t
        axis = q.la
        qk = (q.kx, q.ky, q.kg)
        r_q, l_q = axis + h, axis - h
        eq = self.arith.eq
        found = set()
        for w in self.QL(qk):
            if w.lw.la + w.lw.lb * t <= r_q or eq(w.lw.la + w.lw.lb * t, r_q):
                found.update(_leaves_where(
                    w, lambda n: n.lw.la + n.lw.lb * t <= r_q or eq(n.lw.la + n.lw.lb * t, r_q)))
        for z in self.QR(qk):
            if z.hw.ha + z.hw.hb * t >= l_q or eq(z.hw.ha + z.hw.hb * t, l_q):
                found.update(_leaves_where(
                    z, lambda n: n.hw.ha + n.hw.hb * t >= l_q or eq(n.hw.ha + n.hw.hb * t, l_q)))
        found.discard(qid)
        return found

    # -- inspection ------------------------------------------------------------

    def tournament_nodes(self):
        for u in self.primary.nodes():
            for v in u.assoc.nodes():
                yield from v.assoc.nodes()

    def link_set(self) -> set:
        return {(w, z) for w in self.tournament_nodes() for z in w.links_l}

    def certificate_count(self) -> int:
        return len(self.tq) + len(self.lq)

    def max_links_per_node(self) -> int:
        return max((len(n.links_l) + len(n.links_r) for n in self.tournament_nodes()), default=0)


def _candidates(report, removed):
    seen = set()
    out = []
    for n in [*report.path, *report.rotated]:
        for m in (n, n.left, n.right):
            if m is not None and id(m) not in seen and id(m) not in removed:
                seen.add(id(m))
                out.append(m)
    for m in report.fresh:
        if id(m) not in seen and id(m) not in removed:
            seen.add(id(m))
            out.append(m)
    return out


def _leaves_where(node, pred) -> list:
    """Ids of leaves reached by descending only through nodes satisfying ``pred``."""
    out, stack = [], [node]
    while stack:
        n = stack.pop()
        if not pred(n):
            continue
        if n.left is None:
            out.append(n.item.id)
        else:
            stack.append(n.left)
            stack.append(n.right)
    return out
