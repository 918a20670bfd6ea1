"""Kinetic tournaments over gamma-ordered corner motions.

One tree carries two tournaments at once: ``lw`` is the lower-left corner
with minimum coordinate on the tracked axis, ``hw`` the upper-right corner
with maximum coordinate.  Both are guarded by one certificate per internal
node against the losing child's winner.
"""
from __future__ import annotations

from .kinetic import Certificate, CertKind, failure_time
from .wbtree import WBNode, WBTree


class Rec:
    """A point as stored in one structure instance (after the quadrant transform).

    ``kx``/``ky``/``kg`` are the id-perturbed keys, ``(la, lb)`` the lower-left
    corner on the tracked axis and ``(ha, hb)`` the upper-right corner.
    """

    __slots__ = ("id", "kx", "ky", "kg", "la", "lb", "ha", "hb")

    def __init__(self, pid, x, y, axis_value, half_w):
        self.id = pid
        self.kx = (x, pid)
        self.ky = (y, pid)
        self.kg = (x - y, pid)
        self.la, self.lb = axis_value, -half_w
        self.ha, self.hb = axis_value, half_w

    def __repr__(self):
        return f"Rec({self.id})"


class TNode(WBNode):
    __slots__ = ("lw", "hw", "lcert", "hcert", "links_l", "links_r", "snap")

    def __init__(self, tree, item=None, key=None):
        super().__init__(tree, item, key)
        self.lw = self.hw = item
        self.lcert = self.hcert = None
        self.links_l = {}
        self.links_r = {}
        self.snap = None


def lo_better(a: Rec, b: Rec, t, eps) -> bool:
    """Does ``a`` beat ``b`` in the min tournament just after time ``t``?"""
    va, vb = a.la + a.lb * t, b.la + b.lb * t
    if va != vb and (not eps or abs(va - vb) > eps * max(1.0, abs(va), abs(vb))):
        return va < vb
    if a.lb != b.lb:
        return a.lb < b.lb
    return a.id < b.id


def hi_better(a: Rec, b: Rec, t, eps) -> bool:
    """Does ``a`` beat ``b`` in the max tournament just after time ``t``?"""
    va, vb = a.ha + a.hb * t, b.ha + b.hb * t
    if va != vb and (not eps or abs(va - vb) > eps * max(1.0, abs(va), abs(vb))):
        return va > vb
    if a.hb != b.hb:
        return a.hb > b.hb
    return a.id < b.id


class Tournament(WBTree):
    """BB[alpha] tree on gamma keys whose internal nodes hold kinetic winners.

    ``ctx`` supplies ``now``, ``eps`` and the tournament event queue ``tq``.
    """

    node_cls = TNode

    def __init__(self, ctx, items, owner=None, presorted=False):
        self.ctx = ctx
        self.owner = owner
        self.snap = None
        super().__init__(items, key=_gkey, alpha=ctx.alpha, presorted=presorted)

    def pull(self, node: TNode) -> None:
        left, right = node.left, node.right
        node.size = left.size + right.size
        node.lo = left.lo
        node.hi = right.hi
        ctx = self.ctx
        now, eps = ctx.now, ctx.eps
        a, b = left.lw, right.lw
        if not lo_better(a, b, now, eps):
            a, b = b, a
        node.lw = a
        cert = node.lcert
        if cert is None or cert.pos < 0 or cert.lhs is not a or cert.rhs is not b:
            if cert is not None and cert.pos >= 0:
                ctx.tq.cancel(cert)
            cert = Certificate(CertKind.TournamentMin, a, b,
                               failure_time((a.la, a.lb), (b.la, b.lb), now, eps), node)
            ctx.tq.schedule(cert)
            node.lcert = cert
        a, b = left.hw, right.hw
        if not hi_better(a, b, now, eps):
            a, b = b, a
        node.hw = a
        cert = node.hcert
        # stored as lhs=loser, rhs=winner: the loser must stay below
        if cert is None or cert.pos < 0 or cert.lhs is not b or cert.rhs is not a:
            if cert is not None and cert.pos >= 0:
                ctx.tq.cancel(cert)
            cert = Certificate(CertKind.TournamentMax, b, a,
                               failure_time((b.ha, b.hb), (a.ha, a.hb), now, eps), node)
            ctx.tq.schedule(cert)
            node.hcert = cert

    def on_remove(self, node: TNode) -> None:
        self.ctx.release_node(node)

    def handle_failure(self, cert: Certificate) -> list:
        """Repair winners after ``cert`` failed at ``ctx.now``.

        Returns ``(node, lo_changed, hi_changed)`` for every node whose winner
        changed, bottom-up.
        """
        node = cert.node
        changed = []
        first = True
        while node is not None:
            old_l, old_h = node.lw, node.hw
            self.pull(node)
            lo_changed, hi_changed = node.lw is not old_l, node.hw is not old_h
            if lo_changed or hi_changed:
                changed.append((node, lo_changed, hi_changed))
            elif not first:
                break
            first = False
            node = node.parent
        return changed

    def winner_at_root(self):
        if self.root is None:
            raise LookupError("empty tournament")
        return self.root.lw, self.root.hw


def _gkey(rec: Rec):
    return rec.kg
