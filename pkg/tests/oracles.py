"""Independent reference computations used across the test suite."""
from __future__ import annotations

from growing_squares.linked import Variant


def _span(node, key):
    keys = [key(leaf.item) for leaf in node.leaves()]
    return min(keys), max(keys)


def _decompose(root, inside, meets):
    """Generic top-down range decomposition: maximal nodes inside the range."""
    out = []
    stack = [root] if root is not None else []
    while stack:
        n = stack.pop()
        if inside(n):
            out.append(n)
        elif n.left is not None and meets(n):
            stack += [n.left, n.right]
    return out


class LinkOracle:
    """Recomputes the link relation of a LinkedRangeStructure from its leaves."""

    def __init__(self, s):
        self.s = s
        self.plus = s.variant is Variant.PLUS
        self.span = {}
        for u in s.primary.nodes():
            self.span[u] = _span(u, lambda r: r.kx)
            for v in u.assoc.nodes():
                self.span[v] = _span(v, lambda r: r.ky)
                for w in v.assoc.nodes():
                    self.span[w] = _span(w, lambda r: r.kg)

    def box(self, w):
        v = w.tree.owner
        u = v.tree.owner
        return self.span[u], self.span[v], self.span[w]

    def region(self, q, upper):
        """Tournament nodes covering points beyond ``q`` (upper) or below it.

        Upper means x >= q0, y >= q1 and gamma strictly past q2 on the
        detecting side; lower is the mirror image.
        """
        sp = self.span
        ge = lambda a: (lambda n: sp[n][0] >= a, lambda n: sp[n][1] >= a)
        le = lambda a: (lambda n: sp[n][1] <= a, lambda n: sp[n][0] <= a)
        gt = lambda a: (lambda n: sp[n][0] > a, lambda n: sp[n][1] > a)
        lt = lambda a: (lambda n: sp[n][1] < a, lambda n: sp[n][0] < a)
        if upper:
            f1, f2, f3 = ge(q[0]), ge(q[1]), gt(q[2]) if self.plus else lt(q[2])
        else:
            f1, f2, f3 = le(q[0]), le(q[1]), lt(q[2]) if self.plus else gt(q[2])
        out = []
        for u in _decompose(self.s.primary.root, *f1):
            for v in _decompose(u.assoc.root, *f2):
                out.extend(_decompose(v.assoc.root, *f3))
        return out

    def low_point(self, w):
        (x, _), (y, _), (g0, g1) = self.box(w)
        return x, y, g0 if self.plus else g1

    def high_point(self, z):
        (_, x), (_, y), (g0, g1) = self.box(z)
        return x, y, g1 if self.plus else g0

    def links(self) -> set:
        nodes = list(self.s.tournament_nodes())
        right_of = {w: set(self.region(self.low_point(w), upper=False)) for w in nodes}
        out = set()
        for z in nodes:
            for w in self.region(self.high_point(z), upper=True):
                if z in right_of[w]:
                    out.add((w, z))
        return out


def check_winners(s) -> None:
    t = s.now
    for n in s.tournament_nodes():
        recs = [leaf.item for leaf in n.leaves()]
        lo = min(r.la + r.lb * t for r in recs)
        hi = max(r.ha + r.hb * t for r in recs)
        assert n.lw.la + n.lw.lb * t == lo, "min winner"
        assert n.hw.ha + n.hw.hb * t == hi, "max winner"


def check_balance(s) -> None:
    trees = [s.primary]
    for u in s.primary.nodes():
        trees.append(u.assoc)
        trees.extend(v.assoc for v in u.assoc.nodes())
    for tree in trees:
        for n in tree.nodes():
            assert tree.is_balanced(n), "weight balance"
            if n.left is not None:
                assert n.size == n.left.size + n.right.size
                assert n.left.parent is n and n.right.parent is n


def brute_first_failure(s):
    """Minimum contact time over pairs related by the structure's dominance variant."""
    best = None
    recs = list(s.recs.values())
    for p in recs:
        for q in recs:
            if p is q:
                continue
            side = p.kg > q.kg if s.variant is Variant.PLUS else p.kg < q.kg
            if p.kx > q.kx and p.ky > q.ky and side:
                t = (p.la - q.ha) / (q.hb - p.lb)
                cand = (t, min(p.id, q.id), max(p.id, q.id))
                if best is None or cand < best:
                    best = cand
    return best
