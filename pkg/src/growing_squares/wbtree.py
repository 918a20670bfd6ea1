"""Leaf-oriented BB[alpha] trees with associated-structure slots.

Items live in the leaves; every node summarises its canonical subset by leaf
count and by min/max key.  Rebalancing uses single and double rotations.
After a rotation around ``(mu, nu)`` the node that moves up inherits the old
associated structure of ``mu`` and ``mu`` gets a fresh one built by the
owner's ``make_assoc`` callback, so the tree itself never needs to know what
the associated structures are.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Optional

DEFAULT_ALPHA = 0.25


class WBNode:
    __slots__ = ("left", "right", "parent", "size", "lo", "hi", "item", "assoc", "tree", "__weakref__")

    def __init__(self, tree: "WBTree", item=None, key=None):
        self.tree = tree
        self.left = self.right = self.parent = None
        self.item = item
        self.assoc = None
        self.size = 1
        self.lo = self.hi = key

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def leaves(self) -> Iterator["WBNode"]:
        stack = [self]
        while stack:
            n = stack.pop()
            if n.left is None:
                yield n
            else:
                stack.append(n.right)
                stack.append(n.left)

    def items(self) -> list:
        return [leaf.item for leaf in self.leaves()]

    def nodes(self) -> Iterator["WBNode"]:
        stack = [self]
        while stack:
            n = stack.pop()
            yield n
            if n.left is not None:
                stack.append(n.right)
                stack.append(n.left)

    def __repr__(self):
        return f"<{type(self).__name__} size={self.size} [{self.lo}..{self.hi}]>"


@dataclass
class RebuildReport:
    """What a single insert or delete did to the tree.

    ``path`` holds the final ancestors of the update position (bottom-up,
    starting with the new leaf on insert or with the promoted sibling on
    delete), ``rotated`` every node moved by a
    rotation, ``fresh`` the nodes whose associated structure was built from
    scratch, ``removed`` the nodes that left the tree.
    """

    path: list = field(default_factory=list)
    rotated: list = field(default_factory=list)
    fresh: set = field(default_factory=set)
    removed: list = field(default_factory=list)
    rebuilt_mass: int = 0

    @property
    def affected(self) -> list:
        seen, out = set(), []
        for n in [*self.path, *self.rotated, *self.fresh]:
            if id(n) not in seen:
                seen.add(id(n))
                out.append(n)
        return out


class WBTree:
    """BB[alpha] tree keyed by ``key(item)``; keys must be unique and totally ordered.

    ``make_assoc(node)`` builds the associated structure for ``node``'s current
    leaf set, ``assoc_insert`` / ``assoc_delete`` apply a single-item change
    to an existing one and ``drop_assoc`` disposes of one.  All four are
    optional; without them the tree carries no associated structures.
    """

    node_cls = WBNode

    def __init__(
        self,
        items=(),
        key: Callable[[Any], Any] = lambda item: item,
        alpha: float = DEFAULT_ALPHA,
        make_assoc: Optional[Callable[[WBNode], Any]] = None,
        assoc_insert: Optional[Callable[[Any, Any], None]] = None,
        assoc_delete: Optional[Callable[[Any, Any], None]] = None,
        drop_assoc: Optional[Callable[[Any], None]] = None,
        presorted: bool = False,
    ):
        if not 0 < alpha <= 1 - 2 ** -0.5:
            raise ValueError(f"alpha must lie in (0, 1 - 1/sqrt(2)], got {alpha}")
        self.key = key
        self.alpha = alpha
        # single rotation suffices while the heavy child's balance is below this
        self._single_limit = (1 - 2 * alpha) / (1 - alpha)
        self.make_assoc = make_assoc
        self.assoc_insert = assoc_insert
        self.assoc_delete = assoc_delete
        self.drop_assoc = drop_assoc
        self.root: Optional[WBNode] = None
        self._leaf_of: dict = {}
        self.rotations = 0
        self.fallback_rebuilds = 0
        items = list(items)
        if items:
            if not presorted:
                items.sort(key=key)
            self.root = self._build(items, 0, len(items), None)

    # -- summaries -----------------------------------------------------------

    def __len__(self):
        return 0 if self.root is None else self.root.size

    def __contains__(self, key):
        return key in self._leaf_of

    def leaf(self, key) -> WBNode:
        return self._leaf_of[key]

    def items(self) -> list:
        return [] if self.root is None else self.root.items()

    def nodes(self) -> Iterator[WBNode]:
        return iter(()) if self.root is None else self.root.nodes()

    def height(self) -> int:
        def h(n):
            return 0 if n.left is None else 1 + max(h(n.left), h(n.right))
        return -1 if self.root is None else h(self.root)

    def pull(self, node: WBNode) -> None:
        """Recompute ``node``'s summary from its children."""
        left, right = node.left, node.right
        node.size = left.size + right.size
        node.lo = left.lo
        node.hi = right.hi

    def is_balanced(self, node: WBNode) -> bool:
        if node.left is None:
            return True
        a = self.alpha * node.size
        return node.left.size >= a and node.right.size >= a

    # -- construction --------------------------------------------------------

    def _new_leaf(self, item) -> WBNode:
        k = self.key(item)
        leaf = self.node_cls(self, item, k)
        self._leaf_of[k] = leaf
        return leaf

    def _build(self, items, lo, hi, parent) -> WBNode:
        if hi - lo == 1:
            node = self._new_leaf(items[lo])
        else:
            mid = (lo + hi) // 2
            node = self.node_cls(self)
            node.left = self._build(items, lo, mid, node)
            node.right = self._build(items, mid, hi, node)
            self.pull(node)
        node.parent = parent
        if self.make_assoc is not None:
            node.assoc = self.make_assoc(node)
        return node

    def _fresh_assoc(self, node: WBNode, report: RebuildReport) -> None:
        if self.make_assoc is None:
            return
        if node.assoc is not None and self.drop_assoc is not None:
            self.drop_assoc(node.assoc)
        node.assoc = self.make_assoc(node)
        report.fresh.add(node)
        report.rebuilt_mass += node.size

    # -- updates -------------------------------------------------------------

    def insert(self, item) -> RebuildReport:
        k = self.key(item)
        if k in self._leaf_of:
            raise KeyError(f"duplicate key {k!r}")
        report = RebuildReport()
        leaf = self._new_leaf(item)
        if self.root is None:
            self.root = leaf
            self._fresh_assoc(leaf, report)
            report.path.append(leaf)
            return report
        old = self.root
        while old.left is not None:
            old = old.left if k < old.right.lo else old.right
        mid = self.node_cls(self)
        parent = old.parent
        if k < old.lo:
            mid.left, mid.right = leaf, old
        else:
            mid.left, mid.right = old, leaf
        self._replace(old, mid, parent)
        leaf.parent = old.parent = mid
        self.pull(mid)
        self._fresh_assoc(leaf, report)
        self._fresh_assoc(mid, report)
        self._retrace(parent, report)
        self._fix_path(leaf, report, item, insert=True)
        return report

    def delete(self, key) -> RebuildReport:
        leaf = self._leaf_of.pop(key)
        report = RebuildReport()
        report.removed.append(leaf)
        parent = leaf.parent
        self._drop(leaf)
        if parent is None:
            self.root = None
            return report
        sibling = parent.right if parent.left is leaf else parent.left
        grand = parent.parent
        self._replace(parent, sibling, grand)
        if parent.left is leaf:
            parent.left = None
        else:
            parent.right = None
        report.removed.append(parent)
        self._drop(parent)
        self._retrace(grand, report)
        self._fix_path(sibling, report, leaf.item, insert=False)
        return report

    def _drop(self, node: WBNode) -> None:
        if node.assoc is not None and self.drop_assoc is not None:
            self.drop_assoc(node.assoc)
        node.assoc = None
        node.parent = node.left = node.right = None
        self.on_remove(node)

    def on_remove(self, node: WBNode) -> None:
        """Hook for subclasses whose nodes own external resources."""

    def _replace(self, old: WBNode, new: WBNode, parent: Optional[WBNode]) -> None:
        new.parent = parent
        if parent is None:
            self.root = new
        elif parent.left is old:
            parent.left = new
        else:
            parent.right = new

    def _retrace(self, node: Optional[WBNode], report: RebuildReport) -> None:
        while node is not None:
            self.pull(node)
            if not self.is_balanced(node):
                node = self._rebalance(node, report)
            node = node.parent

    def _fix_path(self, start: WBNode, report: RebuildReport, item, insert: bool) -> None:
        node = start
        path = []
        while node is not None:
            path.append(node)
            node = node.parent
        report.path = path
        if self.make_assoc is None:
            return
        fn = self.assoc_insert if insert else self.assoc_delete
        for node in path[1:] if not insert else path:
            if node not in report.fresh:
                fn(node.assoc, item)

    # -- rotations -----------------------------------------------------------

    def _rebalance(self, mu: WBNode, report: RebuildReport) -> WBNode:
        """Restore balance at ``mu``; returns the node now at ``mu``'s position."""
        if mu.left.size < self.alpha * mu.size:
            nu = mu.right
            if nu.left.size <= self._single_limit * nu.size:
                top = self._rotate_left(mu, report)
            else:
                self._rotate_right(nu, report)
                top = self._rotate_left(mu, report)
        else:
            nu = mu.left
            if nu.right.size <= self._single_limit * nu.size:
                top = self._rotate_right(mu, report)
            else:
                self._rotate_left(nu, report)
                top = self._rotate_right(mu, report)
        if not all(self.is_balanced(n) for n in (top, top.left, top.right)):
            # tiny subtrees can defeat the rotation rule; rebuild instead
            top = self._rebuild_subtree(top, report)
        return top

    def _rotate_left(self, mu: WBNode, report: RebuildReport) -> WBNode:
        nu = mu.right
        b = nu.left
        self._replace(mu, nu, mu.parent)
        mu.right = b
        b.parent = mu
        nu.left = mu
        mu.parent = nu
        self._after_rotation(mu, nu, report)
        return nu

    def _rotate_right(self, mu: WBNode, report: RebuildReport) -> WBNode:
        nu = mu.left
        b = nu.right
        self._replace(mu, nu, mu.parent)
        mu.left = b
        b.parent = mu
        nu.right = mu
        mu.parent = nu
        self._after_rotation(mu, nu, report)
        return nu

    def _after_rotation(self, mu: WBNode, nu: WBNode, report: RebuildReport) -> None:
        self.rotations += 1
        self.pull(mu)
        self.pull(nu)
        report.rotated.extend((mu, nu))
        if self.make_assoc is None:
            return
        if nu.assoc is not None and self.drop_assoc is not None:
            self.drop_assoc(nu.assoc)
        nu.assoc = mu.assoc
        if hasattr(nu.assoc, "owner"):
            nu.assoc.owner = nu
        if mu in report.fresh:
            report.fresh.add(nu)
        else:
            report.fresh.discard(nu)
        mu.assoc = None
        self._fresh_assoc(mu, report)

    def _rebuild_subtree(self, top: WBNode, report: RebuildReport) -> WBNode:
        self.fallback_rebuilds += 1
        parent = top.parent
        old_nodes = list(top.nodes())
        leaves = [n for n in old_nodes if n.left is None]
        inner = [n for n in old_nodes if n.left is not None]
        keep_assoc = top.assoc
        top_fresh = top in report.fresh
        for n in inner:
            if n is not top and n.assoc is not None and self.drop_assoc is not None:
                self.drop_assoc(n.assoc)
            n.assoc = None
        pool = iter(inner)

        def build(lo, hi):
            if hi - lo == 1:
                return leaves[lo]
            m = (lo + hi) // 2
            node = next(pool)
            node.left = build(lo, m)
            node.right = build(m, hi)
            node.left.parent = node.right.parent = node
            self.pull(node)
            return node

        new_top = build(0, len(leaves))
        self._replace(top, new_top, parent)
        new_top.assoc = keep_assoc
        for n in inner:
            report.rotated.append(n)
            if n is new_top:
                if top_fresh:
                    report.fresh.add(n)
                else:
                    report.fresh.discard(n)
            else:
                self._fresh_assoc(n, report)
        return new_top

    # -- queries -------------------------------------------------------------

    def canonical_ge(self, q, strict: bool = False) -> list:
        """Minimal node set covering the keys in ``[q, inf)`` (``(q, inf)`` if strict)."""
        out = []
        node = self.root
        if node is None:
            return out
        stack = [node]
        while stack:
            n = stack.pop()
            if (n.lo > q) if strict else (n.lo >= q):
                out.append(n)
            elif (n.hi > q) if strict else (n.hi >= q):
                stack.append(n.right)
                stack.append(n.left)
        return out

    def canonical_le(self, q, strict: bool = False) -> list:
        """Minimal node set covering the keys in ``(-inf, q]`` (``(-inf, q)`` if strict)."""
        out = []
        node = self.root
        if node is None:
            return out
        stack = [node]
        while stack:
            n = stack.pop()
            if (n.hi < q) if strict else (n.hi <= q):
                out.append(n)
            elif (n.lo < q) if strict else (n.lo <= q):
                stack.append(n.right)
                stack.append(n.left)
        return out

    def canonical_nodes(self, lo=None, hi=None, lo_strict=False, hi_strict=False) -> list:
        """Minimal canonical decomposition of a general interval; ``None`` is unbounded."""
        def inside(n):
            ok_lo = lo is None or ((n.lo > lo) if lo_strict else (n.lo >= lo))
            ok_hi = hi is None or ((n.hi < hi) if hi_strict else (n.hi <= hi))
            return ok_lo and ok_hi

        def disjoint(n):
            return (lo is not None and ((n.hi <= lo) if lo_strict else (n.hi < lo))) or (
                hi is not None and ((n.lo >= hi) if hi_strict else (n.lo > hi)))

        out = []
        stack = [self.root] if self.root is not None else []
        while stack:
            n = stack.pop()
            if disjoint(n):
                continue
            if inside(n):
                out.append(n)
            else:
                stack.append(n.right)
                stack.append(n.left)
        return out


def is_canonical_ge(node: WBNode, q, strict: bool = False) -> bool:
    """O(1) test for ``node`` in the canonical set of ``[q, inf)`` (or ``(q, inf)``)."""
    parent = node.parent
    if strict:
        return q < node.lo and (parent is None or q >= parent.lo)
    return q <= node.lo and (parent is None or q > parent.lo)


def is_canonical_le(node: WBNode, q, strict: bool = False) -> bool:
    """Mirror of :func:`is_canonical_ge` for ``(-inf, q]`` (or ``(-inf, q)``)."""
    parent = node.parent
    if strict:
        return node.hi < q and (parent is None or parent.hi >= q)
    return node.hi <= q and (parent is None or parent.hi > q)
