"""Counting links between two static multi-layer range trees.

A red node u and a blue node v are linked when v is a canonical node of the
region dominating u's box and u is a canonical node of the region dominated
by v's box.  Both conditions factor per layer, so the count is computed by
recursing over the 1-D linked pairs of each layer.

Two implementations are provided.  ``count_links_tree`` builds the layered
trees from :class:`WBTree` objects and enumerates links explicitly; it is the
reference for small inputs.  ``count_links`` works on implicit array trees
with numba and is used for the large sweeps.  Both build perfectly balanced
trees with the same split rule, so they count the same links.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np
from numba import njit

from .wbtree import DEFAULT_ALPHA, WBTree, is_canonical_le

DISTRIBUTIONS = ("uniform", "grid", "adversarial-diagonal")
CSV_HEADER = ["d", "n", "m", "dist", "seed", "alpha", "links", "max_links_per_node", "ratio"]


@dataclass(frozen=True)
class CensusConfig:
    d: int
    n: int
    m: int
    distribution: str = "uniform"
    seed: int = 0
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        if self.d not in (1, 2, 3):
            raise ValueError(f"d must be 1, 2 or 3, got {self.d}")
        if not self.n >= self.m >= 1:
            raise ValueError(f"need n >= m >= 1, got n={self.n} m={self.m}")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}")


@dataclass(frozen=True)
class CensusRow:
    d: int
    n: int
    m: int
    dist: str
    seed: int
    alpha: float
    links: int
    max_links_per_node: int
    ratio: float


def normalized_ratio(links: int, d: int, n: int, m: int) -> float:
    if d == 1:
        return links / (n + m)
    lg = math.log2(n)
    llg = math.log2(lg) if lg > 1 else 1.0
    return links / (n * (lg * llg) ** (d - 1))


def sample_points(config: CensusConfig) -> tuple[np.ndarray, np.ndarray]:
    """Red and blue point sets as integer rank arrays of shape (k, d).

    Ranks are taken over the union with ties broken by id (reds first), so
    every axis holds distinct values.
    """
    rng = np.random.default_rng(config.seed)
    n, m, d = config.n, config.m, config.d
    total = n + m
    if config.distribution == "uniform":
        pts = rng.random((total, d))
    elif config.distribution == "grid":
        side = max(2, math.ceil(total ** (1 / d)))
        pts = rng.integers(0, side, size=(total, d)).astype(float)
    else:
        # both colours interleaved along the main diagonal with small jitter
        t = rng.permutation(total).astype(float)
        pts = t[:, None] + rng.random((total, d)) * 0.5
    ids = np.arange(total)
    ranks = np.empty((total, d), dtype=np.int64)
    for k in range(d):
        order = np.lexsort((ids, pts[:, k]))
        ranks[order, k] = np.arange(total)
    return ranks[:n], ranks[n:]


# -- reference implementation on WBTree objects -------------------------------


def _layered(points: Sequence[tuple], d: int, alpha: float, level: int = 0) -> WBTree:
    def make_assoc(node):
        return _layered(node.items(), d, alpha, level + 1)

    return WBTree(
        points,
        key=lambda p, k=level: p[k],
        alpha=alpha,
        make_assoc=make_assoc if level + 1 < d else None,
    )


def _chains(tree: WBTree, d: int, prefix=()) -> Iterator[tuple]:
    for node in tree.nodes():
        if len(prefix) + 1 == d:
            yield prefix + (node,)
        else:
            yield from _chains(node.assoc, d, prefix + (node,))


def _as_tuples(pts: np.ndarray) -> list[tuple]:
    return [tuple(int(c) for c in row) for row in pts]


def count_links_tree(red, blue, d: int, alpha: float = DEFAULT_ALPHA):
    """Enumerate links with explicit layered trees.

    Returns ``(links, max_links_per_node, pairs)`` where ``pairs`` lists the
    linked (red chain, blue chain) tuples.
    """
    tr = _layered(_as_tuples(red), d, alpha)
    tb = _layered(_as_tuples(blue), d, alpha)
    pairs = []

    def walk(u_chain, tree_b, level, acc):
        u = u_chain[level]
        for v in tree_b.canonical_ge(u.hi):
            if not is_canonical_le(u, v.lo):
                continue
            if level + 1 == d:
                pairs.append((u_chain, acc + (v,)))
            else:
                walk(u_chain, v.assoc, level + 1, acc + (v,))

    for chain in _chains(tr, d):
        walk(chain, tb, 0, ())
    deg: dict = {}
    for u, v in pairs:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    return len(pairs), max(deg.values(), default=0), pairs


def brute_links(red, blue, d: int, alpha: float = DEFAULT_ALPHA) -> set:
    """Links from the definition, one side at a time, by scanning all nodes.

    Canonical nodes of a range are the nodes lying inside it whose parent
    does not.  Linked pairs are found from the red side and from the blue
    side independently and intersected.
    """
    tr = _layered(_as_tuples(red), d, alpha)
    tb = _layered(_as_tuples(blue), d, alpha)

    def canon(tree, inside):
        return [n for n in tree.nodes() if inside(n) and (n.parent is None or not inside(n.parent))]

    def decomposition(tree, box, dominating, level=0, acc=()):
        # box: per-layer (lo, hi) of the query node
        lo, hi = box[level]
        inside = (lambda n: n.lo >= hi) if dominating else (lambda n: n.hi <= lo)
        out = []
        for n in canon(tree, inside):
            if level + 1 == d:
                out.append(acc + (n,))
            else:
                out.extend(decomposition(n.assoc, box, dominating, level + 1, acc + (n,)))
        return out

    from_red = set()
    for u in _chains(tr, d):
        box = [(n.lo, n.hi) for n in u]
        for v in decomposition(tb, box, True):
            from_red.add((u, v))
    from_blue = set()
    for v in _chains(tb, d):
        box = [(n.lo, n.hi) for n in v]
        for u in decomposition(tr, box, False):
            from_blue.add((u, v))
    return from_red & from_blue


# -- array implementation -----------------------------------------------------


def block_sizes(n: int, d: int) -> np.ndarray:
    """``t[l, s]``: number of last-layer nodes in an l-layer structure on s points."""
    t = np.zeros((d + 1, n + 1), dtype=np.int64)
    s = np.arange(n + 1)
    t[1, 1:] = 2 * s[1:] - 1
    for lev in range(2, d + 1):
        t[lev, 1] = 1
        for k in range(2, n + 1):
            t[lev, k] = t[lev - 1, k] + t[lev, k // 2] + t[lev, k - k // 2]
    return t


@njit(cache=True)
def _build(size):
    m = 2 * size - 1
    start = np.empty(m, np.int64)
    end = np.empty(m, np.int64)
    left = np.full(m, -1, np.int64)
    right = np.full(m, -1, np.int64)
    parent = np.full(m, -1, np.int64)
    # node j covering [s, e) has its left child at j+1 and its right child at
    # j + 2*(mid-s), the size of the left subtree being 2*(mid-s)-1
    stack_j = np.empty(64, np.int64)
    stack_j[0] = 0
    start[0] = 0
    end[0] = size
    top = 0
    while top >= 0:
        j = stack_j[top]
        top -= 1
        s = start[j]
        e = end[j]
        if e - s > 1:
            mid = (s + e) // 2
            lj = j + 1
            rj = j + 2 * (mid - s)
            start[lj] = s
            end[lj] = mid
            parent[lj] = j
            start[rj] = mid
            end[rj] = e
            parent[rj] = j
            left[j] = lj
            right[j] = rj
            top += 1
            stack_j[top] = rj
            top += 1
            stack_j[top] = lj
    return start, end, left, right, parent


@njit(cache=True)
def _link_layer(rk, bk, rs, re, rp, bs, be, bl, br):
    """All 1-D linked (red node, blue node) pairs of two implicit trees."""
    mr = rs.shape[0]
    cap = mr * 70 + 1
    out_u = np.empty(cap, np.int64)
    out_v = np.empty(cap, np.int64)
    cnt = 0
    for u in range(mr):
        q = rk[re[u] - 1]
        pu = rp[u]
        bound = rk[re[pu] - 1] if pu >= 0 else -1
        v = 0
        while True:
            cand = -1
            if bk[bs[v]] >= q:
                cand = v
            elif bk[be[v] - 1] < q:
                break
            else:
                r = br[v]
                if bk[bs[r]] >= q:
                    cand = r
            if cand >= 0 and (pu < 0 or bound > bk[bs[cand]]):
                out_u[cnt] = u
                out_v[cnt] = cand
                cnt += 1
            if cand == v:
                break
            if bk[bs[br[v]]] >= q:
                v = bl[v]
            else:
                v = br[v]
    return out_u[:cnt], out_v[:cnt]


@njit(cache=True)
def _count(level, d, rpts, bpts, red, blue, rbase, bbase, table, cred, cblue):
    rk = red[rpts, level]
    bk = blue[bpts, level]
    rs, re, rl, rr, rp = _build(rpts.shape[0])
    bs, be, bl, br, bp = _build(bpts.shape[0])
    us, vs = _link_layer(rk, bk, rs, re, rp, bs, be, bl, br)
    if level + 1 == d:
        for i in range(us.shape[0]):
            cred[rbase + us[i]] += 1
            cblue[bbase + vs[i]] += 1
        return us.shape[0]
    lev = d - level - 1
    roff = _offsets(rs, re, table[lev])
    boff = _offsets(bs, be, table[lev])
    total = 0
    for i in range(us.shape[0]):
        u = us[i]
        v = vs[i]
        sub_r = rpts[rs[u]:re[u]]
        sub_r = sub_r[np.argsort(red[sub_r, level + 1])]
        sub_b = bpts[bs[v]:be[v]]
        sub_b = sub_b[np.argsort(blue[sub_b, level + 1])]
        total += _count(level + 1, d, sub_r, sub_b, red, blue,
                        rbase + roff[u], bbase + boff[v], table, cred, cblue)
    return total


@njit(cache=True)
def _offsets(start, end, sizes):
    off = np.empty(start.shape[0], np.int64)
    acc = 0
    for j in range(start.shape[0]):
        off[j] = acc
        acc += sizes[end[j] - start[j]]
    return off


def count_links(red: np.ndarray, blue: np.ndarray, d: int, alpha: float = DEFAULT_ALPHA):
    """Return ``(links, max_links_per_node)`` for rank arrays ``red`` and ``blue``.

    ``alpha`` only matters for dynamic trees; static trees here are perfectly
    balanced and therefore satisfy every admissible balance parameter.
    """
    red = np.ascontiguousarray(red[:, :d], dtype=np.int64)
    blue = np.ascontiguousarray(blue[:, :d], dtype=np.int64)
    table = block_sizes(max(len(red), len(blue)), d)
    cred = np.zeros(table[d, len(red)], np.int32)
    cblue = np.zeros(table[d, len(blue)], np.int32)
    rpts = np.argsort(red[:, 0])
    bpts = np.argsort(blue[:, 0])
    links = int(_count(0, d, rpts, bpts, red, blue, 0, 0, table, cred, cblue))
    peak = int(max(cred.max(initial=0), cblue.max(initial=0)))
    return links, peak


def run_config(config: CensusConfig) -> CensusRow:
    red, blue = sample_points(config)
    links, peak = count_links(red, blue, config.d, config.alpha)
    return CensusRow(
        config.d, config.n, config.m, config.distribution, config.seed, config.alpha,
        links, peak, normalized_ratio(links, config.d, config.n, config.m),
    )


def sweep(d: int, nmin: int, nmax: int, distribution: str = "uniform", seed: int = 0,
          alpha: float = DEFAULT_ALPHA) -> list[CensusConfig]:
    """Configs for n = m over powers of two from ``nmin`` to ``nmax``."""
    out = []
    n = nmin
    while n <= nmax:
        out.append(CensusConfig(d, n, n, distribution, seed, alpha))
        n *= 2
    return out


def census(configs: Iterable[CensusConfig], out=None, workers: Optional[int] = None) -> list[CensusRow]:
    """Run every config; write CSV rows to the file object ``out`` if given."""
    configs = list(configs)
    if workers and workers > 1 and len(configs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(run_config, configs))
    else:
        rows = [run_config(c) for c in configs]
    if out is not None:
        write_rows(rows, out)
    return rows


def write_rows(rows: Sequence[CensusRow], out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        rec = asdict(r)
        rec["ratio"] = f"{r.ratio:.6g}"
        w.writerow([rec[k] for k in CSV_HEADER])
