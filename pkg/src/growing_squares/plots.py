"""Figures written next to the CSV/JSON reports (Agg backend, PNG)."""
from __future__ import annotations

from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_META = {"Software": None}


def census_figure(rows, path) -> None:
    """Normalized link count against n, one line per (d, dist)."""
    series = defaultdict(lambda: defaultdict(list))
    for r in rows:
        series[(r.d, r.dist)][r.n].append(r.ratio)
    fig, ax = plt.subplots(figsize=(6, 4))
    for (d, dist), by_n in sorted(series.items()):
        ns = sorted(by_n)
        means = [sum(by_n[n]) / len(by_n[n]) for n in ns]
        ax.plot(ns, means, marker="o", label=f"d={d} {dist}")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("n")
    ax.set_ylabel("normalized link count")
    ax.set_ylim(bottom=0)
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)


def dendrogram_figure(dendro, path) -> None:
    """Glyph positions (left) and merge heights over time (right)."""
    fig, (a, b) = plt.subplots(1, 2, figsize=(10, 4.5))
    if dendro.leaves:
        xs = [float(p.x) for p in dendro.leaves]
        ys = [float(p.y) for p in dendro.leaves]
        ws = [float(p.w) for p in dendro.leaves]
        top = max(ws)
        a.scatter(xs, ys, s=[4 + 60 * w / top for w in ws], alpha=0.6)
    if dendro.merges:
        a.plot([float(m.x) for m in dendro.merges], [float(m.y) for m in dendro.merges], "r+", ms=4)
    a.set_title("glyphs and merge centers")
    a.set_aspect("equal", adjustable="datalim")

    # dendrogram: leaves placed in the order a depth-first walk visits them
    children = {m.result: (m.left, m.right, float(m.time)) for m in dendro.merges}
    pos, height = {}, {}
    leaf_count = [0]

    def place(node):
        stack = [(node, False)]
        while stack:
            v, done = stack.pop()
            if v not in children:
                pos[v] = leaf_count[0]
                leaf_count[0] += 1
                height[v] = 0.0
            elif done:
                l, r, t = children[v]
                pos[v] = (pos[l] + pos[r]) / 2
                height[v] = t
                b.plot([pos[l], pos[l], pos[r], pos[r]], [height[l], t, t, height[r]], "k-", lw=0.6)
            else:
                l, r, _ = children[v]
                stack += [(v, True), (r, False), (l, False)]

    for root in dendro.roots:
        place(root)
    b.set_title("merge times")
    b.set_xlabel("glyph")
    b.set_ylabel("t")
    b.set_xticks([])
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)
