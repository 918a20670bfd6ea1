import random
from types import SimpleNamespace

from gmpy2 import mpq

from growing_squares.arith import INF
from growing_squares.kinetic import CertKind, EventQueue
from growing_squares.tournament import Rec, Tournament


def ctx():
    return SimpleNamespace(now=mpq(0), eps=0.0, tq=EventQueue(), alpha=0.25, release_node=lambda n: None)


def rec(pid, a, slope, g=None):
    """Record whose lower-left motion on the tracked axis is ``a + slope*t``."""
    g = pid if g is None else g
    return Rec(pid, mpq(g), mpq(0), mpq(a), mpq(-slope))


def build(c, recs):
    return Tournament(c, sorted(recs, key=lambda r: r.kg))


def min_certs(c):
    return sorted((x for x in c.tq if x.kind is CertKind.TournamentMin), key=lambda x: x.time)


def test_two_leaves_min_winner_and_failure():
    c = ctx()
    t = build(c, [rec(0, 5, -1), rec(1, 3, 1)])
    assert t.root.lw.id == 1
    assert t.root.lcert.time == 1


def test_two_leaves_swap_at_crossing():
    c = ctx()
    t = build(c, [rec(0, 5, -1), rec(1, 3, 1)])
    cert = t.root.lcert
    c.tq.cancel(cert)
    c.now = cert.time
    changed = t.handle_failure(cert)
    assert t.root.lw.id == 0
    assert [n for n, lo, _ in changed if lo] == [t.root]


def test_single_leaf():
    c = ctx()
    t = build(c, [rec(7, 1, 1)])
    assert t.winner_at_root()[0].id == 7
    assert len(c.tq) == 0


def test_identical_motions_pick_smallest_id():
    c = ctx()
    t = build(c, [rec(i, 2, 1) for i in (3, 1, 2)])
    assert t.root.lw.id == 1 and t.root.hw.id == 1
    assert all(x.time == INF for x in c.tq)


def test_deep_crossing_leaves_root_alone():
    c = ctx()
    recs = [rec(0, -100, 0)] + [rec(i, 10 + (i % 2) * 5, -1 if i % 2 else 1) for i in range(1, 8)]
    t = build(c, recs)
    assert t.root.lw.id == 0
    cert = min_certs(c)[0]
    assert cert.time < INF and cert.node is not t.root
    c.tq.cancel(cert)
    c.now = cert.time
    changed = t.handle_failure(cert)
    assert changed and all(n is not t.root for n, _, _ in changed)
    assert t.root.lw.id == 0


def test_equal_value_crossing_resolved_by_slope_then_id():
    c = ctx()
    # both reach 4 at t=1 with identical slopes afterwards: id decides
    t = build(c, [rec(0, 4, 0), rec(1, 4, 0)])
    assert t.root.lw.id == 0


def _brute(t, now):
    recs = [l.item for l in t.root.leaves()]
    lo = min(r.la + r.lb * now for r in recs)
    hi = max(r.ha + r.hb * now for r in recs)
    return lo, hi


def test_random_kinetic_run_matches_brute_force():
    rng = random.Random(2)
    for trial in range(20):
        c = ctx()
        recs = [rec(i, rng.randint(0, 50), rng.randint(-5, 5), rng.random()) for i in range(rng.randint(1, 30))]
        t = build(c, recs)
        while c.tq.peek() is not None and c.tq.peek().time < INF:
            cert = c.tq.pop()
            mid = (c.now + cert.time) / 2
            lo, hi = _brute(t, mid)
            assert t.root.lw.la + t.root.lw.lb * mid == lo
            assert t.root.hw.ha + t.root.hw.hb * mid == hi
            c.now = cert.time
            t.handle_failure(cert)
            for n in t.nodes():
                sub = [l.item for l in n.leaves()]
                assert n.lw.la + n.lw.lb * c.now == min(r.la + r.lb * c.now for r in sub)
