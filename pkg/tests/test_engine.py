import random

import pytest
from gmpy2 import mpq

from growing_squares.engine import Engine
from growing_squares.geometry import WeightedPoint, pairwise_intersection_time, squares_intersect
from growing_squares.linked import OverlapError
from oracles import LinkOracle, check_balance, check_winners


def P(pid, x, y, w):
    return WeightedPoint(pid, mpq(x), mpq(y), mpq(w))


def brute_next(points):
    pts = sorted(points, key=lambda p: p.id)
    best = None
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            cand = (pairwise_intersection_time(p, q), p.id, q.id)
            best = cand if best is None or cand < best else best
    return best


def test_empty_engine():
    assert Engine([]).advance_to_next_event() is None


@pytest.mark.parametrize("dx,dy", [(7, 3), (-7, 3), (7, -3), (-7, -3), (3, 7), (-3, -7), (3, -7), (-3, 7)])
def test_two_points_every_relative_placement(dx, dy):
    q, p = P(0, 0, 0, 1), P(1, dx, dy, 3)
    for instances in (8, 4):
        e = Engine([q, p], instances=instances)
        assert e.advance_to_next_event() == (pairwise_intersection_time(p, q), 0, 1)


def test_matches_brute_force_minimum():
    rng = random.Random(11)
    for trial in range(15):
        n = rng.randint(2, 128)
        pts = [P(i, rng.randint(0, 10**6), rng.randint(0, 10**6), rng.randint(1, 10**4)) for i in range(n)]
        assert Engine(pts).advance_to_next_event() == brute_next(pts)


def test_insert_overlapping_names_witness():
    e = Engine([P(0, 0, 0, 2), P(1, 50, 50, 2)])
    e._set_now(mpq(1))
    with pytest.raises(OverlapError) as info:
        e.insert(P(2, 1, 1, 2))
    assert info.value.witness == 0


def test_insert_delete_round_trip():
    rng = random.Random(12)
    pts = [P(i, rng.randint(0, 1000), rng.randint(0, 1000), rng.randint(1, 9)) for i in range(30)]
    e = Engine(pts)
    before = [inst.link_set() for inst in e.instances]
    sizes = [sum(1 for _ in inst.tournament_nodes()) for inst in e.instances]
    e.insert(P(99, 5000, 5000, 1))
    e.delete(99)
    for inst, links, size in zip(e.instances, before, sizes):
        assert LinkOracle(inst).links() == inst.link_set()
        assert len(inst.link_set()) == len(links)
        assert sum(1 for _ in inst.tournament_nodes()) == size
    assert e.advance_to_next_event() == brute_next(pts)


def test_queries_match_brute_force():
    rng = random.Random(13)
    pts = [P(i, rng.randint(0, 1000), rng.randint(0, 1000), rng.randint(1, 20)) for i in range(60)]
    e = Engine(pts)
    t, a, b = e.advance_to_next_event()
    assert squares_intersect(e.registry[a], e.registry[b], t)
    for p in pts[:5]:
        assert e.intersects_query(P(-1, p.x, p.y, p.w), t) is not None
    assert e.intersects_query(P(-1, 10**7, 10**7, 1), t) is None
    for _ in range(1000):
        q = P(-1, rng.randint(-50, 1050), rng.randint(-50, 1050), rng.randint(1, 20))
        hits = [p.id for p in pts if squares_intersect(p, q, t)]
        assert e.intersects_query(q, t) == (min(hits) if hits else None)
        x, y = q.x, q.y
        inside = [p.id for p in pts if abs(p.x - x) <= t * p.w / 2 and abs(p.y - y) <= t * p.w / 2]
        assert e.contains_query((x, y), t) == (min(inside) if inside else None)


def test_queries_only_at_current_time():
    e = Engine([P(0, 0, 0, 1)])
    with pytest.raises(ValueError):
        e.intersects_query(P(1, 0, 0, 1), 5)


def test_time_cannot_move_backwards():
    e = Engine([P(0, 0, 0, 1)], now=3)
    with pytest.raises(ValueError):
        e._set_now(mpq(2))


def test_small_fuzz_against_rebuild_oracle():
    rng = random.Random(14)
    live = {i: P(i, rng.randint(0, 400), rng.randint(0, 400), rng.randint(1, 9)) for i in range(12)}
    e = Engine(live.values())
    nxt = len(live)
    for step in range(40):
        if live and rng.random() < 0.4:
            pid = rng.choice(sorted(live))
            e.delete(pid)
            del live[pid]
        else:
            p = P(nxt, rng.randint(0, 400), rng.randint(0, 400), rng.randint(1, 9))
            nxt += 1
            if any(squares_intersect(p, o, e.now) for o in live.values()):
                continue
            e.insert(p)
            live[p.id] = p
        for inst in e.instances:
            assert inst.link_set() == LinkOracle(inst).links()
            check_winners(inst)
            check_balance(inst)
