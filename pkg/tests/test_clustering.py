import random

from gmpy2 import mpq

from growing_squares.arith import FLOAT, Arithmetic
from growing_squares.clustering import RunStats, brute_cluster, cluster
from growing_squares.geometry import WeightedPoint


def P(pid, x, y, w):
    return WeightedPoint(pid, mpq(x), mpq(y), mpq(w))


def random_points(rng, n):
    return [P(i, rng.randint(0, 10**6), rng.randint(0, 10**6), rng.randint(1, 10**4)) for i in range(n)]


def test_single_point():
    d = cluster([P(0, 1, 2, 3)])
    assert d.merges == [] and d.roots == [0] and len(d.leaves) == 1


def test_empty_input():
    d = cluster([])
    assert d.merges == [] and d.roots == []


def test_collinear_example():
    pts = [P(0, 0, 0, 1), P(1, 3, 0, 1), P(2, 10, 0, 1)]
    d = cluster(pts)
    first, second = d.merges
    assert (first.time, first.left, first.right) == (3, 0, 1)
    assert (first.x, first.y, first.w) == (mpq(3, 2), 0, 2)
    # merged square at x=3/2 with weight 2 meets the one at 10: 2*(17/2)/3
    assert (second.time, second.left, second.right) == (mpq(17, 3), 2, 3)
    assert d.roots == [4]
    assert d == brute_cluster(pts)


def test_cascade_absorbs_overlapped_square():
    pts = [P(0, 0, 0, 1), P(1, 2, 0, 1), P(2, 1, mpq(29, 10), 1)]
    d = cluster(pts)
    assert [(m.time, m.left, m.right, m.result) for m in d.merges] == [(2, 0, 1, 3), (2, 3, 2, 4)]
    assert d == brute_cluster(pts)


def test_horizon_leaves_a_forest():
    pts = [P(0, 0, 0, 1), P(1, 3, 0, 1), P(2, 10, 0, 1)]
    d = cluster(pts, horizon=mpq(4))
    assert len(d.merges) == 1 and d.roots == [2, 3]
    assert d == brute_cluster(pts, horizon=mpq(4))


def test_random_instances_match_oracle():
    rng = random.Random(21)
    for n in (2, 5, 16, 40):
        for _ in range(3):
            pts = random_points(rng, n)
            d = cluster(pts)
            assert d.first_divergence(brute_cluster(pts)) is None
            assert cluster(pts, instances=4) == d
            assert len(d.roots) == 1 and len(d.merges) == n - 1


def test_stats_are_filled():
    rng = random.Random(22)
    stats = RunStats()
    cluster(random_points(rng, 20), stats=stats, track_links=True)
    assert stats.n == 20 and stats.mode == "exact"
    assert stats.total_events == stats.tournament_events + stats.linking_events
    assert stats.linking_events >= 1 and stats.peak_certificates > 0 and stats.max_links_per_node > 0


def test_float_mode_agrees_on_merge_order():
    rng = random.Random(23)
    pts = random_points(rng, 30)
    exact = cluster(pts)
    fpts = [WeightedPoint(p.id, float(p.x), float(p.y), float(p.w)) for p in pts]
    approx = cluster(fpts, arith=FLOAT)
    assert [(m.left, m.right) for m in approx.merges] == [(m.left, m.right) for m in exact.merges]
    for a, b in zip(approx.merges, exact.merges):
        assert abs(a.time - float(b.time)) <= 1e-9 * max(1.0, float(b.time))


def test_custom_epsilon_is_used():
    pts = [WeightedPoint(0, 0.0, 0.0, 1.0), WeightedPoint(1, 3.0, 0.0, 1.0)]
    d = cluster(pts, arith=Arithmetic(False, 1e-6))
    assert d.merges[0].time == 3.0
