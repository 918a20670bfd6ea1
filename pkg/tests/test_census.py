import io

import numpy as np
import pytest

from growing_squares.census import (
    CSV_HEADER, DISTRIBUTIONS, CensusConfig, brute_links, census, count_links, count_links_tree,
    normalized_ratio, sample_points, sweep,
)


def signature(pairs):
    return {tuple(tuple((n.lo, n.hi) for n in chain) for chain in pair) for pair in pairs}


def test_two_single_points_link_at_the_roots():
    red, blue = np.array([[1]]), np.array([[2]])
    assert count_links(red, blue, 1) == (1, 1)
    assert count_links_tree(red, blue, 1)[0] == 1
    assert len(brute_links(red, blue, 1)) == 1


def test_blue_below_red_gives_no_links():
    red = np.arange(10, 20).reshape(-1, 1)
    blue = np.arange(0, 10).reshape(-1, 1)
    assert count_links(red, blue, 1) == (0, 0)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("dist", DISTRIBUTIONS)
def test_fast_count_matches_tree_and_brute_force(d, dist):
    for n, m, seed in ((1, 1, 0), (3, 2, 1), (9, 9, 2), (20, 13, 3), (33, 33, 4)):
        red, blue = sample_points(CensusConfig(d, n, m, dist, seed))
        links, peak, pairs = count_links_tree(red, blue, d)
        assert count_links(red, blue, d) == (links, peak)
        if n <= 20:
            assert signature(brute_links(red, blue, d)) == signature(pairs)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_fast_count_matches_tree_at_64(d):
    red, blue = sample_points(CensusConfig(d, 64, 64, "uniform", 7))
    assert count_links(red, blue, d) == count_links_tree(red, blue, d)[:2]


@pytest.mark.parametrize("d", [1, 2, 3])
def test_every_dominating_pair_is_covered(d):
    for seed in range(3):
        red, blue = sample_points(CensusConfig(d, 32, 32, "uniform", seed))
        _, _, pairs = count_links_tree(red, blue, d)
        covered = set()
        for u_chain, v_chain in pairs:
            reds = {tuple(r) for r in u_chain[-1].items()}
            blues = {tuple(b) for b in v_chain[-1].items()}
            covered |= {(r, b) for r in reds for b in blues}
        for r in map(tuple, red.tolist()):
            for b in map(tuple, blue.tolist()):
                if all(bk >= rk for bk, rk in zip(b, r)):
                    assert (r, b) in covered


def test_config_validation():
    with pytest.raises(ValueError):
        CensusConfig(4, 2, 2)
    with pytest.raises(ValueError):
        CensusConfig(1, 2, 3)
    with pytest.raises(ValueError):
        CensusConfig(1, 2, 2, "gaussian")


def test_sample_points_distinct_ranks():
    red, blue = sample_points(CensusConfig(3, 50, 40, "grid", 1))
    both = np.vstack([red, blue])
    for k in range(3):
        assert sorted(both[:, k]) == list(range(90))


def test_csv_is_reproducible():
    configs = sweep(2, 16, 64, "uniform", 5)
    a, b = io.StringIO(), io.StringIO()
    census(configs, out=a)
    census(configs, out=b)
    assert a.getvalue() == b.getvalue()
    lines = a.getvalue().splitlines()
    assert lines[0] == ",".join(CSV_HEADER) and len(lines) == 4


def test_ratio_normalization():
    assert normalized_ratio(10, 1, 4, 6) == 1.0
    assert normalized_ratio(2 * 16 * 4, 2, 16, 16) == pytest.approx(1.0)
