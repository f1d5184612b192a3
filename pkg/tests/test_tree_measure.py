from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from rainbowlab import tree_measure as tm


def count_both_bits(D, depth):
    """Depth-d strings taking both values on D, by direct enumeration."""
    n = 0
    for bits in product((0, 1), repeat=depth):
        if len({bits[p] for p in D}) == 2:
            n += 1
    return Fraction(n, 2 ** depth)


def test_te_examples():
    assert tm.measure_exact(tm.build_Te({1, 3}, 4)) == Fraction(1, 2)
    assert tm.measure_exact(tm.build_Te({0, 1, 2}, 3)) == Fraction(3, 4)
    assert tm.measure_exact(tm.build_Te({2}, 4)) == 0
    T = tm.build_Te({1, 3}, 4)
    assert tm.measure_exact(T, [tm.Cylinder({1})]) == Fraction(1, 4)


def test_te_formula_against_enumeration():
    for size in range(1, 6):
        for D in combinations(range(8), size):
            depth = max(D) + 1 + (sum(D) % 3)
            if depth > 10:
                continue
            mu = tm.measure_exact(tm.build_Te(D, depth))
            assert mu == tm.te_measure_formula(D) == count_both_bits(D, depth)


def test_te_rejects_short_depth():
    with pytest.raises(ValueError):
        tm.build_Te({2, 5}, 5)
    with pytest.raises(ValueError):
        tm.build_Te(set(), 5)


def test_full_tree_measures():
    T = tm.DyadicTree.full(6)
    assert tm.measure_exact(T) == 1
    assert tm.measure_exact(T, [tm.Cylinder({0})]) == Fraction(1, 2)
    assert T.check_prefix_closed() is None


def test_truncation_rounds_down():
    assert tm.measure_truncate(Fraction(3, 8), 2) == Fraction(1, 4)
    assert tm.measure_truncate(Fraction(1, 3), 4) == Fraction(5, 16)
    assert tm.measure_truncate(Fraction(1, 2), 1) == Fraction(1, 2)
    assert tm.is_dyadic(tm.measure_truncate(Fraction(2, 7), 9))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 9))
def test_measure_monotone_under_constraints(seed, depth):
    T = tm.random_tree(seed, depth)
    assert T.check_prefix_closed() is None
    free = tm.measure_exact(T)
    for p in range(depth):
        assert tm.measure_exact(T, [tm.Cylinder({p})]) <= free
    # level ratios never increase with depth on prefix-closed trees
    ratios = [tm.level_ratio(T, s) for s in range(depth + 1)]
    assert all(a >= b for a, b in zip(ratios, ratios[1:]))


def test_union_bound_on_intersections():
    for a, b, c in combinations(range(7), 3):
        Ts = [tm.build_Te({a, b}, 8), tm.build_Te({b, c}, 8), tm.build_Te({a, c, 7}, 8)]
        meet = Ts[0].intersect(Ts[1]).intersect(Ts[2])
        lower = 1 - sum(1 - tm.measure_exact(T) for T in Ts)
        assert tm.measure_exact(meet) >= lower


def test_thresholds():
    assert tm.epsilon(2) == Fraction(15, 256)
    assert tm.next_k(2) == 5
    assert tm.next_k(5) == 11
    with pytest.raises(ValueError):
        tm.bad_set(tm.DyadicTree.full(4), set(), 1)
    with pytest.raises(ValueError):
        tm.s_threshold(tm.DyadicTree.full(4), set(), 1)


def test_bad_set_examples():
    assert tm.bad_set(tm.DyadicTree.full(8), set(), 2) == set()
    # every path carries 1 at position 3
    T = tm.DyadicTree.from_predicate(6, lambda sigma, n: n <= 3 or (sigma >> 3) & 1)
    assert 3 in tm.bad_set(T, set(), 2)


def test_exact_tree_threshold_is_minimal():
    T = tm.DyadicTree.full(8)
    assert tm.s_threshold(T, set(), 2) == 0


def test_threshold_claim_exhaustive():
    for seed in range(20):
        T = tm.random_tree(seed, 10, density=0.7)
        for k in (2, 3):
            for H in [set(), {0}, {1, 4}]:
                mu = tm.measure_exact(T, [tm.Cylinder(H)])
                if mu < Fraction(1, 2 ** k):
                    continue
                thr = tm.s_threshold(T, H, k)
                assert all(n <= thr for n in tm.bad_set(T, H, k))


def test_homogeneous_build_on_full_tree():
    T = tm.DyadicTree.full(12)
    H, ks, _ = tm.homogeneous_build(T, 2, lambda blocking, size: max(blocking, default=-1) + 1)
    assert ks[:3] == [2, 5, 11]
    assert tm.is_path_homogeneous(T, tm.characteristic(H, 12), 0)


def test_homogeneous_build_on_te_intersections():
    from rainbowlab.rainbow_reductions import least_outside
    for D1, D2 in [({0, 5}, {3, 9}), ({1, 2, 12}, {4, 13}), ({6, 7}, {0, 11})]:
        T = tm.build_Te(D1, 14).intersect(tm.build_Te(D2, 14))
        H, ks, _ = tm.homogeneous_build(T, 2, least_outside)
        assert len(H) >= 2
        assert tm.is_path_homogeneous(T, tm.characteristic(H, 14), 0)


def test_homogeneous_build_rejects_thin_tree():
    T = tm.build_Te({0}, 3)  # measure 0
    with pytest.raises(ValueError):
        tm.homogeneous_build(T, 2, lambda b, n: 0)


def test_path_homogeneity():
    T = tm.DyadicTree.full(5)
    assert tm.is_path_homogeneous(T, [], 0)
    forced = tm.DyadicTree.from_predicate(5, lambda sigma, n: n <= 2 or (sigma >> 2) & 1)
    assert not tm.is_path_homogeneous(forced, [0, 0, 1], 0)
    assert tm.is_path_homogeneous(forced, [0, 0, 1], 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 8), st.data())
def test_path_homogeneity_matches_scan(seed, depth, data):
    T = tm.random_tree(seed, depth)
    sigma = data.draw(st.lists(st.integers(0, 1), max_size=depth))
    c = data.draw(st.integers(0, 1))
    n = len(sigma)
    want = any(all(((tau >> i) & 1) == c for i, b in enumerate(sigma) if b)
               for tau in T.levels[n])
    assert tm.is_path_homogeneous(T, sigma, c) == want
