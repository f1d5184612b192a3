from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from rainbowlab import rainbow_reductions as rr
from rainbowlab.core_model import (
    StageColoring, check_k_bounded, classify_stability, encode_finite_set,
    is_1tail_rainbow, is_free, is_prerainbow, is_rainbow, is_transitive,
    pair_encode, tuple_decode,
)
from rainbowlab.generators import stability_instance
from rainbowlab.harness.suites import random_stable_pairs, trapped_coloring
from rainbowlab.oracles import LimitFunction
from rainbowlab.solvers import (
    escaping_from_family, find_free_sets, find_rainbows, find_thin_sets,
    find_transitive_subtournaments,
)


def married(N):
    return StageColoring.from_function(2, N, lambda x, s: pair_encode(x // 2, s))


def monks(N):
    return StageColoring.from_function(2, N, pair_encode)


# -- jump lowering ----------------------------------------------------------

def test_constant_injective_approximation_tags_zero():
    N = 10
    f = StageColoring.from_function(1, N, lambda x: 5 * x)
    h = LimitFunction([[5 * x] * N for x in range(N)])
    g = rr.jump_lower(h, 1, N)
    assert all(tuple_decode(c, 3)[2] == 0 for c in g.table.values())
    assert check_k_bounded(g, 1)[0]
    assert rr.limit_coloring(h, 1, N) == f


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_lowered_rainbows_descend(seed):
    N = 11
    f = rr.random_two_bounded(seed, 1, N)
    h = rr.approximation_for(f, seed)
    g = rr.jump_lower(h, 1, N)
    assert check_k_bounded(g, 2)[0]
    for m in range(2, 6):
        for A in find_rainbows(g, m):
            assert rr.rainbow_descent_violation(f, h, A) is None


def test_compose_levels():
    (f0, h0), = rr.compose_jump_lower(0, 3, 10)
    assert h0 is None and f0.arity == 1
    one = rr.compose_jump_lower(1, 3, 10)
    f, h = one[1]
    assert f == rr.jump_lower(h, 1, 10)
    two = rr.compose_jump_lower(2, 5, 12)
    for (lo, _), (hi, h) in zip(two, two[1:]):
        assert check_k_bounded(hi, 2)[0]
        for A in find_rainbows(hi, 5):
            assert rr.rainbow_descent_violation(lo, h, A) is None


def test_limit_lift_thin():
    N = 10
    f = StageColoring.from_function(1, N, lambda x: x % 3)
    const = LimitFunction([[x % 3] * N for x in range(N)])
    assert all(ok for _, ok in rr.limit_lift_thin(f, const, combinations(range(N), 4), 1))
    h = rr.approximation_for(f, 7, value_bound=3)
    g = rr.approximation_coloring(h, 1, N)
    sets = list(find_thin_sets(g, 4, None, avoid=2))
    assert sets and all(ok for _, ok in rr.limit_lift_thin(f, h, sets, 2))
    # color 5 never appears at the limit: the whole domain works for both
    out = rr.limit_lift_thin(f, const, [range(N)], 5)
    assert out == [(frozenset(range(N)), True)]


# -- rainbows to thin sets --------------------------------------------------

def test_constant_pair_code_merges_0_and_1():
    N = 8
    f = StageColoring.from_function(1, N, lambda z: pair_encode(0, 1))
    g = rr.rainbow_to_thin(f)
    for z in range(2, N):
        assert g.table[(1, z)] == g.table[(0, z)]
    for R in find_rainbows(g, 3):
        assert not ({0, 1} <= R and max(R) >= 2)


def test_large_values_keep_fresh_colors():
    N = 9
    f = StageColoring.from_function(1, N, lambda z: pair_encode(z + 1, z + 2))
    g = rr.rainbow_to_thin(f)
    assert check_k_bounded(g, 1)[0]


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_trimmed_rainbows_are_thin(seed):
    N = 10
    f = rr.random_two_bounded(seed, 1, N)
    f = StageColoring(1, N, {z: c % pair_encode(0, N) for z, c in f.table.items()})
    g = rr.rainbow_to_thin(f)
    assert check_k_bounded(g, 2)[0]
    for m in range(2, 6):
        for H in find_rainbows(g, m):
            x, y, rest = rr.trim_solution(H)
            assert rr.avoids(f, rest, pair_encode(x, y))
    with pytest.raises(ValueError):
        rr.trim_solution({3})


# -- rainbows to free sets --------------------------------------------------

def test_predecessor_map_gives_free_pair_sets():
    N = 16
    K = N * (N - 1) // 2
    f = StageColoring.from_function(1, K, lambda z: max(z - 1, 0))
    assert rr.trap_violation(f, 1) is None
    g = rr.rainbow_to_free(f, 1, N)
    assert check_k_bounded(g, 2)[0]
    for m in (4, 6, 8):
        for H in find_rainbows(g, m, budget=2 * 10 ** 6):
            assert is_free(f, rr.pairs_solution(H))


def test_value_in_tuple_is_always_free():
    f = StageColoring.from_function(2, 12, lambda a, b: a)
    assert rr.trap_violation(f, 2) is None
    assert is_free(f, range(12))


def test_untrapped_coloring_rejected_with_tuple():
    f = StageColoring.from_function(1, 10, lambda z: z + 3)
    with pytest.raises(rr.NotApplicable, match=r"\(0,\)"):
        rr.rainbow_to_free(f, 1, 6)


def test_well_formed_interleavings():
    assert rr.well_formed((0, 1, 4, 5))
    assert not rr.well_formed((0, 2, 1))
    z = (rr.ordered_pair_code(0, 1), rr.ordered_pair_code(3, 4))
    assert rr.interleave(z, 2, 2) == (0, 1, 2, 3, 4)
    assert rr.interleave(z, 1, 7) == (7, 0, 1, 3, 4)
    assert not rr.well_formed(rr.interleave(z, 1, 7))


def test_trapped_generators():
    for t in (1, 2):
        f = trapped_coloring(1, 8, t)
        assert rr.trap_violation(f, t) is None
        g = rr.rainbow_to_free(f, t, 8)
        for H in find_rainbows(g, 4):
            assert is_free(f, rr.pairs_solution(H))


# -- stability transformations ----------------------------------------------

def test_stabilize_married_keeps_pairs():
    f = married(20)
    g = rr.stabilize_strongly(f, 6)
    for (x, s), c in f.table.items():
        for (y, t), d in f.table.items():
            if t == s and x < y and c == d:
                assert g.table[(x, s)] == g.table[(y, s)]
    assert classify_stability(g, 6)["strongly_rainbow_stable"]


def test_stabilize_monks_and_prerainbow_transfer():
    f = monks(20)
    g = rr.stabilize_strongly(f, 6)
    assert classify_stability(g, 6)["strongly_rainbow_stable"]
    assert check_k_bounded(g, 2)[0]
    mixed = stability_instance(2, 20, 6, "mixed")
    gm = rr.stabilize_strongly(mixed, 6)
    for m in range(2, 6):
        for X in combinations(range(14), m):
            if is_prerainbow(gm, X, 6):
                assert is_prerainbow(mixed, X, 6)


def test_stabilize_rejects_drifting():
    with pytest.raises(rr.NotApplicable):
        rr.stabilize_strongly(stability_instance(1, 24, 6, "drifting"), 6)


def test_srt_to_sfs_examples():
    N = 12
    assert set(rr.srt_to_sfs(StageColoring.from_function(2, N, lambda x, y: x)).table.values()) == {0}
    assert set(rr.srt_to_sfs(StageColoring.from_function(2, N, lambda x, y: y + 1)).table.values()) == {1}
    g = rr.srt_to_sfs(StageColoring.from_function(2, N, lambda x, y: 0))
    assert g.table[(1, 2)] == 3


def test_srt_to_sfs_random_stable():
    for seed in range(50):
        f = random_stable_pairs(seed, 24, 12)
        assert classify_stability(f, 8)["stable"]
        g = rr.srt_to_sfs(f)
        assert set(g.table) == set(f.table)
        assert max(g.table.values()) < 6
        assert classify_stability(g, 8)["stable"]


# -- bad families and prerainbows -------------------------------------------

def test_bad_family_examples():
    fam = rr.bad_family(monks(20), 6)
    D = {1, 4, 7}
    assert fam(encode_finite_set(D)) == D
    fm = rr.bad_family(married(20), 6)
    assert fm.strongly
    assert fm(encode_finite_set({0, 2})) == {0, 1, 2, 3}
    assert fm.size_formula({0, 2}) == 4
    assert len(fm(encode_finite_set({0, 1}))) == fm.size_formula({0, 1}) == 2


def test_bad_family_size_formula_exhaustive():
    f = married(20)
    fam = rr.bad_family(f, 6)
    for m in range(1, 5):
        for D in combinations(range(12), m):
            assert len(fam.members(D)) == fam.size_formula(D) <= fam.size_bound(D)


def test_escaping_avoids_couples():
    for seed in range(50):
        f = stability_instance(seed, 30, 6, "married")
        fam = rr.bad_family(f, 6)
        R, _ = rr.escaping_to_prerainbow(fam, escaping_from_family)
        assert is_prerainbow(f, R, 6)
        assert all(fam.bad[x] != fam.bad[y] for x, y in combinations(R, 2))
    R, _ = rr.escaping_to_prerainbow(rr.bad_family(monks(20), 6), escaping_from_family, target=5)
    assert R == set(range(5))


def test_jump_rainbow_coloring():
    g = rr.wsrrt_to_jump_rainbow(monks(16), 5)
    assert check_k_bounded(g, 1)[0]
    gm = rr.wsrrt_to_jump_rainbow(married(16), 5)
    assert gm.table[(2,)] == gm.table[(3,)]
    mixed = stability_instance(4, 16, 5, "mixed")
    gx = rr.wsrrt_to_jump_rainbow(mixed, 5)
    assert check_k_bounded(gx, 2)[0]
    for m in range(2, 6):
        for X in find_rainbows(gx, m):
            assert is_prerainbow(mixed, X, 5)


# -- tournaments from stable colorings ---------------------------------------

def test_empty_sequence_is_cohesive():
    f = random_stable_pairs(1, 10, 4, colors=1)
    T = rr.em_to_sts_or_coh(f, [])
    for H in find_transitive_subtournaments(T, 4):
        assert rr.check_transitive_classification(f, [], H) == rr.Cohesive(())


def test_planted_violation_has_four_cycle():
    N = 8
    f = StageColoring.from_function(2, N, lambda x, s: x % 2)
    R = [frozenset({4})]
    v = rr.classify_solution(f, R, {0, 1, 4, 5})
    assert isinstance(v, rr.Violation)
    T = rr.em_to_sts_or_coh(f, R)
    assert rr.four_cycle(T, v) == (0, 4, 1, 5)
    assert not is_transitive(T, {0, 1, 4, 5})[0]
    with pytest.raises(ValueError):
        rr.check_transitive_classification(f, R, {0, 1, 4, 5})


# -- 1-tail rainbows and freeness -------------------------------------------

def test_one_tail_rainbow_growth():
    X, exhausted = rr.one_tail_rainbow(monks(20), rr.least_outside, target=8)
    assert X == set(range(8)) and not exhausted
    for seed in range(50):
        f = rr.random_two_bounded(seed, 2, 30)
        X, _ = rr.one_tail_rainbow(f, rr.least_outside, target=8)
        assert is_1tail_rainbow(f, X)
        assert len(X) == 8


def test_freeness_coloring():
    g = rr.freeness_coloring(monks(12), range(12))
    assert set(g.table.values()) == {0}
    f = monks(12)
    f.table[(3, 9)] = f.table[(5, 9)]
    X = range(12)
    g = rr.freeness_coloring(f, X)
    assert g.table[(5, 9)] == 3
    assert not is_free(g, {3, 5, 9})
    for seed in range(5):
        f = rr.random_two_bounded(seed, 2, 24)
        X, _ = rr.one_tail_rainbow(f, rr.least_outside, target=12)
        g = rr.freeness_coloring(f, X)
        for m in range(3, 7):
            for H in find_free_sets(g, m, domain=sorted(X)):
                assert is_rainbow(f, H)


def test_freeness_rejects_uncertified_set():
    f = monks(8)
    f.table[(1, 3)] = f.table[(0, 2)]
    with pytest.raises(rr.NotApplicable):
        rr.freeness_coloring(f, range(8))


def test_srrt_lift():
    g, fl = rr.srrt_lift_check(StageColoring.from_function(2, 12, lambda x, s: 0), 3)
    assert fl["rainbow_stable"]
    for seed in range(50):
        f = random_stable_pairs(seed, 14, 6)
        g, fl = rr.srrt_lift_check(f, 4)
        assert fl["rainbow_stable"]
