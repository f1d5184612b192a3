import random
from functools import lru_cache
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from rainbowlab import bushy_forcing as bf
from rainbowlab.core_model import StageColoring, is_prerainbow, is_rainbow, pair_encode
from rainbowlab.generators import stability_instance
from rainbowlab.oracles import MockFunctional
from rainbowlab.solvers import prerainbow_to_rainbow


def big_by_recursion(B, g, sigma):
    """Bigness straight from the definition, on tuples."""
    members = {tuple(s) for s in B.members()}

    @lru_cache(maxsize=None)
    def big(t):
        if t in members:
            return True
        if len(t) >= B.L:
            return False
        start = t[-1] + 1 if t else 0
        kids = sum(1 for x in range(start, B.M) if big(t + (x,)))
        return kids >= max(1, g[len(t)])

    return big(tuple(sigma))


def married(N):
    return StageColoring.from_function(2, N, lambda x, s: pair_encode(x // 2, s))


def monks(N):
    return StageColoring.from_function(2, N, pair_encode)


def test_strings_and_masks():
    assert bf.to_string(bf.to_mask((1, 3, 4))) == (1, 3, 4)
    with pytest.raises(ValueError):
        bf.to_mask((2, 2))


def test_full_fan_is_big():
    B = bf.BadSet.from_strings([(x,) for x in range(6)], 6, 3)
    res = bf.is_big(B, (3, 3, 3, 3))
    assert isinstance(res, bf.Big)
    leaves = [t for t in res.tree(B) if t in B]
    assert len(leaves) == 3 and all(len(t) == 1 for t in leaves)


def test_empty_is_small():
    assert isinstance(bf.is_big(bf.BadSet.empty(6, 3), (1, 1, 1, 1)), bf.Small)


def test_k_extensions_below_quota_are_small():
    for k in range(1, 4):
        B = bf.BadSet.from_strings([(2, 3 + j) for j in range(k)], 8, 2)
        g = (1, k + 1, 1)
        assert isinstance(bf.is_big(B, g, (2,)), bf.Small)


def test_short_supply_is_undecided():
    B = bf.BadSet.from_strings([(x,) for x in range(3)], 3, 2)
    assert isinstance(bf.is_big(B, (5, 5, 5)), bf.Undecided)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(3, 6), st.integers(1, 4))
def test_bigness_matches_recursion(seed, M, L):
    rng = random.Random(seed)
    B = bf.random_bad_set(rng, M, L, density=0.2)
    g = bf.random_bound(rng, L)
    big = bf.big_table(B, g)
    for n in range(L + 1):
        for sigma in combinations(range(M), n):
            assert bool(big[bf.to_mask(sigma)]) == big_by_recursion(B, g, sigma)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_smallness_adds(seed):
    rng = random.Random(seed)
    M, L = rng.randrange(4, 8), rng.randrange(2, 5)
    B1, B2 = bf.random_bad_set(rng, M, L, 0.1), bf.random_bad_set(rng, M, L, 0.1)
    g1, g2 = bf.random_bound(rng, L), bf.random_bound(rng, L)
    if bf.is_small(B1, g1) and bf.is_small(B2, g2):
        assert not isinstance(bf.is_big(B1.union(B2), bf.add_bounds(g1, g2)), bf.Big)


def test_closure_examples():
    g = (2, 2, 2, 2)
    assert len(bf.closure(bf.BadSet.empty(6, 3), g)) == 0
    fan = bf.BadSet.from_strings([(1, x) for x in range(2, 6)], 6, 3)
    C = bf.closure(fan, g)
    assert (1,) in C and (1,) not in fan
    assert bf.closure(C, g) == C
    assert bf.is_closed(C, g)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_closure_idempotent_and_small(seed):
    rng = random.Random(seed)
    M, L = rng.randrange(4, 8), rng.randrange(2, 5)
    B = bf.random_bad_set(rng, M, L, 0.1)
    g = bf.random_bound(rng, L)
    C = bf.closure(B, g)
    assert all(s in C for s in B.members())
    assert bf.closure(C, g) == C
    if bf.is_small(B, g):
        assert bf.is_small(C, g)


def test_extend_with_element():
    L = 6
    g = bf.successor_bound(L)
    c = bf.Condition((), g, bf.BadSet.empty(10, L)).certify()
    c = bf.extend_with_element(c)
    assert c.sigma == (1,)
    c = bf.extend_with_element(c)
    assert c.sigma == (1, 2)
    B = bf.closure(bf.BadSet.from_strings([(1, 2, 3)], 10, L), g)
    c2 = bf.extend_with_element(bf.Condition((1, 2), g, B).certify())
    assert c2.sigma == (1, 2, 4)


def test_extension_avoids_partners():
    f = married(24)
    B = bf.build_Bf(f, 6, 14)
    g = bf.successor_bound(B.L)
    c = bf.Condition((), g, bf.closure(B, g, check_above=())).certify()
    for _ in range(6):
        c = bf.extend_with_element(c)
    assert not any(x // 2 == y // 2 for x, y in combinations(c.sigma, 2))


def test_force_jump_decisions():
    L = 5
    base = bf.Condition((), bf.successor_bound(L), bf.BadSet.empty(10, L)).certify()
    c, d = bf.force_jump(base, 0, MockFunctional([()]))
    assert d == "halt" and c.sigma == ()
    c, d = bf.force_jump(base, 1, MockFunctional([]))
    assert d == "diverge" and c.g == bf.double(base.g)
    c, d = bf.force_jump(base, 2, bf.value_trigger(3))
    assert d == "halt" and 3 in c.sigma


def test_condition_rejects_unclosed_bad_set():
    fan = bf.BadSet.from_strings([(x,) for x in range(6)], 6, 3)
    with pytest.raises(bf.ConditionError):
        bf.Condition((), (1, 1, 1, 1), fan).certify()


def test_bf_examples():
    assert len(bf.build_Bf(monks(20), 6, 10)) == 0
    B = bf.build_Bf(married(20), 6, 10)
    assert (0, 1) in B and (2, 4, 5) in B and (0, 2) not in B
    # a finite universe can only certify "not big" here
    assert not isinstance(bf.is_big(B, bf.successor_bound(B.L)), bf.Big)
    # h(0) = 0 lets a single bad child make the root big
    assert isinstance(bf.is_big(B, bf.identity_bound(B.L)), bf.Big)
    with pytest.raises(ValueError):
        bf.build_Bf(stability_instance(1, 24, 6, "drifting"), 6)


def test_low_run_without_functionals():
    run = bf.run_low_construction(monks(40), [], 8, 8)
    assert run.status == "ok" and run.G == tuple(range(1, 9))


def test_low_run_records_decisions():
    f = stability_instance(3, 40, 8, "mixed", junk=0.2)
    run = bf.run_low_construction(f, [MockFunctional([()])], 8, 8)
    assert run.decisions == [(0, "halt")]
    assert is_prerainbow(f, run.G, 8)
    for seed in range(5):
        fs = bf.random_functionals(seed, 5, 16)
        run = bf.run_low_construction(f, fs, 10, 8)
        assert run.status == "ok" and len(run.decisions) == 5
        assert len(run.G) >= 8 and is_prerainbow(f, run.G, 8)
        Y, _ = prerainbow_to_rainbow(f, run.G)
        assert is_rainbow(f, Y) and len(Y) >= 6


def test_halting_set_upward_closed():
    phi = MockFunctional([(1, 4)])
    D = bf.halting_set(phi, 6, 4)
    assert (1, 4, 5) in D and (1, 4) in D and (1, 5) not in D
