"""Exhaustive searches for solutions, and the conversions between escaping
and diagonalizing functions."""

from .core_model import (
    increasing_tuples, is_free, is_rainbow, is_thin, is_transitive,
    pair_decode, pair_encode, tuple_encode,
)


class BudgetExhausted(Exception):
    """Raised by a search stream that ran out of budget before finishing."""

    def __init__(self, visited):
        super().__init__(f"search budget exhausted after {visited} nodes")
        self.visited = visited


def _colex_search(domain, m, ok, budget):
    """Yield every m-subset of `domain` accepted by the hereditary predicate
    `ok`, in colex order.  Sets are grown from the top element down so that
    partial sets can be pruned."""
    domain = sorted(domain)
    visited = 0

    def rec(chosen, limit, need):
        nonlocal visited
        if need == 0:
            yield frozenset(chosen)
            return
        for j in range(need - 1, limit):
            visited += 1
            if budget is not None and visited > budget:
                raise BudgetExhausted(visited)
            cand = chosen + [domain[j]]
            if ok(cand):
                yield from rec(cand, j, need - 1)

    if m > len(domain):
        return
    yield from rec([], len(domain), m)


def find_rainbows(f, m, budget=None, domain=None):
    domain = range(f.domain_size) if domain is None else domain
    return _colex_search(domain, m, lambda A: is_rainbow(f, A), budget)


def find_thin_sets(f, m, color_bound, budget=None, domain=None, avoid=None):
    """Sets whose image misses some color below the bound (or the given
    `avoid` color)."""
    domain = range(f.domain_size) if domain is None else domain
    if avoid is None:
        ok = lambda A: is_thin(f, A, color_bound) is not None
    else:
        ok = lambda A: all(f.table[t] != avoid for t in increasing_tuples(A, f.arity))
    return _colex_search(domain, m, ok, budget)


def find_free_sets(f, m, budget=None, domain=None):
    domain = range(f.domain_size) if domain is None else domain
    return _colex_search(domain, m, lambda A: is_free(f, A), budget)


def find_transitive_subtournaments(T, m, budget=None, domain=None):
    domain = range(T.domain_size) if domain is None else domain
    return _colex_search(domain, m, lambda H: is_transitive(T, H)[0], budget)


def is_increasing_phomogeneous(f, H1, H2):
    """Color shared by f(x, y) over x in H1, y in H2, x < y; None if two
    colors appear.  With no such pairs any color works and 0 is returned."""
    seen = {f.table[(x, y)] for x in H1 for y in H2 if x < y}
    if len(seen) > 1:
        return None
    return next(iter(seen), 0)


def find_increasing_phomogeneous(f, m, budget=None, domain=None):
    """Pairs (H1, H2) of m-sets, ordered by H1 then H2 in colex order."""
    if f.arity != 2:
        raise ValueError("polarized search is for colorings of pairs")
    domain = sorted(range(f.domain_size) if domain is None else domain)
    visited = 0
    for H1 in _colex_search(domain, m, lambda A: True, None):

        def ok(H2):
            nonlocal visited
            visited += 1
            if budget is not None and visited > budget:
                raise BudgetExhausted(visited)
            return is_increasing_phomogeneous(f, H1, H2) is not None

        for H2 in _colex_search(domain, m, ok, None):
            yield H1, H2


# -- escaping and diagonalizing ---------------------------------------------

def escaping_from_family(family, e, n):
    """Least natural outside X_e; it is at most n whenever |X_e| <= n."""
    X = set(family(e))
    v = 0
    while v in X:
        v += 1
    return v


def diagonalizer_from_escaping(h, escaping=escaping_from_family):
    """Total d with d(x) != h(x) wherever the partial table h is defined.

    h is a dict (missing keys are undefined).  Returns a function.
    """
    family = lambda e: {h[e]} if e in h else set()
    return lambda x: escaping(family, x, 1)


def tuple_component(n, i):
    """i-th component of the tuple coded by n, read as if the tuple had more
    than i + 1 entries."""
    for _ in range(i):
        n = pair_decode(n)[1]
    return pair_decode(n)[0]


def escaping_from_diagonalizer(family, size, diag_builder=None):
    """Escaping function for a family whose sizes are known exactly.

    `family(e)` lists X_e; `size(e)` is |X_e|.  The component function
    h(<e,i>) reads the i-th component of the i-th element of X_e; the result
    maps (e, s) to the code of <g(<e,0>), ..., g(<e,s>)> for a g that
    diagonalizes h.
    """
    if diag_builder is None:
        diag_builder = diagonalizer_from_escaping

    def h_at(c):
        e, i = pair_decode(c)
        if i < size(e):
            n = sorted(family(e))[i]
            return tuple_component(n, i)
        return 0

    class _Lazy(dict):
        def __missing__(self, c):
            v = h_at(c)
            self[c] = v
            return v

        def __contains__(self, c):
            return True

    g = diag_builder(_Lazy())

    def f(e, s):
        return tuple_encode([g(pair_encode(e, i)) for i in range(s + 1)])

    return f


def prerainbow_to_rainbow(f, X):
    """Greedy: scan X upward and keep z when f stays injective on the pairs
    of the kept set.  Returns (Y, stalled) where stalled lists rejected
    points."""
    Y, colors, stalled = [], set(), []
    for z in sorted(X):
        new = [f.table[(y, z)] for y in Y]
        if len(set(new)) == len(new) and not colors.intersection(new):
            Y.append(z)
            colors.update(new)
        else:
            stalled.append(z)
    return frozenset(Y), stalled
