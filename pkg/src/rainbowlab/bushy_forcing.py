"""Bushy-tree forcing on a bounded universe.

Increasing strings over [0, M) are subsets of [0, M), so they are stored as
bitmasks: bit v is set when v occurs in the string.  Appending x to a string
whose last entry is below x sets a higher bit, so every child has a larger
mask than its parent and one descending pass over all masks decides
bigness everywhere at once.
"""

import random
from dataclasses import dataclass, field

from .core_model import (
    _people, _StageIndex, _window_for, classify_stability, is_prerainbow, tail_relation,
)
from .oracles import MockFunctional, random_functional


def to_mask(sigma):
    m, last = 0, -1
    for v in sigma:
        if v <= last:
            raise ValueError(f"{tuple(sigma)} is not increasing")
        m |= 1 << v
        last = v
    return m


def to_string(mask):
    out, v = [], 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def _last(mask):
    return mask.bit_length() - 1


class BadSet:
    """Set of increasing strings with values below M and length at most L,
    kept as a membership table indexed by mask."""

    def __init__(self, M, L, table):
        if len(table) != 1 << M:
            raise ValueError("membership table does not match the universe")
        self.M, self.L = M, L
        self.table = bytearray(table)
        self.closed_under = set()
        if L < M:
            for mask in range(1 << M):
                if self.table[mask] and mask.bit_count() > L:
                    self.table[mask] = 0

    @classmethod
    def empty(cls, M, L=None):
        return cls(M, M if L is None else L, bytearray(1 << M))

    @classmethod
    def from_strings(cls, strings, M, L=None):
        t = bytearray(1 << M)
        for s in strings:
            if s and max(s) >= M:
                raise ValueError(f"{tuple(s)} leaves the universe [0, {M})")
            t[to_mask(s)] = 1
        return cls(M, M if L is None else L, t)

    @classmethod
    def from_predicate(cls, pred, M, L=None):
        return cls(M, M if L is None else L,
                   bytearray(1 if pred(to_string(m)) else 0 for m in range(1 << M)))

    def __contains__(self, sigma):
        return bool(self.table[to_mask(sigma)])

    def union(self, other):
        self._same(other)
        return BadSet(self.M, min(self.L, other.L), bytes(a | b for a, b in zip(self.table, other.table)))

    def members(self):
        return [to_string(m) for m in range(1 << self.M) if self.table[m]]

    def __eq__(self, other):
        return isinstance(other, BadSet) and (self.M, self.L) == (other.M, other.L) and self.table == other.table

    def __len__(self):
        return sum(self.table)

    def __repr__(self):
        return f"BadSet(M={self.M}, L={self.L}, size={len(self)})"

    def _same(self, other):
        if self.M != other.M:
            raise ValueError("universes differ")


# -- bound functions -------------------------------------------------------

def identity_bound(L):
    return tuple(range(L + 1))


def successor_bound(L):
    return tuple(n + 1 for n in range(L + 1))


def double(g):
    return tuple(2 * v for v in g)


def add_bounds(g1, g2):
    return tuple(a + b for a, b in zip(g1, g2))


# -- bigness ---------------------------------------------------------------

@dataclass
class Big:
    stem: tuple
    g: tuple
    _big: bytearray = field(repr=False)
    M: int = 0

    def children(self, sigma):
        """The least g(|sigma|) big one-step extensions (one if g is 0)."""
        m = to_mask(sigma)
        need = max(1, self.g[len(sigma)])
        out = []
        for x in range(_last(m) + 1, self.M):
            if self._big[m | 1 << x]:
                out.append(tuple(sigma) + (x,))
                if len(out) == need:
                    break
        return out

    def tree(self, B):
        """Materialize the witness tree down to members of B."""
        nodes, stack = [], [self.stem]
        while stack:
            tau = stack.pop()
            nodes.append(tau)
            if tau not in B:
                stack.extend(self.children(tau))
        return nodes


class Small:
    def __repr__(self):
        return "Small"


class Undecided:
    def __init__(self, stem):
        self.stem = stem

    def __repr__(self):
        return f"Undecided({self.stem})"


def _supply(mask, M):
    return M - 1 - _last(mask)


def big_table(B, g, capped=False):
    """big[mask] for every string: in B, or (below length L) at least g(|mask|)
    big children, and at least one.  With `capped` the quota is cut to the
    number of children the universe allows."""
    M, L = B.M, B.L
    if len(g) <= L:
        raise ValueError(f"bound table covers lengths < {len(g)}, need {L + 1}")
    big = bytearray(B.table)
    for mask in range((1 << M) - 1, -1, -1):
        if big[mask]:
            continue
        n = mask.bit_count()
        if n >= L:
            continue
        need = max(1, g[n])
        if capped:
            need = max(1, min(need, _supply(mask, M)))
        cnt = 0
        for x in range(_last(mask) + 1, M):
            if big[mask | 1 << x]:
                cnt += 1
                if cnt >= need:
                    big[mask] = 1
                    break
    return big


def is_big(B, g, sigma=()):
    """Big(witness) / Small / Undecided for B above sigma in the universe
    [0, M).  Undecided means bigness fails only because some node has fewer
    children available than its quota."""
    sigma = tuple(sigma)
    big = big_table(B, g)
    m = to_mask(sigma)
    if big[m]:
        return Big(sigma, tuple(g), big, B.M)
    if big_table(B, g, capped=True)[m]:
        return Undecided(sigma)
    return Small()


def is_small(B, g, sigma=()):
    return isinstance(is_big(B, g, sigma), Small)


def closure(B, g, check_above=None):
    """Strings above which B is g-big.  The result is re-checked to be
    g-closed; with `check_above`, it must stay g-small above that string
    whenever B is."""
    big = big_table(B, g)
    C = BadSet(B.M, B.L, big)
    again = big_table(C, g)
    assert again == C.table, "closure is not closed"
    C.closed_under.add(tuple(g))
    if check_above is not None and not big[to_mask(check_above)]:
        assert not again[to_mask(check_above)], "closure became big"
    return C


def is_closed(B, g):
    if tuple(g) in B.closed_under:
        return True
    ok = big_table(B, g) == B.table
    if ok:
        B.closed_under.add(tuple(g))
    return ok


# -- conditions ------------------------------------------------------------

class ConditionError(ValueError):
    pass


@dataclass
class Condition:
    sigma: tuple
    g: tuple
    B: BadSet
    history: list = field(default_factory=list)

    def certify(self):
        if not is_closed(self.B, self.g):
            raise ConditionError("bad set is not closed under its bound")
        # for a closed set, big above sigma means sigma is a member
        if self.B.table[to_mask(self.sigma)]:
            raise ConditionError(f"bad set is big above {self.sigma}")
        return self


def _first_element(sigma):
    # fresh strings start at 1
    return sigma[-1] + 1 if sigma else 1


def extend_with_element(c):
    """(sigma x, g, B) for the least admissible x past the last entry."""
    m = to_mask(c.sigma)
    excluded = []
    for x in range(_first_element(c.sigma), c.B.M):
        if c.B.table[m | 1 << x]:
            excluded.append(x)
            continue
        need = max(1, c.g[len(c.sigma)])
        assert len(excluded) <= need - 1, f"{len(excluded)} bad extensions exceed the bound"
        return Condition(c.sigma + (x,), c.g, c.B, c.history).certify()
    raise ConditionError(f"universe [0, {c.B.M}) exhausted above {c.sigma}")


def halting_set(phi, M, L):
    """Strings over [0, M) on which the functional halts."""
    t = bytearray(1 << M)
    mins = {to_mask(m) for m in phi.halting if not m or max(m) < M}
    for mask in range(1 << M):
        if mask in mins:
            t[mask] = 1
        elif mask:
            t[mask] = t[mask ^ (1 << _last(mask))]
    return BadSet(M, L, t)


def force_jump(c, e, phi):
    """Decide whether phi halts along every generic extension of c.

    Returns (condition, "halt" | "diverge").  Raises ConditionError when the
    universe is too small to decide."""
    D = halting_set(phi, c.B.M, c.B.L)
    res = is_big(D, c.g, c.sigma)
    if isinstance(res, Undecided):
        raise ConditionError(f"functional {e}: bigness undecided above {c.sigma}")
    if isinstance(res, Big):
        tau = c.sigma
        while tau not in D:
            kids = [k for k in res.children(tau) if k not in c.B]
            if not kids:
                raise AssertionError(f"no witness child of {tau} avoids the bad set")
            tau = kids[0]
        out = Condition(tau, c.g, c.B, c.history + [(e, "halt", tau)])
        return out.certify(), "halt"
    g2 = double(c.g)
    U = c.B.union(D)
    assert not big_table(U, g2)[to_mask(c.sigma)], "union of small sets is big"
    C = closure(U, g2, check_above=c.sigma)
    out = Condition(c.sigma, g2, C, c.history + [(e, "diverge", c.sigma)])
    return out.certify(), "diverge"


# -- the bad set of a weakly rainbow-stable coloring -----------------------

def tail_spouses(f, w, M):
    """partner[x] = y for the pairs x != y < M that are tail-married."""
    w = _window_for(f, w)
    idx = _StageIndex(f, w)
    people = [p[0] for p in _people(f, w) if p[0] < M]
    partner = {}
    for s in w.stages():
        for heads in idx.by_stage[s].values():
            hs = [t[0] for t in heads if t[0] in people]
            for i, x in enumerate(hs):
                for y in hs[i + 1:]:
                    if tail_relation(f, (x,), (y,), w, idx) == "eq":
                        if partner.get(x, y) != y or partner.get(y, x) != x:
                            raise ValueError(f"{x} has two tail partners")
                        partner[x], partner[y] = y, x
    return partner


def build_Bf(f, w, M=None, L=None):
    """Strings containing a tail-married pair.  Values are limited to people
    (points below the window) and to M."""
    w = _window_for(f, w)
    if f.arity != 2:
        raise ValueError("bad set is defined for colorings of pairs")
    if not classify_stability(f, w)["weakly_rainbow_stable"]:
        raise ValueError("coloring is not weakly rainbow-stable")
    M = w.start if M is None else min(M, w.start)
    L = M if L is None else L
    partner = tail_spouses(f, w, M)
    pmask = [1 << partner[x] if x in partner else 0 for x in range(M)]
    t = bytearray(1 << M)
    for mask in range(1, 1 << M):
        x = _last(mask)
        rest = mask ^ (1 << x)
        t[mask] = t[rest] or bool(pmask[x] & rest)
    B = BadSet(M, L, t)
    for mask in range(1 << M):
        if not t[mask]:
            bad = sum(1 for x in range(_last(mask) + 1, M) if t[mask | 1 << x])
            assert bad <= mask.bit_count(), f"{to_string(mask)} has {bad} bad extensions"
    return B


@dataclass
class LowRun:
    G: tuple
    decisions: list
    condition: Condition
    status: str = "ok"
    message: str = ""


def run_low_construction(f, functionals, target, w, M=16, g0=None):
    """Alternate one-element extensions with jump decisions, one per
    functional, until |G| >= target and every functional is decided."""
    w = _window_for(f, w)
    B = build_Bf(f, w, M)
    g = successor_bound(B.L) if g0 is None else tuple(g0)
    c = Condition((), g, closure(B, g, check_above=())).certify()
    decisions = []
    pending = list(enumerate(functionals))
    try:
        while len(c.sigma) < target or pending:
            if len(c.sigma) < target:
                c = extend_with_element(c)
            if pending:
                e, phi = pending.pop(0)
                c, d = force_jump(c, e, phi)
                decisions.append((e, d))
    except ConditionError as exc:
        return LowRun(c.sigma, decisions, c, "stuck", str(exc))
    G = c.sigma
    assert is_prerainbow(f, G, w), f"{G} is not a prerainbow"
    return LowRun(G, decisions, c)


# -- instances -------------------------------------------------------------

def random_bad_set(rng, M, L, density=0.15):
    strings = [to_string(m) for m in range(1 << M) if m.bit_count() <= L]
    return BadSet.from_strings([s for s in strings if rng.random() < density], M, L)


def random_bound(rng, L, cap=3):
    return tuple(rng.randrange(0, cap + 1) for _ in range(L + 1))


def value_trigger(v):
    """Functional halting exactly on the strings in which v occurs."""
    return MockFunctional([to_string(m) + (v,) for m in range(1 << v)])


def random_functionals(seed, count, M, max_len=3):
    """A mix of sparse random functionals, value triggers and the functional
    that halts everywhere."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        r = rng.random()
        if r < 0.15:
            out.append(MockFunctional([()]))
        elif r < 0.45:
            out.append(value_trigger(rng.randrange(min(M, 12))))
        else:
            out.append(random_functional(rng.randrange(1 << 30), M, max_len))
    return out
