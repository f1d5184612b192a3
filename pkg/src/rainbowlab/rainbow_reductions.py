"""Transformations between rainbow, thin, free and stable instances, each
with the map that turns solutions of the new instance into solutions of the
old one."""

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .core_model import (
    StageColoring, Tournament, _StageIndex, _window_for, classify_stability,
    encode_finite_set, enumerate_finite_set, increasing_tuples, is_1tail_rainbow,
    is_stable, is_transitive, pair_decode, pair_encode, tail_relation,
    tuple_encode, tuple_rank, tuple_unrank,
)
from .oracles import LimitFunction


class NotApplicable(ValueError):
    """The input coloring lacks the property a construction relies on."""


# -- lowering a limit coloring by one jump ----------------------------------

def approximation_for(f, seed, settle=1, value_bound=None):
    """Random stage approximation of the coloring f of n-tuples: a
    LimitFunction indexed by tuple rank whose row for x settles on f(x) at
    stage max(x) + settle (or earlier)."""
    rng = random.Random(seed)
    vb = value_bound or (max(f.colors(), default=0) + 2)
    N = f.domain_size
    rows, stab = [], []
    tuples = sorted(f.table, key=tuple_rank)
    for x in tuples:
        t = min(N - 1, rng.randrange(max(x) + settle + 1))
        row = [rng.randrange(vb) if s < t else f.table[x] for s in range(N)]
        rows.append(row)
        stab.append(t)
    return LimitFunction(rows, stab)


def jump_lower(h, n, N):
    """h is a LimitFunction indexed by the colex rank of n-tuples.  Returns
    g on (n+1)-tuples: g(x, s) = <h(x,s), s, 0> when at most one earlier tuple
    shares that approximation at stage s, otherwise <rank(x), s, 1>."""
    table = {}
    for s in range(N):
        counts = {}
        for x in sorted(combinations(range(s), n), key=tuple_rank):
            r = tuple_rank(x)
            v = h.approx_at(r, s)
            before = counts.get(v, 0)
            counts[v] = before + 1
            if before <= 1:
                table[x + (s,)] = tuple_encode([v, s, 0])
            else:
                table[x + (s,)] = tuple_encode([r, s, 1])
    return StageColoring(n + 1, N, table)


def limit_coloring(h, n, N):
    """The coloring of n-tuples that h converges to."""
    return StageColoring(n, N, {x: h.limit_value(tuple_rank(x))
                                for x in combinations(range(N), n)})


def rainbow_descent_violation(f, h, A):
    """For a g-rainbow A, look for f-colliding tuples x, y of A together with
    a stage s in A past max(x) at which every tuple up to x has settled.  The
    lemma says none exists; returns the witness (y, x, s) if one does."""
    n = f.arity
    A = sorted(A)
    tuples = sorted(combinations(A, n), key=tuple_rank)
    for j, x in enumerate(tuples):
        rx = tuple_rank(x)
        settled = max(h.stab[r] for r in range(rx + 1))
        for y in tuples[:j]:
            if f.table[y] != f.table[x]:
                continue
            for s in A:
                if s > max(x) and s >= settled:
                    return y, x, s
    return None


def compose_jump_lower(k, seed, N):
    """Start from a random 2-bounded coloring of points and lower it k times.
    Returns the list of (coloring, approximation used to lower it)."""
    rng = random.Random(seed)
    f = random_two_bounded(rng.randrange(1 << 30), 1, N)
    levels = [(f, None)]
    for depth in range(k):
        cur = levels[-1][0]
        h = approximation_for(cur, rng.randrange(1 << 30))
        levels.append((jump_lower(h, cur.arity, N), h))
    return levels


def random_two_bounded(seed, arity, N, fill=0.5):
    """Random coloring where some tuples share a color in pairs and the rest
    get their own color."""
    rng = random.Random(seed)
    tuples = list(combinations(range(N), arity))
    rng.shuffle(tuples)
    table, color = {}, 0
    i = 0
    while i < len(tuples):
        if i + 1 < len(tuples) and rng.random() < fill:
            table[tuples[i]] = table[tuples[i + 1]] = color
            i += 2
        else:
            table[tuples[i]] = color
            i += 1
        color += 1
    return StageColoring(arity, N, table)


# -- thin sets for limits ---------------------------------------------------

def limit_lift_thin(f, h, sets, color):
    """For each set A avoiding `color` under the stage approximation of f,
    check that A avoids `color` for f on every tuple x of A that has a stage
    s in A with s > max(x) past the settling stage of x.  Returns a list of
    (A, ok)."""
    n = f.arity
    g = approximation_coloring(h, n, f.domain_size)
    out = []
    for A in sets:
        A = sorted(A)
        if not avoids(g, A, color):
            continue
        ok = True
        for x in combinations(A, n):
            t = h.stab[tuple_rank(x)]
            if any(s > max(x) and s >= t for s in A) and f.table[x] == color:
                ok = False
                break
        out.append((frozenset(A), ok))
    return out


def approximation_coloring(h, n, N):
    table = {}
    for s in range(N):
        for x in combinations(range(s), n):
            table[x + (s,)] = h.approx_at(tuple_rank(x), s)
    return StageColoring(n + 1, N, table)


# -- rainbows to thin sets --------------------------------------------------

def fresh(t):
    """Fresh color for tuple t, disjoint from other fresh colors."""
    return tuple_rank(t)


def rainbow_to_thin(f, N=None):
    """g(y, z) = g(x, z) when f(z) codes the pair <x, y> with x < y < min z;
    every other tuple gets a fresh color."""
    N = f.domain_size if N is None else N
    n = f.arity
    table = {}
    for t in combinations(range(N), n + 1):
        table[t] = fresh(t)
    for z in combinations(range(N), n):
        x, y = pair_decode(f.table[z])
        if x < y < z[0]:
            table[(y,) + z] = table[(x,) + z]
    return StageColoring(n + 1, N, table)


def trim_solution(H):
    """(x, y, H \\ [0, y]) for the two least x < y of H; the trimmed set is
    thin for f avoiding <x, y>."""
    xs = sorted(H)
    if len(xs) < 2:
        raise ValueError("need two elements to trim")
    x, y = xs[0], xs[1]
    return x, y, frozenset(v for v in xs if v > y)


def avoids(f, A, color):
    return all(f.table[t] != color for t in increasing_tuples(A, f.arity))


# -- rainbows to free sets --------------------------------------------------

def ordered_pair_code(x, y):
    """Bijection from pairs x < y onto the naturals, increasing in both
    coordinates."""
    if not x < y:
        raise ValueError("ordered pair code needs x < y")
    return tuple_rank((x, y))


def ordered_pair_decode(c):
    return tuple_unrank(c, 2)


def trap_violation(f, t):
    """First tuple z (1-based t) with not z_{t-1} <= f(z) < z_t, where
    z_0 = -inf and z_{n+1} = +inf.  A value that is a coordinate of z never
    counts against freeness and is accepted."""
    n = f.arity
    for z in f.table:
        v = f.table[z]
        if v in z:
            continue
        lo = z[t - 2] if t >= 2 else None
        hi = z[t - 1] if t <= n else None
        if (lo is not None and v < lo) or (hi is not None and v >= hi):
            return z
    return None


def interleave(z, t, u):
    """(x_1, y_1, ..., x_{t-1}, y_{t-1}, u, x_t, y_t, ...) for z_i = <x_i, y_i>."""
    pairs = [ordered_pair_decode(c) for c in z]
    out = []
    for i, (x, y) in enumerate(pairs):
        if i == t - 1:
            out.append(u)
        out += [x, y]
    if t - 1 == len(pairs):
        out.append(u)
    return tuple(out)


def well_formed(seq):
    return all(a < b for a, b in zip(seq, seq[1:]))


def rainbow_to_free(f, t, N):
    """f colors n-tuples of ordered-pair codes and is t-trapped.  Returns g on
    (2n+1)-tuples of [0, N)."""
    bad = trap_violation(f, t)
    if bad is not None:
        raise NotApplicable(f"f is not {t}-trapped at {bad}")
    n = f.arity
    table = {w: fresh(w) for w in combinations(range(N), 2 * n + 1)}
    codes = range(min(f.domain_size, comb(N, 2)))
    for z in combinations(codes, n):
        v = f.table[z]
        if v >= comb(N, 2):
            continue
        x, y = ordered_pair_decode(v)
        wy, wx = interleave(z, t, y), interleave(z, t, x)
        if well_formed(wy) and well_formed(wx) and wy[-1] < N and wx[-1] < N:
            table[wy] = table[wx]
    return StageColoring(2 * n + 1, N, table)


def pairs_solution(H):
    xs = sorted(H)
    return frozenset(ordered_pair_code(xs[2 * i], xs[2 * i + 1]) for i in range(len(xs) // 2))


# -- rainbow-stable to strongly rainbow-stable ------------------------------

def stabilize_strongly(f, w):
    """Copy f's collisions stage by stage, then pair the leftover points in
    order; an odd leftover keeps a fresh color."""
    if not classify_stability(f, w)["rainbow_stable"]:
        raise NotApplicable("f is not rainbow-stable")
    N = f.domain_size
    table = {}
    for s in range(N):
        by_color = {}
        for x in range(s):
            by_color.setdefault(f.table[(x, s)], []).append(x)
        left = []
        for xs in by_color.values():
            if len(xs) >= 2:
                for x in xs:
                    table[(x, s)] = 3 * pair_encode(xs[0], s)
            else:
                left.append(xs[0])
        left.sort()
        for j in range(0, len(left) - 1, 2):
            table[(left[j], s)] = table[(left[j + 1], s)] = 3 * pair_encode(left[j], s)
        if len(left) % 2:
            table[(left[-1], s)] = 3 * pair_encode(left[-1], s) + 1
    return StageColoring(2, N, table)


# -- stable Ramsey to stable free sets --------------------------------------

def srt_to_sfs(f, cap=None):
    """Six-coloring g from a stable f, following the descent h that replaces
    the coordinate i(xy) by f(xy)."""
    N = f.domain_size
    cap = N * N if cap is None else cap

    def in_S(p):
        v = f.table[p]
        return v < p[1] and v not in p

    def idx(p):
        v = f.table[p]
        return 1 if v < p[0] else 2

    def h(p):
        v = f.table[p]
        return (v, p[1]) if idx(p) == 1 else (p[0], v)

    def c(p):
        i0, q, j = idx(p), p, 0
        while in_S(q) and idx(q) == i0:
            q = h(q)
            j += 1
            if j > cap:
                raise RuntimeError(f"descent from {p} exceeded {cap} steps")
        return j

    table = {}
    for p in combinations(range(N), 2):
        v = f.table[p]
        if v in p:
            table[p] = 0
        elif v > p[1]:
            table[p] = 1
        else:
            table[p] = 2 * idx(p) + c(p) % 2
    return StageColoring(2, N, table)


# -- Bad sets and prerainbows -----------------------------------------------

@dataclass
class BadFamily:
    """X_e = Bad(D_e) where D_e is the finite set coded by e in binary."""
    f: StageColoring
    window: object
    bad: dict
    strongly: bool

    def members(self, D):
        out = set()
        for x in D:
            out |= self.bad.get(x, {x})
        return frozenset(out)

    def __call__(self, e):
        return self.members(enumerate_finite_set(e))

    def size_formula(self, D):
        """2|D| - 2 #{pairs of D with equal Bad}; exact when f is strongly
        rainbow-stable."""
        D = sorted(D)
        same = sum(1 for x, y in combinations(D, 2) if self.bad[x] == self.bad[y])
        return 2 * len(D) - 2 * same

    def size_bound(self, D):
        return 2 * len(D)


def bad_family(f, w):
    w = _window_for(f, w)
    flags = classify_stability(f, w)
    if not flags["weakly_rainbow_stable"]:
        raise NotApplicable("f is not weakly rainbow-stable")
    idx = _StageIndex(f, w)
    bad = {}
    people = range(w.start)
    for x in people:
        bad[x] = frozenset({x} | {y for y in people
                                  if y != x and tail_relation(f, (x,), (y,), w, idx) == "eq"})
    return BadFamily(f, w, bad, flags["strongly_rainbow_stable"])


def escaping_to_prerainbow(fam, escape, target=None, weak=False):
    """R_{k+1} = R_k + escape(X_e, n) for D_e = R_k, with n = 2|D_e| (or
    2 C(|D_e|, 2) + ... in the weak case).  Stops when the escape leaves the
    people range or the target size is reached.  Returns (R, exhausted)."""
    people = len(fam.bad)
    R = set()
    while target is None or len(R) < target:
        e = encode_finite_set(R)
        n = 2 * comb(len(R), 2) if weak else 2 * len(R)
        v = escape(fam, e, n)
        if v >= people or v in R:
            return frozenset(R), True
        R.add(v)
    return frozenset(R), False


def wsrrt_to_jump_rainbow(f, w):
    """g(x) = rank of the least y <= x (colex) whose colors agree with x on
    the tail; a coloring of n-tuples below the window start."""
    w = _window_for(f, w)
    if not classify_stability(f, w)["weakly_rainbow_stable"]:
        raise NotApplicable("f is not weakly rainbow-stable")
    idx = _StageIndex(f, w)
    n = f.arity - 1
    people = sorted(combinations(range(w.start), n), key=tuple_rank)
    table = {}
    for j, x in enumerate(people):
        for y in people[:j + 1]:
            if y == x or tail_relation(f, x, y, w, idx) == "eq":
                table[x] = tuple_rank(y)
                break
    return StageColoring(n, w.start, table)


# -- tournaments from stable colorings and set sequences ---------------------

def em_to_sts_or_coh(f, R):
    """T(x, s) holds when f(x, s) = 2i with s in R_i, or f(x, s) = 2i+1 with
    s not in R_i; otherwise T(s, x)."""
    N = f.domain_size
    T = Tournament(N)
    for (x, s), c in f.table.items():
        i, odd = divmod(c, 2)
        if i < len(R):
            inside = s in R[i]
            T.set(x, s, inside if not odd else not inside)
        else:
            T.set(s, x, True)
    return T


def stability_threshold(f):
    """Least t with f(x, s) = f(x, N-1) for all x < s and s >= t."""
    N = f.domain_size
    t = 0
    for (x, s), c in f.table.items():
        if x < N - 1 and c != f.table[(x, N - 1)]:
            t = max(t, s + 1)
    return t


@dataclass(frozen=True)
class ThinFor:
    color: int


@dataclass(frozen=True)
class Cohesive:
    cuts: tuple


@dataclass(frozen=True)
class Violation:
    index: int
    witnesses: tuple


def classify_solution(f, R, H, color_bound=None):
    """Classify a transitive set H as thin for the limit coloring, cohesive
    for R past per-index cuts, or a violation of the dichotomy."""
    N = f.domain_size
    k = len(R)
    color_bound = 2 * k if color_bound is None else color_bound
    H = sorted(H)
    t0 = stability_threshold(f)
    limit = {x: f.table[(x, N - 1)] for x in H if x < N - 1}
    image = set(limit.values())
    for c in range(color_bound):
        if c not in image:
            return ThinFor(c)
    cuts = []
    for i in range(k):
        x = min(v for v in limit if limit[v] == 2 * i)
        y = min(v for v in limit if limit[v] == 2 * i + 1)
        b = max(x + 1, y + 1, t0)
        above = [s for s in H if s >= b]
        ins = [s for s in above if s in R[i]]
        outs = [s for s in above if s not in R[i]]
        if ins and outs:
            return Violation(i, (x, y, ins[0], outs[0]))
        cuts.append(b)
    return Cohesive(tuple(cuts))


def four_cycle(T, violation):
    """The cycle x -> s0 -> y -> s1 -> x named by a violation, if T has it."""
    x, y, s0, s1 = violation.witnesses
    if T(x, s0) and T(s0, y) and T(y, s1) and T(s1, x):
        return (x, s0, y, s1)
    return None


def check_transitive_classification(f, R, H):
    ok, cyc = is_transitive(em_to_sts_or_coh(f, R), H)
    if not ok:
        raise ValueError(f"H is not transitive: {cyc}")
    return classify_solution(f, R, H)


# -- 1-tail rainbows and free sets ------------------------------------------

def one_tail_rainbow(f, escape, target=None):
    """Grow H by escaping the set of points whose addition breaks 1-tail
    rainbowness.  `escape(blocking, bound)` must return a point outside the
    blocking set whenever the set has at most `bound` members.  Returns
    (H, exhausted)."""
    N = f.domain_size
    n = f.arity - 1
    H = []
    while target is None or len(H) < target:
        blocking = set(H) | {x for x in range(N) if x not in H
                             and not is_1tail_rainbow(f, H + [x])}
        v = escape(blocking, comb(len(H), n))
        if v >= N or v in blocking:
            return frozenset(H), True
        H.append(v)
    return frozenset(H), False


def least_outside(blocking, bound):
    v = 0
    while v in blocking:
        v += 1
    return v


def freeness_coloring(f, X):
    """g(y, s) = x for every collision f(x, s) = f(y, s) with x < y < s,
    otherwise 0."""
    X = set(X)
    if not is_1tail_rainbow(f, X):
        raise NotApplicable("X is not a 1-tail rainbow for f")
    N = f.domain_size
    table = {}
    for s in range(N):
        by_color = {}
        for x in range(s):
            by_color.setdefault(f.table[(x, s)], []).append(x)
        for xs in by_color.values():
            if len(xs) == 2:
                table[(xs[1], s)] = xs[0]
        for x in range(s):
            table.setdefault((x, s), 0)
    return StageColoring(2, N, table)


def srrt_lift_check(f, w):
    """rainbow_to_thin for a stable f, plus the rainbow-stability check of the
    result.  Returns (g, flags)."""
    if not is_stable(f, w):
        raise NotApplicable("f is not stable")
    g = rainbow_to_thin(f)
    return g, classify_stability(g, w)
