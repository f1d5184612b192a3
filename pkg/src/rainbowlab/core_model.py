"""Codings, colorings, tournaments and the solution predicates shared by
every construction in the package."""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb, isqrt


# -- pairing and tuple codes ------------------------------------------------

def pair_encode(x, y):
    # (x+y)(x+y+1)/2 + x
    n = x + y
    return n * (n + 1) // 2 + x


def pair_decode(c):
    n = (isqrt(8 * c + 1) - 1) // 2
    x = c - n * (n + 1) // 2
    return x, n - x


def tuple_encode(xs):
    """Right fold of the pairing function; a 1-tuple codes as its entry."""
    xs = list(xs)
    if not xs:
        raise ValueError("empty tuple has no code")
    code = xs[-1]
    for x in reversed(xs[:-1]):
        code = pair_encode(x, code)
    return code


def tuple_decode(c, k):
    out = []
    for _ in range(k - 1):
        x, c = pair_decode(c)
        out.append(x)
    out.append(c)
    return tuple(out)


def tuple_rank(xs):
    """Position of an increasing tuple among increasing tuples of its length,
    ordered colexicographically."""
    return sum(comb(x, i + 1) for i, x in enumerate(xs))


@lru_cache(maxsize=1 << 16)
def tuple_unrank(r, k):
    if r < 0:
        raise ValueError("rank must be nonnegative")
    # the top entry x is the largest with comb(x, k) <= r; find it by doubling
    hi = k
    while comb(hi, k) <= r:
        hi *= 2
    out = []
    x = hi
    for i in range(k, 0, -1):
        # largest x with comb(x, i) <= r; entries decrease, so scan down
        while comb(x, i) > r:
            x -= 1
        out.append(x)
        r -= comb(x, i)
        x -= 1
    return tuple(reversed(out))


def tuple_precedes(xs, ys):
    """Graded colex order: shorter tuples first, then colex within a length."""
    if len(xs) != len(ys):
        return len(xs) < len(ys)
    return tuple_rank(xs) < tuple_rank(ys)


# -- finite sets ------------------------------------------------------------

def enumerate_finite_set(e):
    out = set()
    j = 0
    while e:
        if e & 1:
            out.add(j)
        e >>= 1
        j += 1
    return frozenset(out)


def encode_finite_set(D):
    return sum(1 << j for j in D)


@dataclass(frozen=True)
class SizedFamily:
    """Colex enumeration of all sets with `size` elements, each > `above`.

    Index 0 is {above+1, ..., above+size}.
    """
    size: int
    above: int = -1

    def decode(self, j):
        if self.size == 0:
            if j != 0:
                raise ValueError("the empty family has one member")
            return frozenset()
        base = self.above + 1
        return frozenset(base + x for x in tuple_unrank(j, self.size))

    def encode(self, D):
        xs = sorted(D)
        if len(xs) != self.size:
            raise ValueError(f"set has {len(xs)} elements, family wants {self.size}")
        if xs and xs[0] <= self.above:
            raise ValueError(f"set has elements <= {self.above}")
        base = self.above + 1
        return tuple_rank([x - base for x in xs])

    def count_below(self, n):
        """Number of members contained in [0, n)."""
        return comb(max(n - self.above - 1, 0), self.size)


# -- colorings --------------------------------------------------------------

def increasing_tuples(domain, n):
    return combinations(sorted(domain), n)


class StageColoring:
    """A coloring of the increasing n-tuples of [0, N).

    The last coordinate plays the role of the stage.  The table is a dict
    keyed by sorted tuples.
    """

    def __init__(self, arity, domain_size, table=None, default=None):
        self.arity = arity
        self.domain_size = domain_size
        self.table = dict(table or {})
        if default is not None:
            for t in combinations(range(domain_size), arity):
                self.table.setdefault(t, default)
        self.validate()

    @classmethod
    def from_function(cls, arity, domain_size, fn):
        table = {t: fn(*t) for t in combinations(range(domain_size), arity)}
        return cls(arity, domain_size, table)

    def validate(self):
        expected = comb(self.domain_size, self.arity)
        if len(self.table) != expected:
            raise ValueError(f"table has {len(self.table)} entries, expected {expected}")
        for t, c in self.table.items():
            if len(t) != self.arity or list(t) != sorted(set(t)):
                raise ValueError(f"bad key {t}")
            if t[-1] >= self.domain_size:
                raise ValueError(f"key {t} outside domain")
            if not isinstance(c, int) or c < 0:
                raise ValueError(f"color {c!r} at {t} is not a natural")

    def __call__(self, *t):
        return self.table[tuple(t)]

    def __eq__(self, other):
        return (isinstance(other, StageColoring) and self.arity == other.arity
                and self.domain_size == other.domain_size and self.table == other.table)

    def __repr__(self):
        return f"StageColoring(arity={self.arity}, N={self.domain_size})"

    def colors(self):
        return set(self.table.values())

    def preimages(self):
        out = {}
        for t, c in self.table.items():
            out.setdefault(c, []).append(t)
        return out


class Tournament:
    """Orientation of every pair of [0, N).  `beats[(x, y)]` for x < y is True
    when the edge is x -> y."""

    def __init__(self, domain_size, beats=None):
        self.domain_size = domain_size
        self.beats = {}
        for x, y in combinations(range(domain_size), 2):
            self.beats[(x, y)] = True
        if beats:
            for (x, y), v in beats.items():
                self.set(x, y, v)

    def set(self, x, y, value=True):
        """Record T(x, y) = value (so T(y, x) = not value)."""
        if x == y:
            raise ValueError("tournaments are irreflexive")
        if x < y:
            self.beats[(x, y)] = bool(value)
        else:
            self.beats[(y, x)] = not value

    def __call__(self, x, y):
        if x == y:
            return False
        if x < y:
            return self.beats[(x, y)]
        return not self.beats[(y, x)]

    def __eq__(self, other):
        return (isinstance(other, Tournament) and self.domain_size == other.domain_size
                and self.beats == other.beats)

    def check_total(self):
        """Every pair has exactly one orientation and no loops.  Returns a
        failing pair or None."""
        for x in range(self.domain_size):
            if self(x, x):
                return (x, x)
            for y in range(x + 1, self.domain_size):
                if self(x, y) == self(y, x):
                    return (x, y)
        return None


@dataclass(frozen=True)
class TailWindow:
    """Finite rendering of "for all sufficiently large s": the stages
    [S - W, S)."""
    width: int
    stage_bound: int = field(default=None)

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("window width must be at least 1")
        if self.stage_bound is not None and self.width >= self.stage_bound:
            raise ValueError(f"window {self.width} does not fit below stage bound {self.stage_bound}")

    def bind(self, stage_bound):
        return TailWindow(self.width, stage_bound)

    @property
    def start(self):
        return self.stage_bound - self.width

    def stages(self):
        return range(self.start, self.stage_bound)


def _window_for(f, w):
    if isinstance(w, int):
        w = TailWindow(w)
    if w.stage_bound is None:
        w = w.bind(f.domain_size)
    if w.stage_bound > f.domain_size:
        raise ValueError("window reaches past the domain")
    return w


# -- predicates -------------------------------------------------------------

def check_k_bounded(f, k):
    """Returns (ok, witness color)."""
    counts = {}
    for c in f.table.values():
        counts[c] = counts.get(c, 0) + 1
        if counts[c] > k:
            return False, c
    return True, None


def is_rainbow(f, A):
    seen = set()
    for t in increasing_tuples(A, f.arity):
        c = f.table[t]
        if c in seen:
            return False
        seen.add(c)
    return True


def is_thin(f, A, color_bound):
    """Least color below the bound missing from f([A]^n), or None."""
    if color_bound < 1:
        raise ValueError("color_bound must be positive")
    image = {f.table[t] for t in increasing_tuples(A, f.arity)}
    for c in range(color_bound):
        if c not in image:
            return c
    return None


def is_free(f, A):
    A = set(A)
    for t in increasing_tuples(A, f.arity):
        c = f.table[t]
        if c in A and c not in t:
            return False
    return True


def find_three_cycle(T, H):
    for x, y, z in combinations(sorted(H), 3):
        if T(x, y) and T(y, z) and T(z, x):
            return (x, y, z)
        if T(x, z) and T(z, y) and T(y, x):
            return (x, z, y)
    return None


def is_transitive(T, H):
    """Returns (ok, witness cycle)."""
    cyc = find_three_cycle(T, H)
    return cyc is None, cyc


def is_1tail_rainbow(f, H):
    """Colors may repeat only between tuples sharing their last coordinate."""
    tails = {}
    for t in increasing_tuples(H, f.arity):
        c = f.table[t]
        last = tails.setdefault(c, t[-1])
        if last != t[-1]:
            return False
    return True


# -- stability --------------------------------------------------------------
#
# For a coloring of (n+1)-tuples read as f(sigma, s), the "people" are the
# n-tuples sigma lying below the window start; tail behaviour is judged on
# the window stages s > max(sigma).

class _StageIndex:
    """Per-stage map color -> heads sigma with f(sigma, s) = color."""

    def __init__(self, f, w):
        self.f, self.w = f, w
        self.by_stage = {}
        for s in w.stages():
            m = {}
            for sigma in combinations(range(s), f.arity - 1):
                m.setdefault(f.table[sigma + (s,)], []).append(sigma)
            self.by_stage[s] = m

    def color(self, sigma, s):
        return self.f.table[tuple(sigma) + (s,)]

    def collisions(self, sigma, s):
        sigma = tuple(sigma)
        return [t for t in self.by_stage[s][self.color(sigma, s)] if t != sigma]

    def stages_above(self, *sigmas):
        top = max(max(t) if t else -1 for t in sigmas)
        return [s for s in self.w.stages() if s > top]


def _people(f, w):
    return list(combinations(range(w.start), f.arity - 1))


def tail_relation(f, sigma, tau, w, index=None):
    """'eq' if f(sigma,s) = f(tau,s) on every window stage above both, 'neq'
    if on none, None if it changes."""
    w = _window_for(f, w)
    idx = index or _StageIndex(f, w)
    vals = {idx.color(sigma, s) == idx.color(tau, s) for s in idx.stages_above(sigma, tau)}
    if len(vals) > 1:
        return None
    return "eq" if vals == {True} else "neq"


def tail_partner(f, sigma, w, index=None):
    """The unique tau != sigma colored like sigma at every window stage above
    both, with no other collision anywhere in the window; None otherwise."""
    w = _window_for(f, w)
    idx = index or _StageIndex(f, w)
    sigma = tuple(sigma)
    found = None
    for s in idx.stages_above(sigma):
        col = idx.collisions(sigma, s)
        if len(col) > 1:
            return None
        if col:
            if found is None:
                found = col[0]
            elif col[0] != found:
                return None
    if found is None:
        return None
    for s in idx.stages_above(sigma, found):
        if idx.color(sigma, s) != idx.color(found, s):
            return None
    return found


def is_monk(f, sigma, w, index=None):
    w = _window_for(f, w)
    idx = index or _StageIndex(f, w)
    return all(not idx.collisions(sigma, s) for s in idx.stages_above(sigma))


def is_stable(f, w):
    """lim_s f(sigma, s) exists for every sigma below the window."""
    w = _window_for(f, w)
    for sigma in _people(f, w):
        if len({f.table[sigma + (s,)] for s in w.stages()}) > 1:
            return False
    return True


def classify_stability(f, w):
    """Flags stable / rainbow_stable / weakly_rainbow_stable /
    strongly_rainbow_stable, judged on the tail window."""
    w = _window_for(f, w)
    idx = _StageIndex(f, w)
    people = _people(f, w)
    flags = {"stable": is_stable(f, w)}

    weakly = True
    checked = set()
    for s in w.stages():
        for heads in idx.by_stage[s].values():
            heads = [t for t in heads if not t or t[-1] < w.start]
            for a, b in combinations(heads, 2):
                if (a, b) in checked:
                    continue
                checked.add((a, b))
                if tail_relation(f, a, b, w, idx) is None:
                    weakly = False
                    break
            if not weakly:
                break
        if not weakly:
            break

    rainbow = strongly = True
    for sigma in people:
        if tail_partner(f, sigma, w, idx) is not None:
            continue
        strongly = False
        if not is_monk(f, sigma, w, idx):
            rainbow = False
            break
    flags["weakly_rainbow_stable"] = weakly
    flags["rainbow_stable"] = rainbow
    flags["strongly_rainbow_stable"] = strongly and rainbow
    assert not flags["strongly_rainbow_stable"] or rainbow
    assert not rainbow or weakly, "rainbow-stable coloring failed the weak test"
    return flags


def is_prerainbow(f, X, w):
    """Distinct heads from X never share a color at window stages above
    them.  Every window stage is used, not only those in X."""
    w = _window_for(f, w)
    X = sorted(X)
    for s in w.stages():
        seen = {}
        for sigma in combinations([x for x in X if x < s], f.arity - 1):
            c = f.table[sigma + (s,)]
            if c in seen:
                return False
            seen[c] = sigma
    return True
