"""Depth-truncated binary trees with exact dyadic measure, cylinder
constraints, and the escape-driven construction of homogeneous sets."""

import random
from dataclasses import dataclass
from fractions import Fraction


def is_dyadic(q):
    d = Fraction(q).denominator
    return d & (d - 1) == 0


def measure_truncate(mu, bits):
    """Round mu down to `bits` fractional binary digits."""
    mu = Fraction(mu)
    return Fraction((mu.numerator << bits) // mu.denominator, 1 << bits)


@dataclass(frozen=True)
class Cylinder:
    """Strings carrying `bit` at every position of X they reach."""
    positions: frozenset
    bit: int = 0

    def __init__(self, positions, bit=0):
        object.__setattr__(self, "positions", frozenset(positions))
        object.__setattr__(self, "bit", bit)

    def admits(self, sigma, length):
        for p in self.positions:
            if p < length and (sigma >> p) & 1 != self.bit:
                return False
        return True


class DyadicTree:
    """Prefix-closed set of binary strings of length <= depth.

    A string of length s is stored as an int whose bit j is sigma(j);
    `levels[s]` holds the strings of length s.
    """

    def __init__(self, depth, levels):
        self.depth = depth
        self.levels = [frozenset(lv) for lv in levels]
        if len(self.levels) != depth + 1:
            raise ValueError("need one level per length 0..depth")

    @classmethod
    def from_predicate(cls, depth, keep):
        """Strings sigma (with length) accepted by keep(sigma, length); the
        predicate must already be prefix closed."""
        levels = [set() for _ in range(depth + 1)]
        levels[0].add(0)
        for s in range(depth):
            for sigma in levels[s]:
                for b in (0, 1):
                    tau = sigma | (b << s)
                    if keep(tau, s + 1):
                        levels[s + 1].add(tau)
        return cls(depth, levels)

    @classmethod
    def full(cls, depth):
        return cls.from_predicate(depth, lambda sigma, n: True)

    @classmethod
    def closure_of(cls, depth, leaves):
        """Downward closure of a set of depth-d strings."""
        levels = [set() for _ in range(depth + 1)]
        for leaf in leaves:
            for s in range(depth + 1):
                levels[s].add(leaf & ((1 << s) - 1))
        if not leaves:
            levels = [set() for _ in range(depth + 1)]
        return cls(depth, levels)

    def __contains__(self, item):
        sigma, length = item
        return length <= self.depth and sigma in self.levels[length]

    def check_prefix_closed(self):
        for s in range(1, self.depth + 1):
            for sigma in self.levels[s]:
                if sigma & ((1 << (s - 1)) - 1) not in self.levels[s - 1]:
                    return sigma, s
        return None

    def intersect(self, other):
        if other.depth != self.depth:
            raise ValueError("depths differ")
        return DyadicTree(self.depth, [a & b for a, b in zip(self.levels, other.levels)])

    def count(self, level, constraints=()):
        return sum(1 for sigma in self.levels[level]
                   if all(c.admits(sigma, level) for c in constraints))

    def paths(self):
        return self.levels[self.depth]


def measure_exact(T, constraints=()):
    return Fraction(T.count(T.depth, constraints), 1 << T.depth)


def level_ratio(T, s, constraints=()):
    return Fraction(T.count(s, constraints), 1 << s)


def build_Te(D, depth):
    """Downward closure of the strings that take both values on D."""
    D = frozenset(D)
    if not D:
        raise ValueError("D must be nonempty")
    if depth < max(D) + 1:
        raise ValueError(f"depth {depth} does not reach position {max(D)}")

    def keep(sigma, n):
        seen = {(sigma >> p) & 1 for p in D if p < n}
        return any(p >= n for p in D) or len(seen) == 2

    return DyadicTree.from_predicate(depth, keep)


def te_measure_formula(D):
    return 1 - Fraction(1, 2 ** (len(D) - 1))


def random_tree(seed, depth, density=0.5, dead_ends=0.1):
    """Closure of random depth-d leaves, plus a few nodes that stop early."""
    rng = random.Random(seed)
    leaves = {x for x in range(1 << depth) if rng.random() < density}
    if not leaves:
        leaves = {0}
    T = DyadicTree.closure_of(depth, leaves)
    levels = [set(lv) for lv in T.levels]
    for s in range(1, depth):
        for sigma in list(levels[s - 1]):
            for b in (0, 1):
                if rng.random() < dead_ends:
                    levels[s].add(sigma | (b << (s - 1)))
    return DyadicTree(depth, levels)


# -- Bad sets and the homogeneous construction --------------------------

def _need_k(k):
    if k < 2:
        raise ValueError("k must be at least 2 for a positive epsilon")


def epsilon(k):
    return Fraction(1, 2 ** (k + 1)) - Fraction(1, 2 ** (2 * k)) - Fraction(1, 2 ** (4 * k))


def bad_set(T, H, k):
    """Positions n < depth with mu_{4k}(T ∩ Γ⁰_H ∩ Γ⁰_n) < 2^{-2k}."""
    _need_k(k)
    cutoff = Fraction(1, 2 ** (2 * k))
    out = set()
    for n in range(T.depth):
        mu = measure_exact(T, (Cylinder(H), Cylinder({n})))
        if measure_truncate(mu, 4 * k) < cutoff:
            out.add(n)
    return out


def s_threshold(T, H, k):
    """Least level s with |T_s ∩ Γ⁰_H| / 2^s - mu(T ∩ Γ⁰_H) < epsilon(k)."""
    _need_k(k)
    eps = epsilon(k)
    mu = measure_exact(T, (Cylinder(H),))
    for s in range(T.depth + 1):
        if level_ratio(T, s, (Cylinder(H),)) - mu < eps:
            return s
    return T.depth


def next_k(k):
    """Least k' with 2^{-k'} <= 2^{-2k} - 2^{-4k}."""
    target = Fraction(1, 2 ** (2 * k)) - Fraction(1, 2 ** (4 * k))
    j = 0
    while Fraction(1, 2 ** j) > target:
        j += 1
    return j


def homogeneous_build(T, k, escape, max_steps=None):
    """Grow H so that T ∩ Γ⁰_H keeps measure at least 2^{-k_s}.

    escape(blocking, size) returns a point outside `blocking` when the set
    has at most `size` members; the blocking set is Bad(H, k_s) cut at the
    threshold, plus everything up to max(H).  Returns (H, ks, exhausted).
    """
    _need_k(k)
    if measure_exact(T) < Fraction(1, 2 ** k):
        raise ValueError("tree measure below 2^-k")
    H, ks = [], [k]
    while max_steps is None or len(H) < max_steps:
        kk = ks[-1]
        mu = measure_exact(T, (Cylinder(H),))
        assert mu >= Fraction(1, 2 ** kk), f"invariant lost at step {len(H)}"
        thr = s_threshold(T, H, kk)
        X = {n for n in bad_set(T, H, kk) if n <= thr}
        blocking = X | set(range(max(H) + 1 if H else 0))
        v = escape(blocking, len(blocking))
        if v >= T.depth or v in blocking:
            return frozenset(H), ks, True
        H.append(v)
        ks.append(next_k(kk))
        if Fraction(1, 2 ** ks[-1]) < Fraction(1, 2 ** T.depth):
            mu = measure_exact(T, (Cylinder(H),))
            assert mu >= Fraction(1, 2 ** ks[-1])
            return frozenset(H), ks, True
    return frozenset(H), ks, False


def is_path_homogeneous(T, sigma, c, length=None):
    """Some tau in T of length len(sigma) (or `length`) has tau(i) = c at
    every position i flagged in sigma.  sigma is a sequence of bits."""
    n = len(sigma) if length is None else length
    if n > T.depth:
        return False
    flagged = {i for i, b in enumerate(sigma) if b}
    cyl = Cylinder(flagged, c)
    return any(cyl.admits(tau, n) for tau in T.levels[n])


def characteristic(H, length):
    return [1 if i in H else 0 for i in range(length)]
