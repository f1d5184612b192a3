"""Finite stand-ins for limit-computable functions, halting tables, oracle
functionals and uniform set sequences."""

import random
from dataclasses import dataclass, field


class LimitFunction:
    """A table g(x, s) for x < X, s < S with declared stabilization stages.

    `stab[x]` is a stage after which g(x, .) never changes.
    """

    def __init__(self, table, stab=None):
        self.table = [list(row) for row in table]
        self.arg_bound = len(self.table)
        self.stage_bound = len(self.table[0]) if self.table else 0
        if any(len(row) != self.stage_bound for row in self.table):
            raise ValueError("ragged table")
        if stab is None:
            stab = [self._last_change(row) for row in self.table]
        self.stab = list(stab)
        self.validate()

    @staticmethod
    def _last_change(row):
        t = len(row) - 1
        while t > 0 and row[t - 1] == row[-1]:
            t -= 1
        return t

    def validate(self):
        for x, row in enumerate(self.table):
            t = self.stab[x]
            if not 0 <= t < self.stage_bound:
                raise ValueError(f"stabilization stage {t} of {x} out of range")
            if any(v != row[t] for v in row[t:]):
                raise ValueError(f"g({x}, .) changes after its declared stage {t}")

    def _check(self, x, s=None):
        if not 0 <= x < self.arg_bound:
            raise IndexError(f"argument {x} outside [0, {self.arg_bound})")
        if s is not None and not 0 <= s < self.stage_bound:
            raise IndexError(f"stage {s} outside [0, {self.stage_bound})")

    def limit_value(self, x):
        self._check(x)
        return self.table[x][self.stab[x]]

    def approx_at(self, x, s):
        self._check(x, s)
        return self.table[x][s]

    def __call__(self, x, s):
        return self.approx_at(x, s)

    def limits(self):
        return [self.limit_value(x) for x in range(self.arg_bound)]

    def max_stab(self):
        return max(self.stab, default=0)

    def __eq__(self, other):
        return isinstance(other, LimitFunction) and self.table == other.table and self.stab == other.stab

    def __repr__(self):
        return f"LimitFunction(X={self.arg_bound}, S={self.stage_bound})"

    @classmethod
    def constant(cls, arg_bound, stage_bound, value=0):
        return cls([[value] * stage_bound for _ in range(arg_bound)], [0] * arg_bound)

    @classmethod
    def from_limits(cls, limits, stage_bound):
        return cls([[v] * stage_bound for v in limits], [0] * len(limits))


def make_random_limit(seed, arg_bound, stage_bound, value_bound, stab_bound):
    """Random table whose rows change a few times and settle by stab_bound.
    `value_bound` may be a list giving one bound per row."""
    if stab_bound >= stage_bound:
        raise ValueError("stab_bound must be below stage_bound")
    rng = random.Random(seed)
    bounds = value_bound if isinstance(value_bound, (list, tuple)) else [value_bound] * arg_bound
    table, stab = [], []
    for x in range(arg_bound):
        value_bound = bounds[x]
        t = rng.randrange(stab_bound + 1)
        switches = sorted(rng.sample(range(t + 1), min(t + 1, rng.randrange(1, 4))))
        row, v = [], rng.randrange(value_bound)
        for s in range(stage_bound):
            if s in switches and s <= t:
                v = rng.randrange(value_bound)
            row.append(v)
        table.append(row)
        stab.append(t)
    return LimitFunction(table, stab)


DIVERGE = None


@dataclass
class MockHaltingTable:
    """`entries[e]` is DIVERGE or a pair (value, convergence stage)."""
    entries: list

    def converges(self, e):
        return self.entries[e] is not DIVERGE

    def approx(self, e, s):
        """Value seen at stage s, or None if not yet converged."""
        ent = self.entries[e]
        if ent is DIVERGE or s < ent[1]:
            return None
        return ent[0]

    def __len__(self):
        return len(self.entries)


def halting_to_limit(h, default, stage_bound):
    table, stab = [], []
    for e in range(len(h)):
        d = default(e) if callable(default) else default
        ent = h.entries[e]
        if ent is DIVERGE:
            table.append([d] * stage_bound)
            stab.append(0)
            continue
        v, se = ent
        if se >= stage_bound:
            raise ValueError(f"convergence stage {se} of {e} beyond stage bound")
        table.append([d if s < se else v for s in range(stage_bound)])
        stab.append(se)
    return LimitFunction(table, stab)


def random_halting_table(seed, size, value_fn, stage_bound, p_converge=0.5):
    rng = random.Random(seed)
    entries = []
    for e in range(size):
        if rng.random() < p_converge:
            entries.append((value_fn(rng, e), rng.randrange(stage_bound)))
        else:
            entries.append(DIVERGE)
    return MockHaltingTable(entries)


class MockFunctional:
    """A halting predicate on finite strings, closed upward under extension.

    `halting` is a set of minimal halting strings (tuples); a string halts
    when it extends one of them.  `outputs` gives the value per minimal string.
    """

    def __init__(self, halting, outputs=None):
        self.halting = frozenset(tuple(t) for t in halting)
        self.outputs = dict(outputs or {})

    def halts(self, tau):
        tau = tuple(tau)
        return any(tau[:len(m)] == m for m in self.halting)

    def output(self, tau):
        tau = tuple(tau)
        best = None
        for m in self.halting:
            if tau[:len(m)] == m and (best is None or len(m) < len(best)):
                best = m
        if best is None:
            return None
        return self.outputs.get(best, 0)

    def check_upward_closed(self, universe):
        """Verify on a finite universe of strings; returns a counterexample
        pair (tau, extension) or None."""
        universe = [tuple(t) for t in universe]
        halting = {t for t in universe if self.halts(t)}
        for t in halting:
            for u in universe:
                if u[:len(t)] == t and u not in halting:
                    return t, u
        return None

    def __repr__(self):
        return f"MockFunctional({sorted(self.halting)})"


def random_functional(seed, domain, max_len=3, count=None):
    """Functional halting on a few random increasing strings over [0, domain)."""
    rng = random.Random(seed)
    count = rng.randrange(0, 4) if count is None else count
    mins = set()
    for _ in range(count):
        n = rng.randrange(1, max_len + 1)
        if n > domain:
            continue
        mins.add(tuple(sorted(rng.sample(range(domain), n))))
    return MockFunctional(mins, {m: rng.randrange(2) for m in mins})


@dataclass
class UniformSetSequence:
    sets: list = field(default_factory=list)
    domain_size: int = 0

    def __post_init__(self):
        self.sets = [frozenset(R) for R in self.sets]
        for R in self.sets:
            if any(not 0 <= x < self.domain_size for x in R):
                raise ValueError("set member outside the domain")

    def __getitem__(self, i):
        return self.sets[i]

    def __len__(self):
        return len(self.sets)


def random_set_sequence(seed, k, domain_size):
    rng = random.Random(seed)
    return UniformSetSequence([{x for x in range(domain_size) if rng.random() < 0.5}
                               for _ in range(k)], domain_size)
