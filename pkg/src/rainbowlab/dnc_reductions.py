"""Stage constructions whose solutions compute functions escaping a limit
table: tournaments, thin-set colorings and rainbow-stable colorings."""

from .core_model import (
    SizedFamily, StageColoring, Tournament, encode_finite_set,
    enumerate_finite_set, pair_decode, pair_encode,
)


class CardinalityError(ValueError):
    """A decoded set is too small to leave room below higher priorities."""


# Colors handed out by the constructions live in disjoint bands:
# shared (committed) colors are 0 mod 3, singleton fresh colors 1 mod 3.
def shared_color(u, s):
    return 3 * pair_encode(u, s)


def fresh_color(u, s):
    return 3 * pair_encode(u, s) + 1


def em_family(e):
    return SizedFamily(3 ** (e + 1))


def sem_family(e):
    return SizedFamily(3 ** (e + 1), above=e - 1)


def _approx(g, x, s):
    return g.approx_at(x, min(s, g.stage_bound - 1))


def _check_fits(D, N, who):
    if D and max(D) >= N:
        raise ValueError(f"{who} decodes to {sorted(D)} which leaves the domain [0, {N})")


def _first_free(D, taken, k, who):
    rest = sorted(set(D) - taken)
    if len(rest) < k:
        raise CardinalityError(f"{who}: only {len(rest)} elements outside higher priorities")
    return rest[:k]


def decode_em_sets(g, s, N, family=em_family):
    sets = []
    for e in range(g.arg_bound):
        D = family(e).decode(_approx(g, e, s))
        _check_fits(D, N, f"D_{e},{s}")
        sets.append(D)
    return sets


def build_em_tournament(g, N, family=em_family):
    """At stage s every index e < s takes the first pair {x, y} of D_{e,s}
    outside the sets of smaller indices and closes a 3-cycle with s.  Pairs
    not yet touched follow the natural order."""
    T = Tournament(N)
    for s in range(N):
        sets = decode_em_sets(g, s, N, family)
        assigned = set()
        taken = set()
        for e in range(min(s, g.arg_bound)):
            D = sets[e]
            x, y = _first_free(D, taken, 2, f"D_{e},{s}")
            taken |= D
            if y >= s or x in assigned or y in assigned:
                continue
            # with x -> y already fixed, close the cycle as y -> s -> x
            if T(x, y):
                T.set(y, s, True)
                T.set(s, x, True)
            else:
                T.set(x, s, True)
                T.set(s, y, True)
            assigned |= {x, y}
    return T


def build_semo_tournament(g, N):
    return build_em_tournament(g, N, family=sem_family)


def tournament_is_stable(T, start, stop=None):
    """For each u < start, T(u, s) is constant over s in [start, stop).
    Returns the first unstable u or None."""
    stop = T.domain_size if stop is None else stop
    for u in range(start):
        if len({T(u, s) for s in range(start, stop)}) > 1:
            return u
    return None


def first_elements(H, k, above=-1):
    xs = sorted(x for x in H if x > above)
    if len(xs) < k:
        raise ValueError(f"need {k} elements above {above}, have {len(xs)}")
    return frozenset(xs[:k])


def em_solution(H, e, family=em_family):
    fam = family(e)
    return fam.encode(first_elements(H, fam.size))


def ipt_solution(H0, e):
    return em_solution(H0, e)


def em_threshold(g, e, family=em_family):
    """Least stage from which D_e ∪ {s} must carry a 3-cycle."""
    D = family(e).decode(g.limit_value(e))
    return max(g.stab[e], max(D) + 1, e + 1)


# -- TS(2) ---------------------------------------------------------------

def ts2_schedule(c):
    """Size of the set for requirement code c = <e, i>."""
    return 3 ** (c + 1)


def ts2_family(c):
    return SizedFamily(ts2_schedule(c))


def ts2_requirements(N):
    """Requirement codes whose sets fit in the domain together with every
    higher-priority set."""
    out, used = [], 0
    c = 0
    while used + ts2_schedule(c) <= N:
        used += ts2_schedule(c)
        out.append(c)
        c += 1
    return out


def build_ts2_coloring(g, N):
    """g(c, s) for c = <e, i> codes D_{e,i,s}.  At stage s each c < s takes
    the least element of its set outside the sets of smaller codes and
    colors it i against s.  Everything else gets color 0."""
    table = {}
    for s in range(N):
        taken = set()
        for c in range(min(s, g.arg_bound)):
            e, i = pair_decode(c)
            D = ts2_family(c).decode(_approx(g, c, s))
            _check_fits(D, N, f"D_<{e},{i}>,{s}")
            (x,) = _first_free(D, taken, 1, f"D_<{e},{i}>,{s}")
            taken |= D
            if x < s and (x, s) not in table:
                table[(x, s)] = i
        for z in range(s):
            table.setdefault((z, s), 0)
    return StageColoring(2, N, table)


def ts2_solution(A, i, e):
    fam = ts2_family(pair_encode(e, i))
    return fam.encode(first_elements(A, fam.size))


def ts2_threshold(g, c):
    D = ts2_family(c).decode(g.limit_value(c))
    return max(g.stab[c], max(D) + 1, c + 1)


# -- rainbow-stable coloring from a halting table --------------------------

def srrt_dnr_family(e):
    return SizedFamily(3 ** (e + 1), above=e)


def srrt_dnr_default(e):
    # index 0 is {e+1, ..., e+3^(e+1)}
    return 0


def srrt_dnr_sets(h, s):
    out = []
    for e in range(len(h)):
        v = h.approx(e, s)
        out.append(srrt_dnr_family(e).decode(srrt_dnr_default(e) if v is None else v))
    return out


def build_srrt_dnr_coloring(h, N):
    """At stage s each e < s gives the first pair of D_{e,s} outside smaller
    sets one shared color; every other point gets a color of its own."""
    table = {}
    for s in range(N):
        sets = srrt_dnr_sets(h, s)
        taken = set()
        for e in range(min(s, len(h))):
            D = sets[e]
            _check_fits(D, N, f"D_{e},{s}")
            a, b = _first_free(D, taken, 2, f"D_{e},{s}")
            taken |= D
            if b < s:
                table[(a, s)] = table[(b, s)] = shared_color(a, s)
        for u in range(s):
            table.setdefault((u, s), fresh_color(u, s))
    return StageColoring(2, N, table)


def srrt_dnr_solution(H, e):
    fam = srrt_dnr_family(e)
    return fam.encode(first_elements(H, fam.size, above=e))


# -- stable coloring with movable markers ----------------------------------

def stable_thin_family(c):
    """Sets of c+1 integers greater than c."""
    return SizedFamily(c + 1, above=c)


class _Requirement:
    __slots__ = ("e", "i", "code", "value", "restraint")

    def __init__(self, e, i):
        self.e, self.i = e, i
        self.code = pair_encode(e, i)
        self.value = None
        self.restraint = None


def build_stable_thin_diag(f, N, colors=2, trace=None):
    """Requirement R_{e,i} keeps a restraint on the least element u of
    D_{<e,i>, g(e,s)} not held by a stronger requirement, and commits u to
    color i.  It is injured when g(e, .) moves, when a stronger requirement
    takes u, or when a stronger requirement frees a smaller member of its
    set.  Unrestrained points get color 0."""
    reqs = sorted((_Requirement(e, i) for e in range(f.arg_bound) for i in range(colors)),
                  key=lambda r: r.code)
    table = {}
    for s in range(N):
        held, released = set(), set()
        for r in reqs:
            v = _approx(f, r.e, s)
            D = stable_thin_family(r.code).decode(v)
            _check_fits(D, N, f"D_{r.code},{v}")
            if r.restraint is not None:
                u = r.restraint
                injured = (v != r.value or u in held
                           or any(w in D and w < u for w in released))
                if injured:
                    released.add(u)
                    r.restraint = None
                    if trace is not None:
                        trace.append(("injure", s, r.e, r.i, u))
            if r.restraint is None:
                free = sorted(set(D) - held)
                if not free:
                    raise CardinalityError(f"R_{r.e},{r.i} has nothing to restrain")
                r.restraint, r.value = free[0], v
                released.discard(free[0])
                if trace is not None:
                    trace.append(("restrain", s, r.e, r.i, free[0]))
            held.add(r.restraint)
        committed = {r.restraint: r.i for r in reversed(reqs)}
        for u in range(s):
            table[(u, s)] = committed.get(u, 0)
    return StageColoring(2, N, table)


def stable_thin_solution(H, i, e):
    """Index v with D_{<e,i>, v} the first <e,i>+1 elements of H above <e,i>."""
    c = pair_encode(e, i)
    fam = stable_thin_family(c)
    return fam.encode(first_elements(H, fam.size, above=c))


# -- finite injury: rainbow-stable coloring diagonalizing a limit ----------

def srrt_diag_size(x):
    return 3 * x + 2


def build_srrt_diag_coloring(h, N, trace=None):
    """Requirement R_x, when D_{g(x,t)} has at least 3x+2 members, holds the
    least two members >= x not restrained by stronger requirements and gives
    them a common color.  Injury: g(x, .) moves or a stronger requirement
    takes one of them.  Other points get fresh colors."""
    restraint = [None] * h.arg_bound
    value = [None] * h.arg_bound
    table = {}
    for t in range(N):
        held = set()
        for x in range(h.arg_bound):
            v = _approx(h, x, t)
            D = enumerate_finite_set(v)
            _check_fits(D, N, f"D_{v}")
            if restraint[x] is not None:
                if v != value[x] or held & set(restraint[x]):
                    if trace is not None:
                        trace.append(("injure", t, x, restraint[x]))
                    restraint[x] = None
            if restraint[x] is None and len(D) >= srrt_diag_size(x):
                free = sorted(u for u in D if u >= x and u not in held)
                if len(free) < 2:
                    raise CardinalityError(f"R_{x} cannot find two free members")
                restraint[x], value[x] = tuple(free[:2]), v
                if trace is not None:
                    trace.append(("restrain", t, x, restraint[x]))
            if restraint[x] is not None:
                held |= set(restraint[x])
        pairs = {}
        for r in restraint:
            if r is not None:
                pairs[r[0]] = pairs[r[1]] = r[0]
        for u in range(t):
            table[(u, t)] = shared_color(pairs[u], t) if u in pairs else fresh_color(u, t)
    return StageColoring(2, N, table)


def srrt_diag_solution(R, x):
    """Bit code of the first 3x+2 elements of R."""
    return encode_finite_set(first_elements(R, srrt_diag_size(x)))
