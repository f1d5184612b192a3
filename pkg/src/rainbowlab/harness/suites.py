"""Named verification suites.  Each suite runs one family of claims over a
batch of seeds and returns Check records; the CLI and the acceptance tests
both call them."""

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .. import bushy_forcing as bf
from .. import dnc_reductions as dnc
from .. import rainbow_reductions as rr
from .. import tree_measure as tm
from ..core_model import (
    StageColoring, check_k_bounded, classify_stability, encode_finite_set,
    enumerate_finite_set, find_three_cycle, is_free, is_prerainbow, is_rainbow,
    is_stable, pair_decode, pair_encode,
)
from ..generators import STABILITY_CLASSES, stability_instance
from ..oracles import LimitFunction, make_random_limit
from ..solvers import (
    BudgetExhausted, escaping_from_family, find_rainbows, find_thin_sets,
    find_transitive_subtournaments, prerainbow_to_rainbow,
)

PROFILES = {
    "desk": {"seeds": 50, "trials": 200, "low_runs": 20, "trees": 20},
    "quick": {"seeds": 5, "trials": 40, "low_runs": 4, "trees": 4},
}


@dataclass
class Check:
    claim: str
    scope: str
    passed: bool = True
    cases: int = 0
    witness: object = None

    def case(self, ok, witness=None):
        self.cases += 1
        if not ok and self.passed:
            self.passed = False
            self.witness = witness
        return ok

    def as_dict(self):
        return {"claim": self.claim, "scope": self.scope, "passed": self.passed,
                "cases": self.cases, "witness": _plain(self.witness)}


def _plain(x):
    if isinstance(x, (set, frozenset)):
        return sorted(_plain(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, Fraction):
        return str(x)
    return x


@dataclass
class Report:
    pipeline: str
    seed: int
    checks: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def as_dict(self):
        return {"pipeline": self.pipeline, "seed": self.seed, "passed": self.passed,
                "seconds": round(self.seconds, 3), "checks": [c.as_dict() for c in self.checks]}

    def text(self):
        lines = [f"{self.pipeline} seed={self.seed}: {'PASS' if self.passed else 'FAIL'} "
                 f"({self.seconds:.2f}s)"]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            lines.append(f"  {mark} {c.claim} [{c.scope}; {c.cases} cases]")
            if not c.passed:
                lines.append(f"       witness: {_plain(c.witness)}")
        return "\n".join(lines)


# every pair coloring built during a run, for the classifier lattice check
OBSERVED = []


def observe(f, w):
    if f.arity == 2 and w < f.domain_size:
        OBSERVED.append((f, w))
    return f


def _seeds(seed, profile):
    return range(seed, seed + PROFILES[profile]["seeds"])


# -- limit tables for the diagonalization suites ----------------------------

def family_limit(seed, families, N, top, stab_bound):
    """Random limit table whose row e codes a set of families[e] below top."""
    bounds = [fam.count_below(top) for fam in families]
    return make_random_limit(seed, len(families), N, bounds, stab_bound)


def set_limit(seed, X, N, stab_bound, value_top):
    """Rows code finite sets of [0, value_top) in binary and settle by
    stab_bound."""
    rng = random.Random(seed)
    rows, stab = [], []
    for x in range(X):
        t = rng.randrange(stab_bound + 1)
        row, v = [], 0
        for s in range(N):
            if s <= t and (s == 0 or rng.random() < 0.2):
                k = rng.randrange(0, min(value_top, 3 * x + 5))
                v = encode_finite_set(rng.sample(range(value_top), k))
            row.append(v)
        rows.append(row)
        stab.append(t)
    return LimitFunction(rows, stab)


def random_stable_pairs(seed, N, settle, colors=None):
    """f(x, s) random below stage `settle`, then fixed at a limit below it."""
    rng = random.Random(seed)
    top = colors if colors is not None else settle
    lim = [rng.randrange(top) for _ in range(N)]
    table = {}
    for x, s in combinations(range(N), 2):
        table[(x, s)] = rng.randrange(colors if colors is not None else N) if s < settle else lim[x]
    return StageColoring(2, N, table)


# -- 1, 2: tournaments ------------------------------------------------------

def _em_suite(family, builder, seed, profile, corrupt, window):
    N, top, stab = 130, 100, 100
    total = Check("tournament is total and irreflexive", "every pair of [0, 130)")
    cyc = Check("D_e with any later stage carries a 3-cycle", "e <= 2, every s in [s0, 130)")
    stable = Check("orientation toward window stages is constant",
                   "u below the window, window of 8") if window else None
    for sd in _seeds(seed, profile):
        g = family_limit(sd, [family(e) for e in range(3)], N, top, stab - 1)
        T = builder(g, N)
        if corrupt == "flip" and sd == seed:
            D = family(0).decode(g.limit_value(0))
            s = dnc.em_threshold(g, 0, family)
            for x, y in combinations(sorted(D | {s}), 2):
                T.set(x, y, True)
        total.case(T.check_total() is None, T.check_total())
        for e in range(3):
            D = family(e).decode(g.limit_value(e))
            for s in range(dnc.em_threshold(g, e, family), N):
                ok = find_three_cycle(T, D | {s}) is not None
                cyc.case(ok, None if ok else {"seed": sd, "index": e, "stage": s,
                                              "triple": tuple(sorted(D)[:2]) + (s,)})
        if stable is not None:
            u = dnc.tournament_is_stable(T, N - window)
            stable.case(u is None, {"seed": sd, "point": u})
    return [c for c in (total, cyc, stable) if c is not None]


def suite_em_dnr(seed=0, profile="desk", corrupt=None):
    return _em_suite(dnc.em_family, dnc.build_em_tournament, seed, profile, corrupt, None)


def suite_sem_dnr(seed=0, profile="desk", corrupt=None):
    return _em_suite(dnc.sem_family, dnc.build_semo_tournament, seed, profile, corrupt, 8)


# -- 3: thin sets for two colors --------------------------------------------

def suite_ts2_dnr(seed=0, profile="desk", corrupt=None):
    N = 60
    codes = dnc.ts2_requirements(N)
    wanted = [pair_encode(e, i) for e in range(2) for i in range(2)]
    hered = Check("no i-avoiding set starts with the limit set and reaches past the threshold",
                  "(e,i) in {0,1}^2, exhaustive via every D_lim + {s}")
    stream = Check("enumerated i-avoiding sets map away from the limit code",
                   "first 300 sets of size schedule+1 per code")
    vacant = Check("codes whose sets do not fit in the domain are skipped",
                   f"codes {sorted(set(wanted) - set(codes))}")
    for sd in _seeds(seed, profile):
        g = family_limit(sd, [dnc.ts2_family(c) for c in codes], N, 50, 45)
        f = dnc.build_ts2_coloring(g, N)
        for c in wanted:
            if c not in codes:
                vacant.case(True)
                continue
            e, i = pair_decode(c)
            D = dnc.ts2_family(c).decode(g.limit_value(c))
            for s in range(dnc.ts2_threshold(g, c), N):
                A = D | {s}
                hit = any(f.table[p] == i for p in combinations(sorted(A), 2))
                hered.case(hit, {"seed": sd, "code": c, "set": A})
            size = dnc.ts2_schedule(c) + 1
            n = 0
            try:
                for A in find_thin_sets(f, size, None, avoid=i, budget=200_000):
                    n += 1
                    if n > 300:
                        break
                    ok = (dnc.ts2_solution(A, i, e) != g.limit_value(c)
                          or max(A) < dnc.ts2_threshold(g, c))
                    stream.case(ok, {"seed": sd, "code": c, "set": A})
            except BudgetExhausted:
                pass
    return [hered, stream, vacant]


# -- 4: jump lowering -------------------------------------------------------

def suite_jump_lower(seed=0, profile="desk", corrupt=None):
    N = 14
    bounded = Check("lowered coloring is 2-bounded", "N = 14, n = 1")
    rain = Check("every rainbow of the lowered coloring is a rainbow at the limit",
                 "all rainbows of size <= 6, N = 14")
    for sd in _seeds(seed, profile):
        f = rr.random_two_bounded(sd, 1, N)
        h = rr.approximation_for(f, sd)
        g = rr.jump_lower(h, 1, N)
        observe(g, 3)
        ok, col = check_k_bounded(g, 2)
        bounded.case(ok, {"seed": sd, "color": col})
        for m in range(1, 7):
            for A in find_rainbows(g, m):
                v = rr.rainbow_descent_violation(f, h, A)
                rain.case(v is None, {"seed": sd, "set": A, "violation": v})
    return [bounded, rain]


# -- 5: rainbows to thin and free sets ---------------------------------------

def trapped_coloring(seed, N, t):
    rng = random.Random(seed)
    K = comb(N, 2)
    table = {}
    for z in range(K):
        if t == 1:
            table[(z,)] = rng.randrange(z) if z else 0
        else:
            table[(z,)] = rng.randrange(z, K)
    return StageColoring(1, K, table)


def suite_rrt_ts_fs(seed=0, profile="desk", corrupt=None):
    N = 14
    thin = Check("trimmed rainbow avoids the color coding its two least points",
                 "all rainbows of size 3..6, N = 14")
    free = Check("paired-up rainbow is free", "all rainbows of size 2..6, N = 14, t in {1, 2}")
    bounded = Check("both colorings are 2-bounded", "N = 14")
    for sd in _seeds(seed, profile):
        rng = random.Random(sd)
        f = StageColoring(1, N, {(z,): rng.randrange(pair_encode(0, z) + z + 2) for z in range(N)})
        g = rr.rainbow_to_thin(f)
        bounded.case(check_k_bounded(g, 2)[0], sd)
        for m in range(3, 7):
            for H in find_rainbows(g, m):
                x, y, trimmed = rr.trim_solution(H)
                thin.case(rr.avoids(f, trimmed, pair_encode(x, y)), {"seed": sd, "set": H})
        for t in (1, 2):
            f = trapped_coloring(sd, N, t)
            g = rr.rainbow_to_free(f, t, N)
            bounded.case(check_k_bounded(g, 2)[0], (sd, t))
            for m in range(2, 7):
                for H in find_rainbows(g, m):
                    A = rr.pairs_solution(H)
                    free.case(is_free(f, A), {"seed": sd, "t": t, "set": H})
    return [thin, free, bounded]


# -- 6: stable Ramsey to stable free sets ------------------------------------

def suite_srt_sfs(seed=0, profile="desk", corrupt=None):
    N, W = 40, 8
    total = Check("six-coloring is total with values below 6", "N = 40")
    stable = Check("six-coloring is stable", "window of 8")
    example = Check("constant-zero input gives g(1, 2) = 3", "N = 5")
    for sd in _seeds(seed, profile):
        f = random_stable_pairs(sd, N, random.Random(sd).randrange(5, N - W + 1))
        g = observe(rr.srt_to_sfs(f), W)
        total.case(len(g.table) == comb(N, 2) and g.colors() <= set(range(6)), sd)
        stable.case(is_stable(g, W), sd)
    f0 = StageColoring(2, 5, default=0)
    example.case(rr.srt_to_sfs(f0).table[(1, 2)] == 3, rr.srt_to_sfs(f0).table[(1, 2)])
    return [total, stable, example]


# -- 7: finite injury and movable markers ------------------------------------

def suite_finite_injury(seed=0, profile="desk", corrupt=None):
    shape = Check("finite-injury coloring is 2-bounded and rainbow-stable", "N = 20, window 4")
    hered = Check("limit set plus any settled stage is not a rainbow", "every x with a large limit set")
    stream = Check("rainbows of size 3x+3 map away from the limit", "first 2000 rainbows per x")
    st_shape = Check("marker coloring is stable", "N = 40, window 8")
    st_hered = Check("limit set plus any settled stage meets color i", "e < 3, i < 2")
    st_stream = Check("thin sets of size c+2 map away from the limit", "first 300 sets per requirement")
    for sd in _seeds(seed, profile):
        N, W = 20, 4
        h = set_limit(sd, 3, N, 10, 14)
        trace = []
        f = observe(dnc.build_srrt_diag_coloring(h, N, trace), W)
        flags = classify_stability(f, W)
        shape.case(check_k_bounded(f, 2)[0] and flags["rainbow_stable"], {"seed": sd, "flags": flags})
        for x in range(h.arg_bound):
            D = enumerate_finite_set(h.limit_value(x))
            if len(D) < dnc.srrt_diag_size(x):
                continue
            last = max([ev[1] for ev in trace if ev[2] == x] + [0])
            past = max(last, max(D))
            for s in range(past + 1, N):
                hered.case(not is_rainbow(f, D | {s}), {"seed": sd, "x": x, "stage": s})
            for n, R in enumerate(find_rainbows(f, dnc.srrt_diag_size(x) + 1)):
                if n >= 2000:
                    break
                ok = max(R) <= past or dnc.srrt_diag_solution(R, x) != h.limit_value(x)
                stream.case(ok, {"seed": sd, "x": x, "set": R})

        N, W = 40, 8
        bounds = [min(dnc.stable_thin_family(pair_encode(e, i)).count_below(24) for i in range(2))
                  for e in range(3)]
        g = make_random_limit(sd, 3, N, bounds, 20)
        trace = []
        f = observe(dnc.build_stable_thin_diag(g, N, 2, trace), W)
        st_shape.case(is_stable(f, W), sd)
        for e in range(3):
            for i in range(2):
                c = pair_encode(e, i)
                D = dnc.stable_thin_family(c).decode(g.limit_value(e))
                last = max([ev[1] for ev in trace if ev[2] == e and ev[3] == i] + [0])
                past = max(last, max(D))
                for s in range(past + 1, N):
                    A = D | {s}
                    hit = any(f.table[p] == i for p in combinations(sorted(A), 2))
                    st_hered.case(hit, {"seed": sd, "req": (e, i), "stage": s})
                try:
                    for n, H in enumerate(find_thin_sets(f, c + 2, None, avoid=i, budget=100_000)):
                        if n >= 300:
                            break
                        try:
                            sol = dnc.stable_thin_solution(H, i, e)
                        except ValueError:
                            continue
                        st_stream.case(sol != g.limit_value(e) or max(H) <= past,
                                       {"seed": sd, "req": (e, i), "set": H})
                except BudgetExhausted:
                    pass
    return [shape, hered, stream, st_shape, st_hered, st_stream]


# -- 8: bad families and prerainbows -----------------------------------------

def suite_bad_family(seed=0, profile="desk", corrupt=None):
    N, W = 40, 8
    formula = Check("|Bad(D)| matches the size formula", "strongly rainbow-stable, all D below 12")
    bound = Check("|Bad(D)| is at most 2|D|", "every class, all D below 12")
    pre = Check("escaping output is a prerainbow", "target 16")
    rain = Check("extracted set is a rainbow of size >= 6", "greedy extraction")
    for sd in _seeds(seed, profile):
        for cls in ("married", "mixed", "monk"):
            f = observe(stability_instance(sd, N, W, cls, junk=0.2), W)
            fam = rr.bad_family(f, W)
            for e in range(1 << 12):
                D = enumerate_finite_set(e)
                size = len(fam(e))
                if fam.strongly:
                    formula.case(size == fam.size_formula(D), {"seed": sd, "D": D})
                bound.case(size <= fam.size_bound(D), {"seed": sd, "D": D})
            R, _ = rr.escaping_to_prerainbow(fam, escaping_from_family, target=16,
                                             weak=not fam.strongly)
            pre.case(is_prerainbow(f, R, W), {"seed": sd, "class": cls, "set": R})
            Y, _ = prerainbow_to_rainbow(f, R)
            rain.case(is_rainbow(f, Y) and len(Y) >= 6, {"seed": sd, "class": cls, "set": Y})
    return [formula, bound, pre, rain]


# -- 9: measure on trees ------------------------------------------------------

def suite_tree_measure(seed=0, profile="desk", corrupt=None):
    te = Check("T_e has measure 1 - 2^(1-|D|)", "|D| <= 5, depth <= 14")
    bad = Check("Bad(H, k) lies below the threshold level", "k in {2, 3}, |H| <= 2, random trees")
    inv = Check("construction keeps measure >= 2^-k_s", "every step")
    path = Check("constructed set is homogeneous for a path", "characteristic string at full depth")
    for d in range(1, 6):
        for D in combinations(range(7), d):
            T = tm.build_Te(D, min(14, max(D) + 1 + d))
            te.case(tm.measure_exact(T) == tm.te_measure_formula(D), D)
    n_trees = PROFILES[profile]["trees"]
    for sd in range(seed, seed + n_trees):
        T = tm.random_tree(sd, 9, density=0.7)
        for k in (2, 3):
            for r in range(3):
                for H in combinations(range(T.depth), r):
                    if tm.measure_exact(T, (tm.Cylinder(H),)) < Fraction(1, 2 ** k):
                        continue
                    s = tm.s_threshold(T, H, k)
                    B = tm.bad_set(T, H, k)
                    bad.case(not B or max(B) <= s, {"seed": sd, "k": k, "H": H, "bad": B, "s": s})
    for sd in range(seed, seed + n_trees):
        rng = random.Random(sd)
        T = tm.random_tree(sd, 12, density=rng.choice([0.6, 0.8, 0.95]))
        if rng.random() < 0.5:
            T = T.intersect(tm.build_Te(rng.sample(range(12), 4), 12))
        if tm.measure_exact(T) < Fraction(1, 4):
            continue
        try:
            H, ks, _ = tm.homogeneous_build(T, 2, lambda X, n: min(set(range(T.depth + 1)) - X))
            inv.case(True)
        except AssertionError as exc:
            inv.case(False, {"seed": sd, "error": str(exc)})
            continue
        path.case(tm.is_path_homogeneous(T, tm.characteristic(H, T.depth), 0), {"seed": sd, "H": H})
    return [te, bad, inv, path]


# -- 10: bushy forcing --------------------------------------------------------

def suite_bushy(seed=0, profile="desk", corrupt=None):
    add = Check("union of small sets is small for the summed bound", "universe <= 7, length <= 4")
    clo = Check("closure of a small set stays small", "same instances")
    low = Check("low construction reaches length 8 with a prerainbow", "N = 40, 5 functionals")
    dec = Check("one halt/diverge decision per functional", "same runs")
    ext = Check("extraction yields a rainbow of size >= 6", "same runs")
    rng = random.Random(seed)
    for _ in range(PROFILES[profile]["trials"]):
        M, L = rng.randrange(3, 8), rng.randrange(1, 5)
        B1, B2 = bf.random_bad_set(rng, M, L, 0.3), bf.random_bad_set(rng, M, L, 0.3)
        g1, g2 = bf.random_bound(rng, L), bf.random_bound(rng, L)
        big1, big2 = bf.big_table(B1, g1), bf.big_table(B2, g2)
        bigU = bf.big_table(B1.union(B2), bf.add_bounds(g1, g2))
        C = bf.closure(B1, g1)
        bigC = bf.big_table(C, g1)
        for m in range(1 << M):
            if m.bit_count() > L:
                continue
            if not big1[m] and not big2[m]:
                add.case(not bigU[m], {"B1": B1.members(), "B2": B2.members(), "at": bf.to_string(m)})
            if not big1[m]:
                clo.case(not bigC[m], {"B": B1.members(), "at": bf.to_string(m)})
    n_runs = PROFILES[profile]["low_runs"]
    for sd in range(seed, seed + n_runs):
        f = observe(stability_instance(sd, 40, 8, "mixed", junk=0.2), 8)
        fs = bf.random_functionals(sd, 5, 16)
        run = bf.run_low_construction(f, fs, 10, 8, M=16)
        low.case(run.status == "ok" and len(run.G) >= 8 and is_prerainbow(f, run.G, 8),
                 {"seed": sd, "G": run.G, "status": run.status, "message": run.message})
        dec.case(sorted(e for e, _ in run.decisions) == list(range(len(fs))),
                 {"seed": sd, "decisions": run.decisions})
        Y, _ = prerainbow_to_rainbow(f, run.G)
        ext.case(is_rainbow(f, Y) and len(Y) >= 6, {"seed": sd, "set": Y})
    return [add, clo, low, dec, ext]


# -- 11: classifier lattice ---------------------------------------------------

def suite_classifier(seed=0, profile="desk", corrupt=None):
    chk = Check("strongly => rainbow-stable => weakly rainbow-stable",
                "every pair coloring built in this run plus generated instances")
    pool = list(OBSERVED)
    for sd in _seeds(seed, profile):
        for cls in STABILITY_CLASSES:
            pool.append((stability_instance(sd, 24, 6, cls), 6))
    for f, w in pool:
        try:
            fl = classify_stability(f, w)
        except AssertionError as exc:
            chk.case(False, str(exc))
            continue
        ok = ((not fl["strongly_rainbow_stable"] or fl["rainbow_stable"])
              and (not fl["rainbow_stable"] or fl["weakly_rainbow_stable"]))
        chk.case(ok, fl)
    return [chk]


# -- 12: tournaments from stable colorings and set sequences ------------------

def suite_em_sts_coh(seed=0, profile="desk", corrupt=None):
    N, k = 14, 2
    cls = Check("transitive sets are thin or cohesive", "all transitive sets of size <= 6, N = 14, k = 2")
    cyc = Check("a violated classification exhibits the 4-cycle", "every 6-set that violates")
    seeds = _seeds(seed, profile)
    for sd in seeds:
        rng = random.Random(sd)
        f = random_stable_pairs(sd, N, rng.randrange(2, 8), colors=2 * k + 1)
        R = [frozenset(x for x in range(N) if rng.random() < 0.5) for _ in range(k)]
        T = rr.em_to_sts_or_coh(f, R)
        for m in range(1, 7):
            for H in find_transitive_subtournaments(T, m):
                c = rr.classify_solution(f, R, H)
                cls.case(not isinstance(c, rr.Violation), {"seed": sd, "set": H})
        for H in combinations(range(N), 6):
            c = rr.classify_solution(f, R, H)
            if isinstance(c, rr.Violation):
                cyc.case(rr.four_cycle(T, c) is not None, {"seed": sd, "set": H})
    return [cls, cyc]


SUITES = {
    "em_dnr": suite_em_dnr,
    "sem_dnr": suite_sem_dnr,
    "ts2_dnr": suite_ts2_dnr,
    "jump_lower": suite_jump_lower,
    "rrt_ts_fs": suite_rrt_ts_fs,
    "srt_sfs": suite_srt_sfs,
    "finite_injury": suite_finite_injury,
    "bad_family": suite_bad_family,
    "tree_measure": suite_tree_measure,
    "bushy": suite_bushy,
    "classifier": suite_classifier,
    "em_sts_coh": suite_em_sts_coh,
}


def run_suite(name, seed=0, profile="desk", corrupt=None):
    if name not in SUITES:
        raise KeyError(name)
    t = time.perf_counter()
    checks = SUITES[name](seed=seed, profile=profile, corrupt=corrupt)
    return Report(name, seed, checks, time.perf_counter() - t)
