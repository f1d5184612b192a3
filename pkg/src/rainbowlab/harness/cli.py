"""Command line: generate instances, run reductions and solvers, and verify
the claim suites.

Exit status: 0 when everything checked passes, 1 when a check fails or a
construction rejects its input, 2 on usage errors.
"""

import argparse
import json
import os
import random
import sys
import time
from math import comb

from .. import bushy_forcing as bf
from .. import dnc_reductions as dnc
from .. import rainbow_reductions as rr
from .. import tree_measure as tm
from ..core_model import TailWindow, pair_encode, Tournament, classify_stability, is_rainbow, is_prerainbow
from ..generators import STABILITY_CLASSES, stability_instance
from ..oracles import make_random_limit, random_set_sequence
from ..solvers import (
    BudgetExhausted, escaping_from_family, find_free_sets, find_rainbows,
    find_thin_sets, find_transitive_subtournaments, prerainbow_to_rainbow,
)
from .instances import InstanceError, InstanceFile, decode, encode
from .suites import PROFILES, SUITES, Check, Report, run_suite, trapped_coloring

PROFILE_VAR = "RAINBOWLAB_PROFILE"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def default_profile():
    p = os.environ.get(PROFILE_VAR, "desk")
    if p not in PROFILES:
        raise UsageError(f"{PROFILE_VAR}={p!r} is not one of {sorted(PROFILES)}")
    return p


def _emit(args, inst):
    if args.out:
        inst.write(args.out)
    if args.format == "structured" or not args.out:
        sys.stdout.write(inst.dumps())
    else:
        print(f"wrote {inst.kind} to {args.out}")


# -- gen ---------------------------------------------------------------------

def _family_bounds(name, args_count, top):
    fams = {"em": dnc.em_family, "sem": dnc.sem_family, "ts2": dnc.ts2_family,
            "srrt_dnr": dnc.srrt_dnr_family}
    if name == "stable_thin":
        # row e must decode under every color index paired with it
        return [min(dnc.stable_thin_family(pair_encode(e, i)).count_below(top) for i in range(2))
                for e in range(args_count)]
    if name not in fams:
        raise UsageError(f"unknown family {name!r}")
    return [fams[name](e).count_below(top) for e in range(args_count)]


def cmd_gen(args):
    seed, N = args.seed, args.domain
    meta = {"seed": seed, "construction": f"gen {args.kind}"}
    if args.kind == "stage_coloring":
        cls = args.cls or "mixed"
        if args.window >= N:
            raise UsageError(f"window {args.window} must be smaller than the domain {N}")
        if cls == "two_bounded":
            obj = rr.random_two_bounded(seed, args.arity, N)
        elif cls in ("trapped1", "trapped2"):
            obj = trapped_coloring(seed, N, int(cls[-1]))
        elif cls in STABILITY_CLASSES:
            obj = stability_instance(seed, N, args.window, cls)
            meta["window"] = args.window
            meta["classification"] = classify_stability(obj, args.window)
        else:
            raise UsageError(f"unknown class {cls!r}")
        meta["class"] = cls
    elif args.kind == "limit_function":
        S = args.stages or N
        TailWindow(args.window, S)
        stab = args.stab if args.stab is not None else S - args.window - 1
        if args.family:
            values = _family_bounds(args.family, args.args, max(stab, 1))
            meta["family"] = args.family
        else:
            values = args.values
        obj = make_random_limit(seed, args.args, S, values, stab)
    elif args.kind == "tournament":
        rng = random.Random(seed)
        obj = Tournament(N)
        for x in range(N):
            for y in range(x + 1, N):
                obj.set(x, y, rng.random() < 0.5)
    elif args.kind == "tree":
        if args.te:
            D = [int(v) for v in args.te.split(",")]
            obj = tm.build_Te(D, args.depth)
            meta["D"] = D
        else:
            obj = tm.random_tree(seed, args.depth)
    elif args.kind == "family":
        obj = random_set_sequence(seed, args.count, N)
    elif args.kind == "condition":
        f = stability_instance(seed, N, args.window, args.cls or "mixed")
        B = bf.build_Bf(f, args.window, args.universe)
        g = bf.successor_bound(B.L)
        obj = bf.Condition((), g, bf.closure(B, g, check_above=())).certify()
        meta["coloring_seed"] = seed
    else:
        raise UsageError(f"unknown kind {args.kind!r}")
    _emit(args, encode(obj, meta))
    return EXIT_OK


# -- reduce ------------------------------------------------------------------

# name -> (input kind, description of what the output guarantees)
REDUCTIONS = {
    "em_tournament": ("limit_function", "every stabilized index closes 3-cycles with later stages"),
    "semo_tournament": ("limit_function", "as em_tournament, with sets above the index"),
    "ts2_coloring": ("limit_function", "i-avoiding sets never start with the limit set"),
    "stable_thin": ("limit_function", "stable coloring whose thin sets escape the limit"),
    "srrt_diag": ("limit_function", "rainbow-stable 2-bounded coloring whose rainbows escape the limit"),
    "jump_lower": ("limit_function", "rainbows are rainbows for the limit coloring"),
    "rainbow_to_thin": ("stage_coloring", "trimmed rainbows are thin"),
    "rainbow_to_free": ("stage_coloring", "paired rainbows are free"),
    "stabilize_strongly": ("stage_coloring", "strongly rainbow-stable with the same rainbows"),
    "srt_to_sfs": ("stage_coloring", "stable six-coloring"),
    "em_to_sts_or_coh": ("stage_coloring", "transitive sets are thin or cohesive"),
    "wsrrt_to_jump_rainbow": ("stage_coloring", "coloring by least tail-equal predecessor"),
}

ARITY = {"srt_to_sfs": 2, "stabilize_strongly": 2, "em_to_sts_or_coh": 2,
         "wsrrt_to_jump_rainbow": 2}


def cmd_reduce(args):
    if args.name not in REDUCTIONS:
        raise UsageError(f"unknown reduction {args.name!r}; choose from {sorted(REDUCTIONS)}")
    want, claim = REDUCTIONS[args.name]
    inst = InstanceFile.read(args.input)
    if inst.kind != want:
        raise UsageError(f"{args.name} takes a {want} file, got {inst.kind}")
    x = decode(inst)
    name = args.name
    need = ARITY.get(name)
    if need is not None and x.arity != need:
        raise UsageError(f"{name} takes a coloring of {need}-tuples, got {x.arity}-tuples")
    if name == "jump_lower":
        rows = comb(x.stage_bound - 1, args.arity)
        if x.arg_bound < rows:
            raise UsageError(f"jump_lower with arity {args.arity} over {x.stage_bound} stages "
                             f"needs {rows} rows, the file has {x.arg_bound}")
    if name == "em_tournament":
        out = dnc.build_em_tournament(x, x.stage_bound)
    elif name == "semo_tournament":
        out = dnc.build_semo_tournament(x, x.stage_bound)
    elif name == "ts2_coloring":
        out = dnc.build_ts2_coloring(x, x.stage_bound)
    elif name == "stable_thin":
        out = dnc.build_stable_thin_diag(x, x.stage_bound)
    elif name == "srrt_diag":
        out = dnc.build_srrt_diag_coloring(x, x.stage_bound)
    elif name == "jump_lower":
        out = rr.jump_lower(x, args.arity, x.stage_bound)
    elif name == "rainbow_to_thin":
        out = rr.rainbow_to_thin(x)
    elif name == "rainbow_to_free":
        out = rr.rainbow_to_free(x, args.t, args.domain)
    elif name == "stabilize_strongly":
        out = rr.stabilize_strongly(x, args.window)
    elif name == "srt_to_sfs":
        out = rr.srt_to_sfs(x)
    elif name == "em_to_sts_or_coh":
        if not args.family:
            raise UsageError("em_to_sts_or_coh needs --family")
        fam = InstanceFile.read(args.family)
        if fam.kind != "family":
            raise UsageError(f"--family takes a family file, got {fam.kind}")
        out = rr.em_to_sts_or_coh(x, list(decode(fam).sets))
    else:
        out = rr.wsrrt_to_jump_rainbow(x, args.window)
    meta = dict(inst.meta)
    meta.update({"construction": name, "claim": claim, "source_kind": inst.kind})
    _emit(args, encode(out, meta))
    return EXIT_OK


# -- solve -------------------------------------------------------------------

def cmd_solve(args):
    inst = InstanceFile.read(args.input)
    x = decode(inst)
    searches = {
        "rainbow": ("stage_coloring", lambda: find_rainbows(x, args.size, args.budget)),
        "thin": ("stage_coloring", lambda: find_thin_sets(x, args.size, args.colors, args.budget)),
        "free": ("stage_coloring", lambda: find_free_sets(x, args.size, args.budget)),
        "transitive": ("tournament", lambda: find_transitive_subtournaments(x, args.size, args.budget)),
    }
    want, run = searches[args.problem]
    if inst.kind != want:
        raise UsageError(f"{args.problem} search takes a {want} file, got {inst.kind}")
    found, status = [], "complete"
    try:
        for A in run():
            found.append(sorted(A))
            if args.limit and len(found) >= args.limit:
                status = "limit"
                break
    except BudgetExhausted as exc:
        status = f"budget exhausted after {exc.visited} nodes"
    doc = {"problem": args.problem, "size": args.size, "status": status, "solutions": found}
    if args.format == "structured":
        print(json.dumps(doc, sort_keys=True))
    else:
        print(f"{args.problem} sets of size {args.size}: {len(found)} ({status})")
        for A in found:
            print("  ", A)
    return EXIT_FAIL if status.startswith("budget") else EXIT_OK


# -- verify and pipeline -----------------------------------------------------

def _report(args, rep):
    if args.format == "structured":
        print(json.dumps(rep.as_dict(), sort_keys=True))
    else:
        print(rep.text())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(rep.as_dict(), fh, sort_keys=True, indent=1)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_verify(args):
    profile = args.profile or default_profile()
    rep = run_suite(args.pipeline, seed=args.seed, profile=profile, corrupt=args.corrupt)
    return _report(args, rep)


def _pipe_low_rainbow(args):
    f = stability_instance(args.seed, args.domain, args.window, "mixed", junk=0.2)
    fs = bf.random_functionals(args.seed, 5, 16)
    run = bf.run_low_construction(f, fs, 10, args.window, M=16)
    Y, _ = prerainbow_to_rainbow(f, run.G)
    checks = [Check("construction finished", "5 functionals"),
              Check("G is a prerainbow", f"window {args.window}"),
              Check("extracted set is a rainbow", "greedy extraction")]
    checks[0].case(run.status == "ok", run.message)
    checks[1].case(is_prerainbow(f, run.G, args.window), run.G)
    checks[2].case(is_rainbow(f, Y), sorted(Y))
    return checks, {"G": run.G, "decisions": run.decisions, "rainbow": sorted(Y)}


def _pipe_prerainbow(args):
    f = stability_instance(args.seed, args.domain, args.window, "married", junk=0.2)
    fam = rr.bad_family(f, args.window)
    R, _ = rr.escaping_to_prerainbow(fam, escaping_from_family, target=12)
    Y, _ = prerainbow_to_rainbow(f, R)
    checks = [Check("escaping output is a prerainbow", f"window {args.window}"),
              Check("extracted set is a rainbow", "greedy extraction")]
    checks[0].case(is_prerainbow(f, R, args.window), sorted(R))
    checks[1].case(is_rainbow(f, Y), sorted(Y))
    return checks, {"prerainbow": sorted(R), "rainbow": sorted(Y)}


def _pipe_rainbow_thin(args):
    N = min(args.domain, 14)
    f = rr.random_two_bounded(args.seed, 1, N)
    g = rr.rainbow_to_thin(f)
    chk = Check("every trimmed rainbow is thin", f"rainbows of size <= 6, N = {N}")
    for m in range(3, 7):
        for H in find_rainbows(g, m):
            x, y, trimmed = rr.trim_solution(H)
            chk.case(rr.avoids(f, trimmed, rr.pair_encode(x, y)), sorted(H))
    return [chk], {}


PIPELINES = {
    "low_rainbow": _pipe_low_rainbow,
    "prerainbow": _pipe_prerainbow,
    "rainbow_thin": _pipe_rainbow_thin,
}


def cmd_pipeline(args):
    t = time.perf_counter()
    checks, artifacts = PIPELINES[args.name](args)
    rep = Report(args.name, args.seed, checks, time.perf_counter() - t)
    code = _report(args, rep)
    if args.format == "text" and artifacts:
        for k, v in artifacts.items():
            print(f"  {k}: {v}")
    return code


# -- parser ------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--domain", type=int, default=40)
    common.add_argument("--stages", type=int, default=None)
    common.add_argument("--window", type=int, default=8)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=("text", "structured"), default="text")

    p = argparse.ArgumentParser(prog="rainbowlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate an instance file")
    g.add_argument("kind", choices=("stage_coloring", "limit_function", "tournament",
                                    "tree", "family", "condition"))
    g.add_argument("--class", dest="cls", default=None,
                   help="monk, married, mixed, drifting, two_bounded, trapped1 or trapped2")
    g.add_argument("--arity", type=int, default=2)
    g.add_argument("--args", type=int, default=3)
    g.add_argument("--values", type=int, default=8)
    g.add_argument("--stab", type=int, default=None)
    g.add_argument("--family", default=None, help="em, sem, ts2, srrt_dnr or stable_thin value bounds")
    g.add_argument("--depth", type=int, default=10)
    g.add_argument("--te", default=None, help="comma separated positions for T_e")
    g.add_argument("--count", type=int, default=2)
    g.add_argument("--universe", type=int, default=8)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("reduce", parents=[common], help="apply a reduction to an instance file")
    r.add_argument("name")
    r.add_argument("input")
    r.add_argument("--t", type=int, default=1)
    r.add_argument("--arity", type=int, default=1)
    r.add_argument("--family", default=None)
    r.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", parents=[common], help="search an instance for solutions")
    s.add_argument("problem", choices=("rainbow", "thin", "free", "transitive"))
    s.add_argument("input")
    s.add_argument("--size", type=int, required=True)
    s.add_argument("--colors", type=int, default=2)
    s.add_argument("--budget", type=int, default=None)
    s.add_argument("--limit", type=int, default=20)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", parents=[common], help="run a claim suite")
    v.add_argument("pipeline", choices=sorted(SUITES))
    v.add_argument("--profile", choices=sorted(PROFILES), default=None)
    v.add_argument("--corrupt", choices=("flip",), default=None)
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("pipeline", parents=[common], help="run an end-to-end chain")
    q.add_argument("name", choices=sorted(PIPELINES))
    q.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, InstanceError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (rr.NotApplicable, dnc.CardinalityError, bf.ConditionError) as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
