"""Random pair colorings with a chosen tail behaviour."""

import random

from .core_model import StageColoring, TailWindow, pair_encode

STABILITY_CLASSES = ("monk", "married", "mixed", "drifting")


def _shared(u, s):
    return 3 * pair_encode(u, s)


def _fresh(u, s):
    return 3 * pair_encode(u, s) + 1


def _matching(rng, points, p):
    pts = list(points)
    rng.shuffle(pts)
    partner = {}
    for a, b in zip(pts[::2], pts[1::2]):
        if rng.random() < p:
            partner[a], partner[b] = b, a
    return partner


def stability_instance(seed, N, W, cls="mixed", junk=0.5, marry=0.5):
    """2-bounded coloring of pairs on [0, N) whose window [N-W, N) behaves
    as `cls` says:

    monk      every point gets a fresh color at every window stage
    married   points below the window are perfectly matched into couples
    mixed     some couples, the rest monks
    drifting  mixed, plus one couple that separates halfway through the window

    Stages before the window pair points at random.
    """
    if cls not in STABILITY_CLASSES:
        raise ValueError(f"unknown stability class {cls!r}")
    w = TailWindow(W, N)
    start = w.start
    rng = random.Random(seed)
    p = {"monk": 0.0, "married": 1.0}.get(cls, marry)
    people = range(start)
    if cls == "married" and start % 2:
        raise ValueError("married class needs an even number of points below the window")
    partner = _matching(rng, people, p)
    partner.update(_matching(rng, range(start, N), p))
    split = None
    if cls == "drifting":
        couples = sorted((a, b) for a, b in partner.items() if a < b < start)
        if not couples:
            a, b = rng.sample(list(people), 2)
            a, b = min(a, b), max(a, b)
            partner[a], partner[b] = b, a
            couples = [(a, b)]
        split = rng.choice(couples)
    half = start + W // 2
    table = {}
    for s in range(N):
        if s < start:
            local = _matching(rng, range(s), junk)
        else:
            local = {a: b for a, b in partner.items() if a < s and b < s}
            if split is not None and s >= half:
                for a in split:
                    local.pop(a, None)
        for u in range(s):
            v = local.get(u)
            table[(u, s)] = _shared(min(u, v), s) if v is not None else _fresh(u, s)
    return StageColoring(2, N, table)
