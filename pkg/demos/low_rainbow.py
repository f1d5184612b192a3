"""Forcing a rainbow while deciding a few jump questions.

Start from a married coloring, build the bad set of strings holding a
couple, then extend a condition past each functional in turn.
"""
from rainbowlab import bushy_forcing as bf
from rainbowlab.core_model import classify_stability, is_prerainbow, is_rainbow
from rainbowlab.generators import stability_instance
from rainbowlab.solvers import prerainbow_to_rainbow

f = stability_instance(seed=3, N=40, W=8, cls="married")
print("classification:", classify_stability(f, 8))

B = bf.build_Bf(f, 8, 14)
print(f"bad set: {len(B)} strings over {B.M} people")

functionals = bf.random_functionals(seed=1, count=5, M=16)
run = bf.run_low_construction(f, functionals, target=10, w=8)
for e, d in run.decisions:
    print(f"  functional {e}: {d}")
print("G =", run.G, "prerainbow:", is_prerainbow(f, run.G, 8))

Y, dropped = prerainbow_to_rainbow(f, run.G)
print("rainbow", sorted(Y), "dropped", list(dropped), "check:", is_rainbow(f, Y))
