"""Tournament diagonalization on a random limit table.

Every stabilized index e closes a 3-cycle with each later stage, so no
large transitive set can contain its limit set.
"""
from rainbowlab import dnc_reductions as dnc
from rainbowlab.core_model import find_three_cycle
from rainbowlab.harness.suites import family_limit
from rainbowlab.solvers import find_transitive_subtournaments

N = 60
g = family_limit(seed=3, families=[dnc.em_family(e) for e in range(3)], N=N, top=40, stab_bound=39)
T = dnc.build_em_tournament(g, N)

for e in range(3):
    D = dnc.em_family(e).decode(g.limit_value(e))
    s0 = dnc.em_threshold(g, e)
    s = N - 1
    print(f"index {e}: limit set {sorted(D)}, threshold {s0}, cycle with stage {s}: "
          f"{find_three_cycle(T, D | {s})}")

H = next(find_transitive_subtournaments(T, 4))
print(f"first transitive 4-set {sorted(H)}; its escaping value {dnc.em_solution(H, 0)} "
      f"differs from limit {g.limit_value(0)}")
