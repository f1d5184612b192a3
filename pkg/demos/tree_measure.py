"""Exact measures of dyadic trees and a homogeneous set built inside one."""
from rainbowlab import tree_measure as tm
from rainbowlab.rainbow_reductions import least_outside

for D in ({1, 3}, {0, 1, 2}, {0, 4, 7}):
    T = tm.build_Te(D, max(D) + 2)
    print(f"T_e for {sorted(D)}: measure {tm.measure_exact(T)}, formula {tm.te_measure_formula(D)}")

T = tm.build_Te({0, 5}, 14).intersect(tm.build_Te({3, 9}, 14))
print("intersection measure", tm.measure_exact(T))
print("epsilon(2) =", tm.epsilon(2), " k sequence 2 ->", tm.next_k(2), "->", tm.next_k(tm.next_k(2)))

H, ks, _ = tm.homogeneous_build(T, 2, least_outside)
print("homogeneous set", sorted(H), "k values", ks)
print("path homogeneous for color 0:", tm.is_path_homogeneous(T, tm.characteristic(H, 14), 0))
