"""The operator chain that contracts half of the pair poset, level by level.

Prints the direction and image size of each operator, the final minimum and
the suspension split of the whole poset.
"""

from kneser_topo import suspension_check, theorem7_base_case, theorem7_operator_chain

base = theorem7_base_case(2, (2, 1))
print(f"base case n=4: U={base['U']} V={base['V']}, component sizes {base['sizes']}, ok={base['ok']}")

n, k, s = 6, 2, (2, 1)
for i in range(k):
    rep = theorem7_operator_chain(n, k, s, i)
    steps = ", ".join(f"{op.name} {op.direction} -> {len(op.image)}" for op in rep)
    print(f"level {i}: {steps}")
print(f"unique minimum of the last level: {rep.final_minimum}")

sus = suspension_check(n, k, s)
print(f"union {sus['union_identity']}, intersection {sus['intersection_identity']}, "
      f"both halves acyclic {sus['p1_acyclic'] and sus['p2_acyclic']}, Betti shift {sus['betti_shift']}")
