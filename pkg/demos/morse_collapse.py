"""The six-stage matching collapse, and where it breaks.

On n = 4, 5 every stage is a valid acyclic matching and the critical cells
end as the order complex of the smaller poset.  On n = 6 the second stage
leaves four cells critical; the chain printed below is one of them.
"""

from kneser_topo import classify_chain, theorem8_verify

for n in (4, 5, 6):
    rep = theorem8_verify(n, 2, (2, 1))
    print(f"n={n}: {rep['num_cells']} cells -> target {rep['num_target_cells']}, ok={rep['ok']}, "
          f"homology equal={rep['homology_equal']}")
    for st in rep["stages"]:
        if not st["ok"]:
            reasons = sorted({f["reason"] for f in st["failures"]})
            print(f"   {st['stage']}: {reasons}")

witness = [((3, 5), (1, 6)), ((2, 3, 4, 5), (1, 6))]
feat = classify_chain(witness, 6, 2, (2, 1))
print("left-over chain", witness)
print(f"   in H2: {feat['in_H2']}, C={feat['C']}, D={feat['D']}, E={feat['E']}, e={feat['e']}")
