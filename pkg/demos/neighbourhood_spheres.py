"""Homology of neighbourhood complexes, pair posets and Hom posets.

For each instance the three complexes are built and their reduced integral
homology printed; in the theorem range all three are the same sphere.
"""

from kneser_topo import (
    build_graph,
    build_hom_poset,
    build_pair_poset,
    neighborhood_complex,
    order_complex,
    reduced_homology,
)

for n, k, s in [(5, 2, (2, 2)), (6, 2, (2, 1)), (6, 2, (3, 1)), (7, 3, (2, 2, 1))]:
    g = build_graph(n, k, s)
    reports = {
        "N(G)": reduced_homology(neighborhood_complex(g)),
        "pair poset": reduced_homology(order_complex(build_pair_poset(n, k, s))),
        "Hom poset": reduced_homology(order_complex(build_hom_poset(g))),
    }
    dims = ", ".join(f"{name}: S^{r.sphere_dim}" for name, r in reports.items())
    print(f"n={n} k={k} s={s} -> {dims} (expected S^{n - sum(s[:-1]) - 2})")
