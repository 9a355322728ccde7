"""The 3-stable graph contains a copy of a smaller stable graph.

For each (n, k) the embedding is checked and the chromatic number of the
3-stable graph compared with the bound n - 3(k-1) - 1.
"""

from kneser_topo import corollary10_check

for n, k in [(6, 2), (9, 3), (10, 3), (11, 3)]:
    rep = corollary10_check(n, k)
    print(f"n={n} k={k}: {rep['big']['num_vertices']} vertices, embedding {rep['embedding']}, "
          f"chi={rep['chi_big']} >= {rep['bound']}: {rep['bound_holds']}")
