"""Stable subsets, the graphs they span and their exact chromatic numbers.

Walks a few parameter choices, prints vertex and edge counts, the exact
chromatic number found by the solver and the value n - (s_1 + ... + s_{k-1}).
"""

from kneser_topo import build_graph, canonical_coloring, chromatic_number_exact, enumerate_stable, verify_coloring

CASES = [(5, 2, (2, 2)), (6, 2, (2, 1)), (7, 3, (2, 2, 1)), (9, 3, (3, 2, 2)), (9, 3, (3, 3, 3))]

for n, k, s in CASES:
    sets = enumerate_stable(n, k, s)
    g = build_graph(n, k, s)
    res = chromatic_number_exact(g)
    line = f"n={n} k={k} s={s}: {len(sets)} stable sets, {g.num_edges} edges, chi={res.chi}"
    if g.s.theorem_regime and n >= sum(s[:-1]) + 2:
        canon = [canonical_coloring(v, n, s) for v in g.vertices]
        line += f", formula {n - sum(s[:-1])}, canonical colouring proper: {verify_coloring(g, canon)}"
    else:
        line += " (outside the range where a formula is claimed)"
    print(line)
