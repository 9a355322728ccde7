"""Stable Kneser graphs, the min-based coloring, and an exact chromatic solver."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import ParameterError, ResourceError, DEFAULT_CAPS
from .stable_sets import (
    KSubset,
    StabilityVector,
    enumerate_stable,
    in_theorem_regime,
    is_stable,
    theorem_sum,
)

__all__ = [
    "StableKneserGraph",
    "ColoringCertificate",
    "ChromaticResult",
    "build_graph",
    "canonical_coloring",
    "verify_coloring",
    "chromatic_number_exact",
    "greedy_clique",
    "lovasz_bound_report",
    "corollary10_check",
    "graph_report",
]


@dataclass(frozen=True)
class StableKneserGraph:
    n: int
    k: int
    s: StabilityVector
    vertices: tuple[KSubset, ...]
    # neighbours[i] is a bitmask over vertex indices
    neighbours: tuple[int, ...]

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def edges(self) -> list[tuple[int, int]]:
        out = []
        for i, nb in enumerate(self.neighbours):
            j = i + 1
            rest = nb >> j
            while rest:
                if rest & 1:
                    out.append((i, j))
                rest >>= 1
                j += 1
        return out

    @property
    def num_edges(self) -> int:
        return sum(bin(nb).count("1") for nb in self.neighbours) // 2

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self.neighbours[i] >> j & 1)

    def neighbourhood(self, i: int) -> list[int]:
        nb = self.neighbours[i]
        return [j for j in range(len(self.vertices)) if nb >> j & 1]

    def degree(self, i: int) -> int:
        return bin(self.neighbours[i]).count("1")

    def params_json(self) -> dict:
        return {"n": self.n, "k": self.k, "s": self.s.to_json()}


@dataclass(frozen=True)
class ColoringCertificate:
    colors: tuple[int, ...]
    color_count: int
    proper: bool

    @classmethod
    def check(cls, graph: StableKneserGraph, colors: Sequence[int]) -> "ColoringCertificate":
        colors = tuple(int(c) for c in colors)
        return cls(colors, len(set(colors)), verify_coloring(graph, colors))


@dataclass(frozen=True)
class ChromaticResult:
    chi: int
    witness: ColoringCertificate
    infeasibility_log: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.witness.proper or self.witness.color_count != self.chi:
            raise AssertionError("chromatic witness does not certify chi")


def build_graph(n: int, k: int, s) -> StableKneserGraph:
    """KG(n,k) restricted to s-stable vertices, adjacency = disjointness."""
    s = s if isinstance(s, StabilityVector) else StabilityVector(s)
    verts = enumerate_stable(n, k, s)
    masks = [v.mask for v in verts]
    nbrs = []
    for i, a in enumerate(masks):
        nb = 0
        for j, b in enumerate(masks):
            if a & b == 0 and i != j:
                nb |= 1 << j
        nbrs.append(nb)
    return StableKneserGraph(n, k, s, tuple(verts), tuple(nbrs))


def canonical_coloring(A: KSubset, n: int, s) -> int:
    """``min(min A, n - (s_1 + ... + s_{k-1}))``.

    Proper on the whole graph whenever the theorem hypotheses hold.
    """
    s = s if isinstance(s, StabilityVector) else StabilityVector(s)
    if A.ambient_n != n:
        A = KSubset(A.elements, n)
    if not is_stable(A, s):
        raise ParameterError(f"{A} is not {s}-stable in [{n}]")
    return min(A.elements[0], n - theorem_sum(s))


def verify_coloring(graph: StableKneserGraph, colors: Sequence[int]) -> bool:
    if len(colors) != graph.num_vertices:
        raise ParameterError("coloring must assign a color to every vertex")
    for i, j in graph.edges:
        if colors[i] == colors[j]:
            return False
    return True


def greedy_clique(graph: StableKneserGraph) -> list[int]:
    """A maximal clique grown greedily from every start vertex; the largest wins."""
    best: list[int] = []
    nv = graph.num_vertices
    for start in range(nv):
        clique = [start]
        cand = graph.neighbours[start]
        while cand:
            # take the candidate with most neighbours among the remaining candidates
            pick, score = -1, -1
            for v in range(nv):
                if cand >> v & 1:
                    sc = bin(graph.neighbours[v] & cand).count("1")
                    if sc > score:
                        pick, score = v, sc
            clique.append(pick)
            cand &= graph.neighbours[pick]
        if len(clique) > len(best):
            best = sorted(clique)
    return best


class _Search:
    """Backtracking c-colorability with DSATUR vertex selection.

    Vertices are picked by maximum saturation, ties to the lowest index; colors
    are tried lowest first and a fresh color is only opened as ``max_used + 1``,
    which removes color-permutation symmetry without losing completeness.
    """

    def __init__(self, neighbours: Sequence[int], c: int):
        self.nb = list(neighbours)
        self.nv = len(self.nb)
        self.c = c
        self.color = [0] * self.nv
        self.count = [[0] * (c + 2) for _ in range(self.nv)]
        self.sat = [0] * self.nv
        self.nodes = 0

    def _pick(self) -> int:
        best, best_sat = -1, -1
        for v in range(self.nv):
            if self.color[v] == 0 and self.sat[v] > best_sat:
                best, best_sat = v, self.sat[v]
        return best

    def _assign(self, v: int, col: int, delta: int):
        nb = self.nb[v]
        u = 0
        while nb:
            if nb & 1:
                cnt = self.count[u]
                if delta > 0:
                    if cnt[col] == 0:
                        self.sat[u] += 1
                    cnt[col] += 1
                else:
                    cnt[col] -= 1
                    if cnt[col] == 0:
                        self.sat[u] -= 1
            nb >>= 1
            u += 1

    def run(self, placed: int = 0, max_used: int = 0) -> bool:
        self.nodes += 1
        if placed == self.nv:
            return True
        v = self._pick()
        cnt = self.count[v]
        for col in range(1, min(max_used + 1, self.c) + 1):
            if cnt[col]:
                continue
            self.color[v] = col
            self._assign(v, col, +1)
            if self.run(placed + 1, max(max_used, col)):
                return True
            self._assign(v, col, -1)
            self.color[v] = 0
        return False


def _try_colors(neighbours: Sequence[int], c: int) -> tuple[list[int] | None, int]:
    search = _Search(neighbours, c)
    ok = search.run()
    return (list(search.color) if ok else None), search.nodes


def chromatic_number_exact(graph: StableKneserGraph, vertex_budget: int | None = None) -> ChromaticResult:
    """Exact chromatic number with a witness and a logged exhaustive failure at chi - 1."""
    budget = DEFAULT_CAPS.vertex_budget if vertex_budget is None else vertex_budget
    nv = graph.num_vertices
    if nv > budget:
        raise ResourceError(f"graph has {nv} vertices, vertex budget is {budget}")
    if nv == 0:
        return ChromaticResult(0, ColoringCertificate((), 0, True), {"trivial": "empty graph"})

    clique = greedy_clique(graph)
    log: dict = {"clique_lower_bound": len(clique), "clique": clique, "levels": []}
    c = len(clique)
    while True:
        colors, nodes = _try_colors(graph.neighbours, c)
        log["levels"].append({"colors": c, "feasible": colors is not None, "nodes": nodes})
        if colors is not None:
            break
        c += 1
    chi = c
    if chi >= 2 and not any(lv["colors"] == chi - 1 for lv in log["levels"]):
        # the clique already rules out chi - 1; search exhaustively anyway
        none, nodes = _try_colors(graph.neighbours, chi - 1)
        if none is not None:
            raise AssertionError("clique bound contradicted by search")
        log["levels"].insert(0, {"colors": chi - 1, "feasible": False, "nodes": nodes})
    log["exhaustive_failure_at"] = chi - 1
    return ChromaticResult(chi, ColoringCertificate.check(graph, colors), log)


def graph_report(graph: StableKneserGraph, result: ChromaticResult | None = None) -> dict:
    n, s = graph.n, graph.s
    formula = n - theorem_sum(s) if in_theorem_regime(n, s) else None
    out = {
        "params": graph.params_json(),
        "num_vertices": graph.num_vertices,
        "num_edges": graph.num_edges,
        "chi": None,
        "formula": formula,
        "match": None,
        "witness": None,
    }
    if result is not None:
        out["chi"] = result.chi
        out["witness"] = list(result.witness.colors)
        out["match"] = None if formula is None else result.chi == formula
    return out


def lovasz_bound_report(n: int, k: int, s, sphere_dim_verified: int | None) -> dict:
    """Lower bound on chi from a verified homology sphere of dimension d.

    A d-sphere is (d-1)-connected, so the neighbourhood complex bound gives
    ``chi >= d + 2``.  Only homology is computed here; connectivity itself is
    taken from the sphere theorem, and the report says so.
    """
    s = s if isinstance(s, StabilityVector) else StabilityVector(s)
    expected = n - theorem_sum(s) - 2
    report = {
        "params": {"n": n, "k": k, "s": s.to_json()},
        "sphere_dim_expected": expected,
        "sphere_dim_verified": sphere_dim_verified,
    }
    if sphere_dim_verified is None:
        report["bound"] = None
        report["status"] = "no bound emitted"
        return report
    report["bound"] = sphere_dim_verified + 2
    report["status"] = ("conditional: homology sphere verified; "
                        "connectivity asserted by the sphere theorem, not computed")
    return report


def corollary10_check(n: int, k: int, budget: int | None = None) -> dict:
    """Embed KG(n-1,k)_{(3,..,3,2)} into KG(n,k)_{3-stab} and compare chromatic numbers."""
    if k < 1 or n < 3 * k:
        raise ParameterError(f"need n >= 3k, got n={n}, k={k}")
    budget = DEFAULT_CAPS.vertex_budget if budget is None else budget
    s_small = StabilityVector.uniform(3, k, last=2)
    s_big = StabilityVector.uniform(3, k)
    small = build_graph(n - 1, k, s_small)
    big = build_graph(n, k, s_big)
    big_index = {v.elements: i for i, v in enumerate(big.vertices)}
    embedding = all(is_stable(KSubset(v.elements, n), s_big) for v in small.vertices)
    # adjacency is disjointness in both graphs, so vertex inclusion makes it an induced subgraph
    edges_ok = embedding and all(
        big.adjacent(big_index[small.vertices[i].elements], big_index[small.vertices[j].elements])
        for i, j in small.edges
    )
    bound = n - 3 * (k - 1) - 1
    report = {
        "params": {"n": n, "k": k},
        "small": {"n": n - 1, "s": s_small.to_json(), "num_vertices": small.num_vertices},
        "big": {"n": n, "s": s_big.to_json(), "num_vertices": big.num_vertices},
        "embedding": embedding,
        "subgraph": edges_ok,
        "bound": bound,
        "chi_small": None,
        "chi_big": None,
        "bound_holds": None,
        "cap_hit": False,
    }
    try:
        report["chi_small"] = chromatic_number_exact(small, budget).chi
        report["chi_big"] = chromatic_number_exact(big, budget).chi
    except ResourceError:
        report["cap_hit"] = True
    if report["chi_big"] is not None:
        report["bound_holds"] = report["chi_big"] >= bound
    report["ok"] = bool(embedding and edges_ok and report["bound_holds"] is not False)
    return report
