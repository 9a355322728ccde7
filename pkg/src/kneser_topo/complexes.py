"""Simplicial complexes, finite posets, and the complexes attached to a stable Kneser graph.

Simplices are sorted tuples of integer vertex ids.  A complex may carry
``labels`` mapping ids to hashable objects (pair elements, graph vertices);
comparisons between complexes built over different id schemes go through the
labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Callable, Hashable, Iterable, Sequence

from .errors import DEFAULT_CAPS, ParameterError, ResourceError
from .kneser_graph import StableKneserGraph
from .stable_sets import StabilityVector, elements_of, mask_of, stable_masks

__all__ = [
    "SimplicialComplex",
    "Poset",
    "PairElement",
    "HomPosetElement",
    "neighborhood_complex",
    "build_pair_poset",
    "build_hom_poset",
    "order_complex",
    "complex_equality",
]


Simplex = tuple


class SimplicialComplex:
    """Finite abstract simplicial complex stored as facets plus a closure index."""

    def __init__(self, simplices: Iterable[Sequence[int]], labels: Sequence[Hashable] | None = None,
                 max_simplices: int | None = None, closed: bool = False):
        cap = DEFAULT_CAPS.max_simplices if max_simplices is None else max_simplices
        cells: set[Simplex] = set()
        if closed:
            cells = {tuple(sorted(x)) for x in simplices}
            cells.discard(())
            if len(cells) > cap:
                raise ResourceError(f"complex has {len(cells)} simplices, cap is {cap}")
        else:
            for f in {tuple(sorted(x)) for x in simplices}:
                if f in cells or not f:
                    continue
                for r in range(1, len(f) + 1):
                    cells.update(combinations(f, r))
                if len(cells) > cap:
                    raise ResourceError(f"complex exceeds {cap} simplices")
        self._cells = frozenset(cells)
        self.labels = tuple(labels) if labels is not None else None

    @classmethod
    def from_facets(cls, facets, labels=None, max_simplices=None) -> "SimplicialComplex":
        return cls(facets, labels, max_simplices)

    @classmethod
    def empty(cls) -> "SimplicialComplex":
        return cls(())

    @property
    def simplices(self) -> frozenset:
        return self._cells

    def __contains__(self, simplex) -> bool:
        return tuple(sorted(simplex)) in self._cells

    def __len__(self) -> int:
        return len(self._cells)

    def __iter__(self):
        return iter(self._cells)

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(s[0] for s in self._cells if len(s) == 1))

    @cached_property
    def facets(self) -> tuple[Simplex, ...]:
        faces = {s[:i] + s[i + 1:] for s in self._cells for i in range(len(s))}
        return tuple(sorted(self._cells - faces))

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self._cells), default=-1)

    def by_dimension(self) -> dict[int, list[Simplex]]:
        out: dict[int, list[Simplex]] = {}
        for s in self._cells:
            out.setdefault(len(s) - 1, []).append(s)
        for d in out:
            out[d].sort()
        return out

    def f_vector(self) -> list[int]:
        counts = [0] * (self.dimension + 1)
        for s in self._cells:
            counts[len(s) - 1] += 1
        return counts

    def is_closed(self) -> bool:
        cells = self._cells
        return all(s[:i] + s[i + 1:] in cells for s in cells if len(s) > 1 for i in range(len(s)))

    def label_set(self) -> frozenset:
        """Simplices as frozensets of labels (ids when no labels are attached)."""
        if self.labels is None:
            return frozenset(frozenset(s) for s in self._cells)
        lab = self.labels
        return frozenset(frozenset(lab[v] for v in s) for s in self._cells)

    def subcomplex(self, simplices: Iterable[Simplex]) -> "SimplicialComplex":
        return SimplicialComplex(simplices, self.labels, closed=True)

    def to_json(self) -> dict:
        lab = self.labels

        def enc(v):
            if lab is None:
                return v
            x = lab[v]
            return x.to_json() if hasattr(x, "to_json") else x

        return {
            "vertices": [enc(v) for v in self.vertices],
            "facets": [[enc(v) for v in f] for f in self.facets],
        }

    def __repr__(self) -> str:
        return f"SimplicialComplex(dim={self.dimension}, f={self.f_vector()})"


def complex_equality(a: SimplicialComplex, b: SimplicialComplex) -> bool:
    """Identical simplex sets, compared through labels when both complexes have them."""
    if a.labels is not None and b.labels is not None:
        return a.label_set() == b.label_set()
    return a.simplices == b.simplices


def set_bits(mask: int):
    """Indices of the set bits of ``mask``, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """Finite poset on ``elements`` (indices 0..m-1) with up-sets held as bitmasks."""

    def __init__(self, elements: Sequence[Hashable], leq: Callable[[object, object], bool] | None = None,
                 up: Sequence[int] | None = None, check: bool = True):
        self.elements = tuple(elements)
        m = len(self.elements)
        if up is None:
            if leq is None:
                raise ParameterError("need a leq relation or up-sets")
            els = self.elements
            up = []
            for i in range(m):
                mask = 0
                for j in range(m):
                    if leq(els[i], els[j]):
                        mask |= 1 << j
                up.append(mask)
        self.up = tuple(up)
        down = [0] * m
        for i, mask in enumerate(self.up):
            bit = 1 << i
            for j in set_bits(mask):
                down[j] |= bit
        self.down = tuple(down)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if check:
            self._check_order()

    def _check_order(self):
        for i, mask in enumerate(self.up):
            if not mask >> i & 1:
                raise ParameterError(f"relation not reflexive at {self.elements[i]!r}")
            if (mask & self.down[i]) != 1 << i:
                raise ParameterError(f"relation not antisymmetric at {self.elements[i]!r}")
            for j in set_bits(mask):
                if self.up[j] & ~mask:
                    raise ParameterError("relation not transitive")

    def __len__(self) -> int:
        return len(self.elements)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def lt(self, i: int, j: int) -> bool:
        return i != j and self.leq(i, j)

    def leq_elements(self, x, y) -> bool:
        return self.leq(self.index[x], self.index[y])

    def strict_up(self, i: int) -> int:
        return self.up[i] & ~(1 << i)

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Pairs (i, j) with i < j and nothing strictly between."""
        out = []
        for i in range(len(self)):
            above = self.strict_up(i)
            for j in set_bits(above):
                if not above & self.down[j] & ~(1 << j):
                    out.append((i, j))
        return tuple(sorted(out))

    def minimal(self) -> list[int]:
        return [i for i in range(len(self)) if self.down[i] == 1 << i]

    def maximal(self) -> list[int]:
        return [i for i in range(len(self)) if self.up[i] == 1 << i]

    def minimum(self) -> int | None:
        full = (1 << len(self)) - 1
        for i in range(len(self)):
            if self.up[i] == full:
                return i
        return None

    def maximum(self) -> int | None:
        full = (1 << len(self)) - 1
        for i in range(len(self)):
            if self.down[i] == full:
                return i
        return None

    def subposet(self, keep: Iterable[int]) -> "Poset":
        keep = sorted(set(keep))
        pos = {old: new for new, old in enumerate(keep)}
        up = []
        for old in keep:
            mask = 0
            for other in keep:
                if self.up[old] >> other & 1:
                    mask |= 1 << pos[other]
            up.append(mask)
        return Poset([self.elements[i] for i in keep], up=up, check=False)

    def to_json(self) -> dict:
        def enc(x):
            return x.to_json() if hasattr(x, "to_json") else x
        return {"elements": [enc(e) for e in self.elements], "covers": [list(c) for c in self.covers]}

    def __repr__(self) -> str:
        return f"Poset({len(self)} elements)"


@dataclass(frozen=True, order=True)
class PairElement:
    """Disjoint pair (A, B) of subsets of [n], each stored as a sorted tuple."""

    A: tuple[int, ...]
    B: tuple[int, ...]

    @classmethod
    def from_masks(cls, a: int, b: int) -> "PairElement":
        return cls(elements_of(a), elements_of(b))

    @classmethod
    def of(cls, A: Iterable[int], B: Iterable[int]) -> "PairElement":
        return cls(tuple(sorted(A)), tuple(sorted(B)))

    @property
    def masks(self) -> tuple[int, int]:
        return mask_of(self.A), mask_of(self.B)

    def leq(self, other: "PairElement") -> bool:
        return set(self.A) <= set(other.A) and set(self.B) <= set(other.B)

    def swapped(self) -> "PairElement":
        return PairElement(self.B, self.A)

    def to_json(self) -> list[list[int]]:
        return [list(self.A), list(self.B)]

    def __str__(self) -> str:
        f = lambda t: "{" + ",".join(map(str, t)) + "}"
        return f"({f(self.A)},{f(self.B)})"


@dataclass(frozen=True)
class HomPosetElement:
    """Pair of non-empty disjoint vertex sets spanning a complete bipartite subgraph."""

    A: frozenset
    B: frozenset

    def sort_key(self):
        return (tuple(sorted(self.A)), tuple(sorted(self.B)))

    def to_json(self) -> list[list[int]]:
        return [sorted(self.A), sorted(self.B)]


def neighborhood_complex(graph: StableKneserGraph, max_simplices: int | None = None) -> SimplicialComplex:
    """Complex generated by the non-empty neighbourhoods N(v); ids are graph vertex indices."""
    facets = set()
    for i in range(graph.num_vertices):
        nb = graph.neighbourhood(i)
        if nb:
            facets.add(tuple(nb))
    maximal = [f for f in facets if not any(f != g and set(f) < set(g) for g in facets)]
    return SimplicialComplex(sorted(maximal), labels=graph.vertices, max_simplices=max_simplices)


def pair_poset_masks(n: int, k: int, s) -> list[tuple[int, int]]:
    """Mask pairs (a, b) of P(n,k,s) in lexicographic order of sorted-element encodings."""
    s = s if isinstance(s, StabilityVector) else StabilityVector(s)
    if len(s) != k:
        raise ParameterError(f"stability vector {s} has length {len(s)}, expected k={k}")
    if n < 1:
        return []
    stable = stable_masks(n, s.entries)
    full = (1 << n) - 1
    qualifies = [False] * (full + 1)
    for m in stable:
        # mark every superset of m
        rest = full & ~m
        sub = rest
        while True:
            qualifies[m | sub] = True
            if sub == 0:
                break
            sub = (sub - 1) & rest
    good = [m for m in range(full + 1) if qualifies[m]]
    pairs = [(a, b) for a in good for b in good if a & b == 0]
    pairs.sort(key=lambda ab: (elements_of(ab[0]), elements_of(ab[1])))
    return pairs


def build_pair_poset(n: int, k: int, s, max_elements: int | None = None) -> Poset:
    """P(n,k,s): disjoint pairs (A, B), each containing an s-stable k-set, ordered componentwise."""
    cap = DEFAULT_CAPS.max_elements if max_elements is None else max_elements
    pairs = pair_poset_masks(n, k, s)
    if len(pairs) > cap:
        raise ResourceError(f"pair poset has {len(pairs)} elements, cap is {cap}")
    return _mask_pair_poset(pairs)


def _componentwise_up(pairs: Sequence[tuple[int, int]], nbits: int) -> list[int]:
    """Up-sets for the order (a, b) <= (c, d) iff a <= c and b <= d as bit sets.

    For every bit v we keep the set of pairs whose first (second) component
    contains v; the up-set of (a, b) is the intersection over the bits of a and b.
    """
    everything = (1 << len(pairs)) - 1
    holds_a = [0] * nbits
    holds_b = [0] * nbits
    for j, (a, b) in enumerate(pairs):
        bit = 1 << j
        for v in range(nbits):
            if a >> v & 1:
                holds_a[v] |= bit
            elif b >> v & 1:
                holds_b[v] |= bit
    up = []
    for a, b in pairs:
        mask = everything
        for v in range(nbits):
            if a >> v & 1:
                mask &= holds_a[v]
            elif b >> v & 1:
                mask &= holds_b[v]
        up.append(mask)
    return up


def _mask_pair_poset(pairs: Sequence[tuple[int, int]]) -> Poset:
    nbits = max((max(a, b).bit_length() for a, b in pairs), default=0)
    elements = [PairElement.from_masks(a, b) for a, b in pairs]
    return Poset(elements, up=_componentwise_up(pairs, nbits), check=False)


def build_hom_poset(graph: StableKneserGraph, max_elements: int | None = None) -> Poset:
    """Hom_p(K2, G) on vertex indices, ordered componentwise."""
    cap = DEFAULT_CAPS.max_elements if max_elements is None else max_elements
    nv = graph.num_vertices
    nb = graph.neighbours
    found: list[tuple[int, int]] = []

    def grow(a_mask: int, common: int, start: int):
        # every non-empty subset of the common neighbourhood is a valid B
        sub = common
        while sub:
            found.append((a_mask, sub))
            if len(found) > cap:
                raise ResourceError(f"Hom poset exceeds {cap} elements")
            sub = (sub - 1) & common
        for v in range(start, nv):
            c2 = common & nb[v]
            if c2:
                grow(a_mask | 1 << v, c2, v + 1)

    for v in range(nv):
        if nb[v]:
            grow(1 << v, nb[v], v + 1)

    def idx(mask):
        return tuple(i for i in range(nv) if mask >> i & 1)

    found.sort(key=lambda ab: (idx(ab[0]), idx(ab[1])))
    elements = [HomPosetElement(frozenset(idx(a)), frozenset(idx(b))) for a, b in found]
    return Poset(elements, up=_componentwise_up(found, nv), check=False)


def iter_chains(p: Poset):
    """All non-empty chains, each as a tuple of element indices in increasing order."""
    m = len(p)
    # process in an order compatible with the partial order: by size of down-set
    stack = [((i,), p.strict_up(i)) for i in range(m)]
    while stack:
        chain, above = stack.pop()
        yield chain
        for j in set_bits(above):
            stack.append((chain + (j,), above & p.strict_up(j)))


def _chain_count_exceeds(p: Poset, cap: int) -> bool:
    # chains starting at i = 1 + chains starting strictly above i; a larger
    # down-set never lies below a smaller one, so this order is a linear extension
    order = sorted(range(len(p)), key=lambda i: -bin(p.down[i]).count("1"))
    from_here = [0] * len(p)
    total = 0
    for i in order:
        count = 1 + sum(from_here[j] for j in set_bits(p.strict_up(i)))
        from_here[i] = count
        total += count
        if total > cap:
            return True
    return False


def order_complex(p: Poset, max_simplices: int | None = None) -> SimplicialComplex:
    """Delta(P): simplices are the chains of ``p``; vertex ids are element indices."""
    cap = DEFAULT_CAPS.max_simplices if max_simplices is None else max_simplices
    if _chain_count_exceeds(p, cap):
        raise ResourceError(f"order complex exceeds {cap} simplices")
    chains = list(iter_chains(p))
    return SimplicialComplex(chains, labels=p.elements, closed=True, max_simplices=cap)
