"""Order-theoretic checks: poset maps, the pair-poset/Hom-poset comparison,
and the operator chain and suspension split used for vectors ending in 1.

Homotopy equivalences are checked through reduced integral homology, plus
cone witnesses (a minimum or maximum) for contractibility.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .complexes import (
    HomPosetElement,
    PairElement,
    Poset,
    build_hom_poset,
    build_pair_poset,
    neighborhood_complex,
    order_complex,
)
from .errors import ParameterError
from .homology import HomologyReport, reduced_homology
from .kneser_graph import build_graph
from .stable_sets import StabilityVector, elements_of, mask_of, stable_subsets_of, theorem_sum

__all__ = [
    "PosetMap",
    "OperatorReport",
    "OperatorChainReport",
    "verify_order_preserving",
    "lemma5_verify",
    "theorem7_base_case",
    "theorem7_operator_chain",
    "theorem7_all_levels",
    "suspension_check",
    "cone_check",
    "level_offsets",
]


@dataclass
class PosetMap:
    domain: Poset
    codomain: Poset
    mapping: Sequence[int | None]

    def __post_init__(self):
        if len(self.mapping) != len(self.domain) or any(m is None for m in self.mapping):
            raise ParameterError("poset map must be total on its domain")
        if any(not 0 <= m < len(self.codomain) for m in self.mapping):
            raise ParameterError("poset map sends an element outside the codomain")

    def __call__(self, i: int) -> int:
        return self.mapping[i]


def verify_order_preserving(m: PosetMap) -> bool:
    """x <= y implies m(x) <= m(y)."""
    dom, cod = m.domain, m.codomain
    for i in range(len(dom)):
        up = dom.up[i]
        j = 0
        while up:
            if up & 1 and not cod.leq(m.mapping[i], m.mapping[j]):
                return False
            up >>= 1
            j += 1
    return True


def cone_check(p: Poset) -> bool:
    """True iff ``p`` has a minimum or a maximum (so its order complex is a cone)."""
    return p.minimum() is not None or p.maximum() is not None


def _homology(p: Poset) -> HomologyReport:
    return reduced_homology(order_complex(p))


def _as_vector(s) -> StabilityVector:
    return s if isinstance(s, StabilityVector) else StabilityVector(s)


# -- Hom-poset versus pair-poset ------------------------------------------------

def lemma5_verify(n: int, k: int, s, max_elements: int | None = None) -> dict:
    """Compare Hom_p(K2, G) with P(n,k,s) through the union / stable-subsets maps.

    Checks that both maps are well defined and order preserving, that
    ``Id <= psi o phi`` on the Hom-poset and ``phi o psi <= Id`` on the pair
    poset pointwise, and that N(G), Delta(Hom_p) and Delta(P) have equal
    reduced homology.
    """
    s = _as_vector(s)
    g = build_graph(n, k, s)
    hom = build_hom_poset(g, max_elements)
    pp = build_pair_poset(n, k, s, max_elements)
    vmask = [v.mask for v in g.vertices]
    vindex = {m: i for i, m in enumerate(vmask)}
    failures: list[str] = []

    phi_map: list[int | None] = []
    for h in hom.elements:
        a = b = 0
        for v in h.A:
            a |= vmask[v]
        for v in h.B:
            b |= vmask[v]
        target = PairElement.from_masks(a, b)
        idx = pp.index.get(target)
        if idx is None:
            failures.append(f"phi{h.to_json()} = {target} not in P")
        phi_map.append(idx)

    psi_map: list[int | None] = []
    hom_index = hom.index
    for e in pp.elements:
        a, b = e.masks
        sa = frozenset(vindex[m] for m in stable_subsets_of(a, n, s))
        sb = frozenset(vindex[m] for m in stable_subsets_of(b, n, s))
        target = HomPosetElement(sa, sb)
        idx = hom_index.get(target)
        if idx is None:
            failures.append(f"psi{e} not in Hom_p")
        psi_map.append(idx)

    well_defined = not failures
    phi_ok = psi_ok = id_le_psiphi = phipsi_le_id = False
    if well_defined:
        phi = PosetMap(hom, pp, phi_map)
        psi = PosetMap(pp, hom, psi_map)
        phi_ok = verify_order_preserving(phi)
        psi_ok = verify_order_preserving(psi)
        id_le_psiphi = all(hom.leq(i, psi_map[phi_map[i]]) for i in range(len(hom)))
        phipsi_le_id = all(pp.leq(phi_map[psi_map[i]], i) for i in range(len(pp)))

    h_n = reduced_homology(neighborhood_complex(g))
    h_hom = _homology(hom)
    h_p = _homology(pp)
    homology_equal = h_n.signature() == h_hom.signature() == h_p.signature()
    empty_iff = (len(neighborhood_complex(g)) == 0) == (len(pp) == 0)
    ok = well_defined and phi_ok and psi_ok and id_le_psiphi and phipsi_le_id and homology_equal and empty_iff
    return {
        "check": "lemma5",
        "params": {"n": n, "k": k, "s": s.to_json()},
        "hom_poset_size": len(hom),
        "pair_poset_size": len(pp),
        "well_defined": well_defined,
        "phi_order_preserving": phi_ok,
        "psi_order_preserving": psi_ok,
        "id_le_psi_phi": id_le_psiphi,
        "phi_psi_le_id": phipsi_le_id,
        "empty_iff": empty_iff,
        "homology": {
            "neighborhood_complex": h_n.to_json(),
            "hom_complex": h_hom.to_json(),
            "pair_poset": h_p.to_json(),
        },
        "homology_equal": homology_equal,
        "failures": failures[:20],
        "ok": ok,
    }


# -- base case ----------------------------------------------------------------

def _require_last_one(s: StabilityVector):
    if not s.theorem_regime or s[-1] != 1 or s.k < 2:
        raise ParameterError(f"need k >= 2, s_i >= 2 for i < k and s_k = 1; got {s}")


def theorem7_base_case(k: int, s, max_elements: int | None = None) -> dict:
    """Base case n = s_1 + ... + s_{k-1} + 2: P splits into two cones around (V,U) and (U,V)."""
    s = _as_vector(s)
    if s.k != k:
        raise ParameterError(f"stability vector {s} has length {s.k}, expected k={k}")
    _require_last_one(s)
    n = theorem_sum(s) + 2
    partial = [0]
    for x in s.entries[:-1]:
        partial.append(partial[-1] + x)
    U = mask_of(1 + t for t in partial)
    V = mask_of(2 + t for t in partial)
    p = build_pair_poset(n, k, s, max_elements)
    masks = [e.masks for e in p.elements]
    in_p1 = [V & a == V and U & b == U for a, b in masks]
    in_p2 = [U & a == U and V & b == V for a, b in masks]
    disjoint = not any(x and y for x, y in zip(in_p1, in_p2))
    covering = all(x or y for x, y in zip(in_p1, in_p2))
    p1 = p.subposet(i for i, x in enumerate(in_p1) if x)
    p2 = p.subposet(i for i, x in enumerate(in_p2) if x)
    min1 = p1.minimum()
    min2 = p2.minimum()
    vu = PairElement.from_masks(V, U)
    uv = PairElement.from_masks(U, V)
    min_ok = (min1 is not None and p1.elements[min1] == vu
              and min2 is not None and p2.elements[min2] == uv)
    incomparable = all(
        not p.leq(i, j) and not p.leq(j, i)
        for i, x in enumerate(in_p1) if x
        for j, y in enumerate(in_p2) if y
    )
    h = _homology(p)
    ok = disjoint and covering and min_ok and incomparable and h.sphere_dim == 0
    return {
        "check": "theorem7_base_case",
        "params": {"n": n, "k": k, "s": s.to_json()},
        "U": list(elements_of(U)),
        "V": list(elements_of(V)),
        "sizes": [len(p1), len(p2)],
        "disjoint_union": disjoint and covering,
        "minima_ok": min_ok,
        "components_incomparable": incomparable,
        "homology": h.to_json(),
        "ok": ok,
    }


# -- operator chain -----------------------------------------------------------

def level_offsets(n: int, s: StabilityVector) -> list[int]:
    """Offsets t_0 = 0, t_i = s_{k-1} + ... + s_{k-i} for i < k, and t_k = n.

    The last offset would need a non-existent s_0; it is taken large enough
    that the level-k windows cover all of [n].
    """
    k = s.k
    t = [0]
    for i in range(1, k):
        t.append(t[-1] + s[k - i - 1])
    t.append(n)
    return t


def _interval(lo: int, hi: int, n: int) -> int:
    lo = max(lo, 1)
    hi = min(hi, n)
    if lo > hi:
        return 0
    return ((1 << (hi - lo + 1)) - 1) << (lo - 1)


def _level_predicate(n: int, t: list[int], i: int) -> Callable[[int, int], bool]:
    """Membership of (A, B) in P^(i), given that it already lies in P_1."""
    if i == 0:
        return lambda a, b: True
    a_win = _interval(n - t[i] + 1, n, n)
    b_win = _interval(n - t[i], n, n)
    a_req = mask_of(n - t[j] for j in range(i))
    b_req = mask_of(n - t[j] - 1 for j in range(i))
    return lambda a, b: (a & a_win) == a_req and (b & b_win) == b_req


@dataclass
class OperatorReport:
    name: str
    expected_direction: str
    well_defined: bool
    order_preserving: bool
    direction: str
    image: Poset | None
    image_matches_predicate: bool
    homology_preserved: bool | None = None
    failures: list[str] = field(default_factory=list)
    image_homology: HomologyReport | None = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return (self.well_defined and self.order_preserving and self.direction == self.expected_direction
                and self.image_matches_predicate and self.homology_preserved is not False)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "direction": self.direction,
            "expected_direction": self.expected_direction,
            "well_defined": self.well_defined,
            "order_preserving": self.order_preserving,
            "image_size": None if self.image is None else len(self.image),
            "image_matches_predicate": self.image_matches_predicate,
            "homology_preserved": self.homology_preserved,
            "ok": self.ok,
            "failures": self.failures[:10],
        }


def _run_operator(name: str, domain: Poset, func: Callable[[int, int], tuple[int, int]],
                  expected: str, image_pred: Callable[[int, int], bool], homology: bool,
                  domain_h: HomologyReport | None = None) -> OperatorReport:
    masks = [e.masks for e in domain.elements]
    mapping: list[int | None] = []
    failures = []
    for e, (a, b) in zip(domain.elements, masks):
        img = PairElement.from_masks(*func(a, b))
        idx = domain.index.get(img)
        if idx is None:
            failures.append(f"{name}{e} = {img} leaves the domain")
        mapping.append(idx)
    if failures:
        return OperatorReport(name, expected, False, False, "neither", None, False, None, failures)
    m = PosetMap(domain, domain, mapping)
    preserving = verify_order_preserving(m)
    inc = all(domain.leq(i, mapping[i]) for i in range(len(domain)))
    dec = all(domain.leq(mapping[i], i) for i in range(len(domain)))
    direction = "increasing" if inc and not dec else "decreasing" if dec and not inc else (
        "identity" if inc and dec else "neither")
    if direction == "identity":
        # the identity is both; report it in the expected sense
        direction = expected
    image_idx = sorted(set(mapping))
    predicted = [i for i, (a, b) in enumerate(masks) if image_pred(a, b)]
    image = domain.subposet(image_idx)
    matches = image_idx == predicted
    if not matches:
        extra = set(image_idx) ^ set(predicted)
        failures.extend(f"Img({name}) differs at {domain.elements[i]}" for i in sorted(extra)[:10])
    preserved = image_h = None
    if homology:
        image_h = _homology(image)
        preserved = (domain_h or _homology(domain)).signature() == image_h.signature()
    return OperatorReport(name, expected, True, preserving, direction, image, matches, preserved, failures, image_h)


@dataclass
class OperatorChainReport:
    params: dict
    i: int
    operators: list[OperatorReport]
    image_equals_next_level: bool
    level_sizes: list[int]
    final_minimum: list | None
    final_minimum_expected: list
    final_is_cone: bool
    p1_homology: HomologyReport
    notes: list[str] = field(default_factory=list)

    @property
    def p1_homology_trivial(self) -> bool:
        return self.p1_homology.is_acyclic

    @property
    def ok(self) -> bool:
        return (all(op.ok for op in self.operators) and self.image_equals_next_level
                and self.final_minimum == self.final_minimum_expected and self.final_is_cone
                and self.p1_homology_trivial)

    def __iter__(self):
        return iter(self.operators)

    def to_json(self) -> dict:
        return {
            "check": "theorem7_operator_chain",
            "params": self.params,
            "i": self.i,
            "operators": [op.to_json() for op in self.operators],
            "image_equals_next_level": self.image_equals_next_level,
            "level_sizes": self.level_sizes,
            "final_minimum": self.final_minimum,
            "final_minimum_expected": self.final_minimum_expected,
            "final_is_cone": self.final_is_cone,
            "p1_homology_trivial": self.p1_homology_trivial,
            "notes": self.notes,
            "ok": self.ok,
        }


def _check_inductive_params(n: int, k: int, s: StabilityVector):
    if s.k != k:
        raise ParameterError(f"stability vector {s} has length {s.k}, expected k={k}")
    _require_last_one(s)
    if n <= theorem_sum(s) + 2:
        raise ParameterError(f"need n > s_1 + ... + s_(k-1) + 2 = {theorem_sum(s) + 2}, got n={n}")


def theorem7_operator_chain(n: int, k: int, s, i: int, max_elements: int | None = None,
                            homology: bool = True, _pair_poset: Poset | None = None,
                            _known: dict | None = None) -> OperatorChainReport:
    """Verify the four operators taking the level-i subposet of P_1 to level i+1."""
    s = _as_vector(s)
    _check_inductive_params(n, k, s)
    if not 0 <= i < k:
        raise ParameterError(f"level i must satisfy 0 <= i < k, got {i}")
    p = _pair_poset if _pair_poset is not None else build_pair_poset(n, k, s, max_elements)
    top = 1 << (n - 1)
    p1 = p.subposet(j for j, e in enumerate(p.elements) if not e.masks[1] & top)
    t = level_offsets(n, s)
    levels = []
    for lvl in range(k + 1):
        pred = _level_predicate(n, t, lvl)
        levels.append(p1.subposet(j for j, e in enumerate(p1.elements) if pred(*e.masks)))

    lo, hi = t[i], t[i + 1]
    x = n - lo                      # joins A
    y = n - lo - 1                  # joins B
    a_cut = _interval(n - hi + 1, n - lo - 1, n)
    b_cut = _interval(n - hi, n - lo - 2, n)
    a_window = _interval(n - hi + 1, n - lo, n)
    xbit, ybit = 1 << (x - 1), 1 << (y - 1)

    ops = []
    dom = levels[i]
    # homology already computed by an earlier level of the same poset
    known = _known if _known is not None else {}
    p1_h = known.get("p1") or _homology(p1)
    dom_h = p1_h if i == 0 else known.get(i)
    steps = [
        ("phi1", "increasing", lambda a, b: (a | xbit, b), lambda a, b: bool(a & xbit)),
        ("phi2", "decreasing", lambda a, b: (a & ~a_cut, b), lambda a, b: a & a_window == xbit),
        ("phi3", "increasing", lambda a, b: (a, b | ybit), lambda a, b: bool(b & ybit)),
        ("phi4", "decreasing", lambda a, b: (a, b & ~b_cut), lambda a, b: True),
    ]
    for name, expected, func, pred in steps:
        rep = _run_operator(name, dom, func, expected, pred, homology, dom_h)
        ops.append(rep)
        if rep.image is None:
            break
        dom, dom_h = rep.image, rep.image_homology
    image_next = ops[-1].image is not None and set(ops[-1].image.elements) == set(levels[i + 1].elements)
    known["p1"] = p1_h
    if image_next and ops[-1].image_homology is not None:
        known[i + 1] = ops[-1].image_homology
    # phi4's predicate is checked through the level-(i+1) comparison
    if ops[-1].name == "phi4":
        ops[-1].image_matches_predicate = image_next

    final = levels[k]
    mn = final.minimum()
    expected_min = PairElement.from_masks(mask_of(n - t[j] for j in range(k)),
                                          mask_of(n - t[j] - 1 for j in range(k)))
    notes = [
        "level-k windows extend over all of [n] (no s_0 exists)",
        "the well-definedness remark naming psi_1 is read as referring to phi4",
    ]
    return OperatorChainReport(
        params={"n": n, "k": k, "s": s.to_json()},
        i=i,
        operators=ops,
        image_equals_next_level=image_next,
        level_sizes=[len(lv) for lv in levels],
        final_minimum=None if mn is None else final.elements[mn].to_json(),
        final_minimum_expected=expected_min.to_json(),
        final_is_cone=cone_check(final),
        p1_homology=p1_h,
        notes=notes,
    )


def theorem7_all_levels(n: int, k: int, s, max_elements: int | None = None, homology: bool = True) -> dict:
    """Operator chains for every level 0 <= i < k, sharing one pair poset."""
    s = _as_vector(s)
    _check_inductive_params(n, k, s)
    p = build_pair_poset(n, k, s, max_elements)
    known: dict = {}
    reports = [theorem7_operator_chain(n, k, s, i, homology=homology, _pair_poset=p, _known=known)
               for i in range(k)]
    return {
        "check": "theorem7_all_levels",
        "params": {"n": n, "k": k, "s": s.to_json()},
        "levels": [r.to_json() for r in reports],
        "ok": all(r.ok for r in reports),
    }


# -- suspension split ---------------------------------------------------------

def suspension_check(n: int, k: int, s, max_elements: int | None = None) -> dict:
    """Delta(P) = Delta(P_1) u Delta(P_2) with intersection Delta(P(n-1,k,s)), both parts acyclic."""
    s = _as_vector(s)
    _check_inductive_params(n, k, s)
    p = build_pair_poset(n, k, s, max_elements)
    smaller = build_pair_poset(n - 1, k, s, max_elements)
    top = 1 << (n - 1)
    p1 = p.subposet(j for j, e in enumerate(p.elements) if not e.masks[1] & top)
    p2 = p.subposet(j for j, e in enumerate(p.elements) if not e.masks[0] & top)
    whole, c1, c2, inter = (order_complex(q) for q in (p, p1, p2, smaller))
    s_whole, s1, s2, s_inter = (c.label_set() for c in (whole, c1, c2, inter))
    union_ok = s_whole == s1 | s2
    inter_ok = s1 & s2 == s_inter
    h_whole, h1, h2, h_inter = (reduced_homology(c) for c in (whole, c1, c2, inter))
    shift_ok = (
        {d + 1: b for d, b in h_inter.reduced_betti.items() if b}
        == {d: b for d, b in h_whole.reduced_betti.items() if b}
        and {d + 1: t for d, t in h_inter.torsion.items() if t}
        == {d: t for d, t in h_whole.torsion.items() if t}
    )
    ok = union_ok and inter_ok and h1.is_acyclic and h2.is_acyclic and shift_ok
    return {
        "check": "suspension",
        "params": {"n": n, "k": k, "s": s.to_json()},
        "union_identity": union_ok,
        "intersection_identity": inter_ok,
        "p1_acyclic": h1.is_acyclic,
        "p2_acyclic": h2.is_acyclic,
        "betti_shift": shift_ok,
        "homology_whole": h_whole.to_json(),
        "homology_intersection": h_inter.to_json(),
        "ok": ok,
    }
