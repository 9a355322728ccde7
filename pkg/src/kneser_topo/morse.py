"""Discrete Morse matchings on face posets, and the staged collapse of
Delta(P(n,k,s)) onto Delta(P(n,k,s*)) for s = (s_1,...,s_{k-1},1), s* = (s_1,...,s_{k-1},2).

Generic part: partial matchings on any family of simplices (tuples of
vertices), validity and acyclicity checks, and extraction of the critical
complex.

Pipeline part: simplices of an order complex are chains
``((A_1,B_1) < ... < (A_l,B_l))`` of pair elements, held as tuples of
``(a_mask, b_mask)`` in increasing order.  Six matchings are applied in turn,
each on the residual complex left by the previous one:

======  ===========================================================
mu1     chains whose top A-complement holds no s*-stable set, except
        those with constant B equal to C(sigma)
mu2     the remaining chains of that family (constant B)
mu3/4   the same two stages with the roles of A and B swapped
mu5     remaining chains whose bottom B holds no s*-stable set
mu6     mu5 with A and B swapped
======  ===========================================================

A stage that cannot be built as described produces failure records naming
the offending chain instead of raising.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .complexes import PairElement, SimplicialComplex, _chain_count_exceeds, build_pair_poset, iter_chains
from .errors import DEFAULT_CAPS, ParameterError, ResourceError
from .homology import reduced_homology
from .stable_sets import StabilityVector, elements_of, mask_of, smallest_stable_subset

__all__ = [
    "PartialMatching",
    "MatchingCheck",
    "NotASubcomplex",
    "check_matching",
    "check_acyclic",
    "critical_subcomplex",
    "classify_chain",
    "StageResult",
    "build_mu1",
    "build_mu2",
    "build_mu3",
    "build_mu4",
    "build_mu5",
    "build_mu6",
    "pair_chains",
    "chains_to_complex",
    "theorem8_verify",
]


# -- generic matchings ---------------------------------------------------------

@dataclass
class PartialMatching:
    """A partial matching ``mu: Sigma -> cells`` on the face poset of ``cells``.

    Simplices are tuples; a cover is a tuple with exactly one extra entry.
    """

    cells: frozenset
    mu: dict

    @classmethod
    def on(cls, complex_: SimplicialComplex, pairs: Iterable[tuple[tuple, tuple]] = ()) -> "PartialMatching":
        return cls(complex_.simplices, {tuple(sorted(a)): tuple(sorted(b)) for a, b in pairs})

    @property
    def domain(self) -> set:
        return set(self.mu)

    @property
    def image(self) -> set:
        return set(self.mu.values())

    def critical(self) -> set:
        return set(self.cells) - self.domain - self.image

    def __len__(self) -> int:
        return len(self.mu)


@dataclass
class MatchingCheck:
    valid: bool
    failures: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid


def _is_cover(lower: tuple, upper: tuple) -> bool:
    return len(upper) == len(lower) + 1 and set(lower) < set(upper)


def check_matching(m: PartialMatching) -> MatchingCheck:
    """Injectivity, Sigma disjoint from mu(Sigma), and mu(sigma) covering sigma."""
    failures = []
    seen: dict = {}
    for s, t in m.mu.items():
        if s not in m.cells:
            failures.append(f"{s} is not a cell")
        if t not in m.cells:
            failures.append(f"mu({s}) = {t} is not a cell")
        if not _is_cover(s, t):
            failures.append(f"mu({s}) = {t} does not cover it")
        if t in seen:
            failures.append(f"mu not injective: {seen[t]} and {s} both map to {t}")
        seen[t] = s
        if t in m.mu:
            failures.append(f"{t} is both matched from and to")
    return MatchingCheck(not failures, failures)


def _facets_of(t: tuple):
    for i in range(len(t)):
        yield t[:i] + t[i + 1:]


def check_acyclic(m: PartialMatching) -> bool:
    """No cycle sigma_1 -> mu(sigma_1) > sigma_2 -> ... -> sigma_1 with t >= 2.

    Kahn's algorithm on the graph whose nodes are Sigma and whose arcs run from
    sigma to every other sigma' in Sigma that is a facet of mu(sigma).
    """
    nodes = list(m.mu)
    succ: dict = {s: [] for s in nodes}
    indeg: dict = {s: 0 for s in nodes}
    for s in nodes:
        for f in _facets_of(m.mu[s]):
            if f != s and f in indeg:
                succ[s].append(f)
                indeg[f] += 1
    queue = deque(s for s in nodes if indeg[s] == 0)
    done = 0
    while queue:
        s = queue.popleft()
        done += 1
        for f in succ[s]:
            indeg[f] -= 1
            if indeg[f] == 0:
                queue.append(f)
    return done == len(nodes)


@dataclass
class NotASubcomplex:
    """Critical cells fail to be closed: ``cell`` is critical but ``face`` is not."""

    cell: tuple
    face: tuple

    def __bool__(self) -> bool:
        return False


def critical_subcomplex(m: PartialMatching, labels: Sequence[Hashable] | None = None):
    """The critical cells as a complex, or :class:`NotASubcomplex` naming a missing face."""
    crit = m.critical()
    for c in sorted(crit, key=lambda x: (len(x), x)):
        if len(c) > 1:
            for f in _facets_of(c):
                if f not in crit:
                    return NotASubcomplex(c, f)
    return SimplicialComplex(crit, labels=labels, closed=True)


# -- chains of pair elements ------------------------------------------------------

Pair = tuple  # (a_mask, b_mask)
Chain = tuple  # tuple of Pair, increasing


def _size(p: Pair) -> int:
    return bin(p[0]).count("1") + bin(p[1]).count("1")


def as_chain(chain) -> Chain:
    """Normalise a chain given as PairElements or (A, B) pairs of sets/masks."""
    out = []
    for x in chain:
        if isinstance(x, PairElement):
            out.append(x.masks)
        else:
            a, b = x
            a = a if isinstance(a, int) else mask_of(a)
            b = b if isinstance(b, int) else mask_of(b)
            out.append((a, b))
    out.sort(key=_size)
    for (a, b), (c, d) in zip(out, out[1:]):
        if a & c != a or b & d != b or (a, b) == (c, d):
            raise ParameterError("elements do not form a strictly increasing chain")
    return tuple(out)


def _swap(chain: Chain) -> Chain:
    return tuple((b, a) for a, b in chain)


def pair_chains(n: int, k: int, s, max_elements: int | None = None, max_simplices: int | None = None) -> set:
    """All chains of P(n,k,s) as tuples of mask pairs."""
    cap = DEFAULT_CAPS.max_simplices if max_simplices is None else max_simplices
    p = build_pair_poset(n, k, s, max_elements)
    if _chain_count_exceeds(p, cap):
        raise ResourceError(f"order complex exceeds {cap} simplices")
    masks = [e.masks for e in p.elements]
    return {tuple(masks[i] for i in c) for c in iter_chains(p)}


def chains_to_complex(chains: Iterable[Chain]) -> SimplicialComplex:
    """Simplicial complex whose vertex labels are PairElements."""
    chains = list(chains)
    verts = sorted({p for c in chains for p in c}, key=lambda p: (elements_of(p[0]), elements_of(p[1])))
    idx = {p: i for i, p in enumerate(verts)}
    labels = [PairElement.from_masks(*p) for p in verts]
    return SimplicialComplex([tuple(idx[p] for p in c) for c in chains], labels=labels, closed=True)


def chain_to_json(chain: Chain) -> list:
    return [PairElement.from_masks(a, b).to_json() for a, b in chain]


class _Ctx:
    """Parameters plus cached set lookups shared by all stages."""

    def __init__(self, n: int, k: int, s: StabilityVector, s_star: StabilityVector):
        self.n, self.k = n, k
        self.s, self.s_star = s, s_star
        self.full = (1 << n) - 1
        self._cache: dict = {}

    def smallest(self, mask: int, star: bool) -> int | None:
        key = (mask, star)
        if key not in self._cache:
            self._cache[key] = smallest_stable_subset(mask, self.n, self.s_star if star else self.s)
        return self._cache[key]

    def has_star(self, mask: int) -> bool:
        return self.smallest(mask, True) is not None

    def in_pair_poset(self, p: Pair) -> bool:
        a, b = p
        return (a & b == 0 and a & ~self.full == 0 and b & ~self.full == 0
                and self.smallest(a, False) is not None and self.smallest(b, False) is not None)

    # A-side features; the B-side versions are obtained by swapping the chain

    def in_h1(self, c: Chain) -> bool:
        return not self.has_star(self.full & ~c[-1][0])

    def C(self, c: Chain) -> int | None:
        return self.smallest(self.full & ~c[-1][0], False)

    def r_q(self, c: Chain, C: int) -> tuple[int, int]:
        r = q = 0
        for j, (_, b) in enumerate(c, start=1):
            if C & b != C:
                r = j
            if b == C:
                q = j
        return r, q

    def in_h2(self, c: Chain) -> bool:
        if not self.in_h1(c):
            return False
        C = self.C(c)
        return C is not None and self.r_q(c, C)[1] == len(c)

    def D(self, c: Chain) -> int | None:
        return self.smallest(c[0][0], True)

    @staticmethod
    def E(D: int) -> int | None:
        # shift every element down by one; undefined if D contains 1
        return None if D & 1 else D >> 1

    @staticmethod
    def e(c: Chain, E: int) -> int:
        e = 0
        for j, (a, _) in enumerate(c, start=1):
            if a & E == 0:
                e = j
        return e

    def is_star_stable_kset(self, mask: int) -> bool:
        return bin(mask).count("1") == self.k and self.smallest(mask, True) == mask

    def F(self, c: Chain) -> int | None:
        return self.smallest(self.full & ~c[-1][0], True)

    @staticmethod
    def f(c: Chain, F: int) -> int:
        f = 0
        for j, (_, b) in enumerate(c, start=1):
            if F & b != F:
                f = j
        return f


def _insert(c: Chain, pos: int, p: Pair) -> Chain:
    """Insert ``p`` so that it ends up at 0-based position ``pos``."""
    return c[:pos] + (p,) + c[pos:]


def _valid_chain(ctx: _Ctx, c: Chain) -> bool:
    for (a, b), (x, y) in zip(c, c[1:]):
        if a & x != a or b & y != b or (a, b) == (x, y):
            return False
    return all(ctx.in_pair_poset(p) for p in c)


# -- stage constructions -------------------------------------------------------------
# Each builder returns (mu, failures) for the A-side; mirrored stages wrap them.

def _mu1(ctx: _Ctx, cells: set) -> tuple[dict, list]:
    mu: dict = {}
    failures: list = []
    for c in cells:
        if not ctx.in_h1(c):
            continue
        C = ctx.C(c)
        if C is None:
            failures.append({"chain": c, "reason": "C(sigma) undefined"})
            continue
        r, q = ctx.r_q(c, C)
        l = len(c)
        img = None
        if r == l:                                    # Sigma_{1,1}
            a, b = c[-1]
            img = c + ((a, b | C),)
        elif 0 < r < l:                               # Sigma_{1,2}
            a, b = c[r - 1]
            star = (a, b | C)
            if c[r] != star:
                img = _insert(c, r, star)
        elif r == 0 and q == 0:                       # Sigma_{1,3}
            img = ((c[0][0], C),) + c
        elif r == 0 and 0 < q < l:                    # Sigma_{1,4}
            if c[q][0] != c[q - 1][0]:
                img = _insert(c, q, (c[q][0], C))
        if img is not None:
            if not _valid_chain(ctx, img):
                failures.append({"chain": c, "reason": "mu1 image is not a chain of P"})
                continue
            mu[c] = img
    return mu, failures


def _mu2(ctx: _Ctx, cells: set, literal: bool) -> tuple[dict, list]:
    mu: dict = {}
    failures: list = []
    for c in cells:
        if not ctx.in_h2(c):
            continue
        D = ctx.D(c)
        if D is None:
            failures.append({"chain": c, "reason": "D(sigma) undefined: A_1 holds no s*-stable k-set"})
            continue
        E = ctx.E(D)
        if E is None or not ctx.is_star_stable_kset(E):
            failures.append({"chain": c, "reason": "E(sigma) is not an s*-stable k-set"})
            continue
        e = ctx.e(c, E)
        l = len(c)
        if e == l:
            failures.append({"chain": c, "reason": "e(sigma) = l(sigma)"})
            continue
        a_next, b_next = c[e]
        if e > 0:
            a_prev = c[e - 1][0]
            in_sigma = (a_next != a_prev | E) if literal else (a_next & ~E != a_prev)
            if not in_sigma:
                continue
        new = (a_next & ~E, b_next)
        img = _insert(c, e, new)
        if not _valid_chain(ctx, img):
            failures.append({"chain": c, "reason": "mu2 image is not a chain of P"})
            continue
        mu[c] = img
    return mu, failures


def _in_h5(ctx: _Ctx, c: Chain) -> bool:
    return not ctx.has_star(c[0][1])


def _mu5(ctx: _Ctx, cells: set, literal: bool) -> tuple[dict, list]:
    mu: dict = {}
    failures: list = []
    for c in cells:
        if not _in_h5(ctx, c):
            continue
        F = ctx.F(c)
        if F is None:
            failures.append({"chain": c, "reason": "F(sigma) undefined"})
            continue
        f = ctx.f(c, F)
        l = len(c)
        if f == 0:
            failures.append({"chain": c, "reason": "f(sigma) = 0"})
            continue
        a, b = c[f - 1]
        if f < l:
            extra = F
            if literal:
                extra = ctx.D(c)
                if extra is None:
                    failures.append({"chain": c, "reason": "D(sigma) undefined in the mu5 condition"})
                    continue
            if c[f] == (a, b | extra):
                continue
        img = _insert(c, f, (a, b | F))
        if not _valid_chain(ctx, img):
            failures.append({"chain": c, "reason": "mu5 image is not a chain of P"})
            continue
        mu[c] = img
    return mu, failures


def _mirror(builder, ctx, cells, *args):
    mu, failures = builder(ctx, {_swap(c) for c in cells}, *args)
    mu = {_swap(a): _swap(b) for a, b in mu.items()}
    for rec in failures:
        rec["chain"] = _swap(rec["chain"])
    return mu, failures


def _setup(n, k, s, s_star):
    s = s if isinstance(s, StabilityVector) else StabilityVector(s)
    if s_star is None:
        s_star = s.with_last(2)
    s_star = s_star if isinstance(s_star, StabilityVector) else StabilityVector(s_star)
    if s.k != k or s_star.k != k:
        raise ParameterError("stability vectors must have length k")
    return _Ctx(n, k, s, s_star)


def build_mu1(n, k, s, cells, s_star=None):
    """mu1 on the chains ``cells``: returns (PartialMatching, failures)."""
    ctx = _setup(n, k, s, s_star)
    mu, fails = _mu1(ctx, cells)
    return PartialMatching(frozenset(cells), mu), fails


def build_mu2(n, k, s, cells, s_star=None, literal=False):
    ctx = _setup(n, k, s, s_star)
    mu, fails = _mu2(ctx, cells, literal)
    return PartialMatching(frozenset(cells), mu), fails


def build_mu3(n, k, s, cells, s_star=None):
    """mu1 with A and B swapped."""
    ctx = _setup(n, k, s, s_star)
    mu, fails = _mirror(_mu1, ctx, cells)
    return PartialMatching(frozenset(cells), mu), fails


def build_mu4(n, k, s, cells, s_star=None, literal=False):
    """mu2 with A and B swapped."""
    ctx = _setup(n, k, s, s_star)
    mu, fails = _mirror(_mu2, ctx, cells, literal)
    return PartialMatching(frozenset(cells), mu), fails


def build_mu5(n, k, s, cells, s_star=None, literal=False):
    ctx = _setup(n, k, s, s_star)
    mu, fails = _mu5(ctx, cells, literal)
    return PartialMatching(frozenset(cells), mu), fails


def build_mu6(n, k, s, cells, s_star=None, literal=False):
    """mu5 with A and B swapped."""
    ctx = _setup(n, k, s, s_star)
    mu, fails = _mirror(_mu5, ctx, cells, literal)
    return PartialMatching(frozenset(cells), mu), fails


# -- chain classification ------------------------------------------------------------

def classify_chain(chain, n: int, k: int, s, s_star=None) -> dict:
    """Features of a chain of P(n,k,s): set memberships and the auxiliary sets and indices.

    Features that do not apply to the chain are ``None``.  Memberships of the
    bottom-side families are relative to the complex with the top-side
    families removed (``in_H5``/``in_H6`` imply neither ``in_H1`` nor ``in_H3``).
    """
    ctx = _setup(n, k, s, s_star)
    c = as_chain(chain)
    sw = _swap(c)
    enc = lambda m: None if m is None else list(elements_of(m))
    out: dict = {"l": len(c)}

    def top_side(ch, prefix):
        h1 = ctx.in_h1(ch)
        out[f"in_{prefix[0]}"] = h1
        C = ctx.C(ch) if h1 else None
        r = q = None
        if C is not None:
            r, q = ctx.r_q(ch, C)
        out[f"C{prefix[1]}"], out[f"r{prefix[1]}"], out[f"q{prefix[1]}"] = enc(C), r, q
        h2 = h1 and q == len(ch)
        out[f"in_{prefix[2]}"] = h2
        D = E = e = None
        e_ok = None
        if h2:
            D = ctx.D(ch)
            if D is not None:
                E = ctx.E(D)
                e_ok = E is not None and ctx.is_star_stable_kset(E)
                if E is not None:
                    e = ctx.e(ch, E)
        out[f"D{prefix[1]}"], out[f"E{prefix[1]}"], out[f"e{prefix[1]}"] = enc(D), enc(E), e
        out[f"E{prefix[1]}_star_stable"] = e_ok
        return h1

    h1 = top_side(c, ("H1", "", "H2"))
    h3 = top_side(sw, ("H3", "_B", "H3_const"))

    def bottom_side(ch, name, suffix):
        member = not h1 and not h3 and not ctx.has_star(ch[0][1])
        out[f"in_{name}"] = member
        F = ctx.F(ch) if member else None
        out[f"F{suffix}"] = enc(F)
        out[f"f{suffix}"] = ctx.f(ch, F) if F is not None else None

    bottom_side(c, "H5", "")
    bottom_side(sw, "H6", "_A")
    return out


# -- the staged pipeline -------------------------------------------------------------

@dataclass
class StageResult:
    stage: str
    domain_size: int
    valid: bool
    acyclic: bool
    critical_is_subcomplex: bool
    residual_matches_claim: bool
    residual_homology: dict | None
    homology_preserved: bool | None
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.valid and self.acyclic and self.critical_is_subcomplex
                and self.residual_matches_claim and self.homology_preserved is not False
                and not self.failures)

    def to_json(self) -> dict:
        return {
            "stage": self.stage,
            "domain_size": self.domain_size,
            "valid": self.valid,
            "acyclic": self.acyclic,
            "critical_is_subcomplex": self.critical_is_subcomplex,
            "residual_matches_claim": self.residual_matches_claim,
            "residual_homology": self.residual_homology,
            "homology_preserved": self.homology_preserved,
            "failures": self.failures[:10],
            "ok": self.ok,
        }


def _fmt_failures(fails: list, limit: int = 25) -> list:
    return [{"chain": chain_to_json(r["chain"]), "reason": r["reason"]} for r in fails[:limit]]


def theorem8_verify(n: int, k: int, s, max_elements: int | None = None, max_simplices: int | None = None,
                    literal: bool = False, homology: bool = True) -> dict:
    """Run the six matchings on Delta(P(n,k,s)) and compare the result with Delta(P(n,k,s*)).

    With ``literal=True`` the mu2 condition is taken word for word
    (``A_{e+1} != A_e u E``) and the mu5 condition uses ``D(sigma)``; the
    default reads them as ``A_{e+1} - E != A_e`` and ``F(sigma)``, which is
    what the inserted elements require.
    """
    s = s if isinstance(s, StabilityVector) else StabilityVector(s)
    if s.k != k or k < 2 or s[-1] != 1 or not s.theorem_regime:
        raise ParameterError(f"need k >= 2, s_i >= 2 for i < k and s_k = 1; got {s}")
    s_star = s.with_last(2)
    ctx = _Ctx(n, k, s, s_star)
    start = pair_chains(n, k, s, max_elements, max_simplices)
    target = pair_chains(n, k, s_star, max_elements, max_simplices)
    start_h = reduced_homology(chains_to_complex(start)) if homology else None
    target_h = reduced_homology(chains_to_complex(target)) if homology else None

    h1 = {c for c in start if ctx.in_h1(c)}
    h2 = {c for c in h1 if ctx.in_h2(c)}
    sw = {c: _swap(c) for c in start}
    h3 = {c for c in start if ctx.in_h1(sw[c])}
    h3_const = {c for c in h3 if ctx.in_h2(sw[c])}
    claims = {"H1_H3_disjoint": not (h1 & h3), "H2_subset_H1": h2 <= h1}

    stages = []
    residual = set(start)

    def run(name, mu, fails, removed):
        nonlocal residual
        m = PartialMatching(frozenset(residual), mu)
        chk = check_matching(m)
        acyc = check_acyclic(m) if chk.valid else False
        crit = critical_subcomplex(m)
        is_sub = not isinstance(crit, NotASubcomplex)
        expected = residual - removed
        crit_cells = m.critical()
        matches = crit_cells == expected
        hom = preserved = None
        if homology:
            rh = reduced_homology(chains_to_complex(crit_cells)) if is_sub else None
            hom = None if rh is None else rh.to_json()
            preserved = None if rh is None else rh.signature() == start_h.signature()
        all_fails = _fmt_failures(fails)
        if not chk.valid:
            all_fails.extend({"reason": f} for f in chk.failures[:10])
        for c in sorted(crit_cells & removed)[:10]:
            all_fails.append({"chain": chain_to_json(c), "reason": "claimed cell left critical"})
        for c in sorted(expected - crit_cells)[:10]:
            all_fails.append({"chain": chain_to_json(c), "reason": "unclaimed cell matched"})
        if not is_sub:
            all_fails.append({"chain": chain_to_json(crit.cell), "reason": "critical cell with non-critical face",
                              "face": chain_to_json(crit.face)})
        stages.append(StageResult(name, len(mu), chk.valid, acyc, is_sub, matches, hom, preserved, all_fails))
        residual = crit_cells

    mu, fails = _mu1(ctx, residual)
    run("mu1", mu, fails, h1 - h2)
    mu, fails = _mu2(ctx, residual, literal)
    run("mu2", mu, fails, h2)
    mu, fails = _mirror(_mu1, ctx, residual)
    run("mu3", mu, fails, h3 - h3_const)
    mu, fails = _mirror(_mu2, ctx, residual, literal)
    run("mu4", mu, fails, h3_const)
    h5 = {c for c in residual if _in_h5(ctx, c)}
    h6_before_mu5 = {c for c in residual if _in_h5(ctx, _swap(c))}
    claims["H5_H6_disjoint"] = not (h5 & h6_before_mu5)
    mu, fails = _mu5(ctx, residual, literal)
    run("mu5", mu, fails, h5)
    h6 = {c for c in residual if _in_h5(ctx, _swap(c))}
    mu, fails = _mirror(_mu5, ctx, residual, literal)
    run("mu6", mu, fails, h6)

    final_equal = residual == target
    homology_equal = None if not homology else start_h.signature() == target_h.signature()
    ok = all(st.ok for st in stages) and final_equal and homology_equal is not False
    return {
        "check": "theorem8",
        "params": {"n": n, "k": k, "s": s.to_json(), "s_star": s_star.to_json()},
        "literal": literal,
        "num_cells": len(start),
        "num_target_cells": len(target),
        "set_sizes": {"H1": len(h1), "H2": len(h2), "H3": len(h3), "H3_const": len(h3_const),
                      "H5": len(h5), "H6": len(h6)},
        "claims": claims,
        "stages": [st.to_json() for st in stages],
        "final_equals_target": final_equal,
        "start_homology": None if start_h is None else start_h.to_json(),
        "target_homology": None if target_h is None else target_h.to_json(),
        "homology_equal": homology_equal,
        "notes": [
            "B-side stages (mu3, mu4, mu6) swap the roles of A and B",
            "f(sigma) is computed from F(sigma)",
            "mu6 acts on chains left after mu5",
        ],
        "ok": ok,
    }
