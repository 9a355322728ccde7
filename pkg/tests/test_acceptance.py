"""End-to-end acceptance checks, one per criterion.

Each criterion is a function returning ``(ok, detail)``; the tests print one
``ACCEPTANCE i PASS|FAIL`` line each and then assert.  Run this file directly
to get the same lines without pytest.
"""

import contextlib
import io
import random
import sys
from itertools import product

import pytest

from kneser_topo import (
    PartialMatching,
    SimplicialComplex,
    boundary_matrices,
    build_graph,
    build_pair_poset,
    chromatic_number_exact,
    canonical_coloring,
    corollary10_check,
    enumerate_stable,
    lemma5_verify,
    neighborhood_complex,
    order_complex,
    pair_chains,
    reduced_homology,
    suspension_check,
    theorem7_all_levels,
    theorem7_base_case,
    theorem8_verify,
    verify_coloring,
)
from kneser_topo.cli import main as cli_main
from kneser_topo.morse import build_mu1, build_mu2, chains_to_complex, check_acyclic, check_matching

sys.path.insert(0, __file__.rsplit("/", 1)[0])
from oracles import brute_stable  # noqa: E402

GRID = [
    (4, 2, (2, 1)), (5, 2, (2, 1)), (5, 2, (2, 2)), (6, 2, (2, 1)), (6, 2, (2, 2)),
    (6, 2, (3, 1)), (7, 2, (2, 2)), (7, 2, (3, 2)), (7, 3, (2, 2, 1)), (8, 3, (2, 2, 2)),
]


def _expected_dim(n, s):
    return n - sum(s[:-1]) - 2


def criterion_1():
    bad = []
    for n, k, s in GRID:
        rep = reduced_homology(neighborhood_complex(build_graph(n, k, s)))
        d = _expected_dim(n, s)
        if not (rep.sphere_dim == d and rep.torsion_free):
            bad.append(((n, k, s), rep.to_json()))
    return not bad, f"{len(GRID) - len(bad)}/{len(GRID)} neighbourhood complexes are homology spheres" + (
        f"; mismatches {bad}" if bad else "")


def criterion_2():
    bad, checked = [], 0
    for n, k, s in GRID:
        g = build_graph(n, k, s)
        if g.num_vertices > 64:
            continue
        checked += 1
        res = chromatic_number_exact(g)
        formula = n - sum(s[:-1])
        canon = [canonical_coloring(v, n, s) for v in g.vertices]
        ok = (res.chi == formula and res.witness.proper and res.witness.color_count == formula
              and verify_coloring(g, res.witness.colors)
              and res.infeasibility_log["exhaustive_failure_at"] == formula - 1
              and verify_coloring(g, canon))
        if not ok:
            bad.append(((n, k, s), res.chi, formula))
    return not bad, f"chi matches on {checked - len(bad)}/{checked} instances" + (f"; {bad}" if bad else "")


def criterion_3():
    cases = [(4, 2, (2, 1)), (5, 2, (2, 1)), (5, 2, (2, 2))]
    bad = []
    for n, k, s in cases:
        rep = lemma5_verify(n, k, s)
        if not (rep["ok"] and rep["homology_equal"] and rep["id_le_psi_phi"] and rep["phi_psi_le_id"]):
            bad.append((n, k, s))
    return not bad, f"hom/pair comparison holds on {len(cases) - len(bad)}/{len(cases)}" + (
        f"; failing {bad}" if bad else "")


def criterion_4():
    parts = {}
    for k, s in [(2, (2, 1)), (3, (2, 2, 1)), (2, (3, 1))]:
        b = theorem7_base_case(k, s)
        parts[f"base{s}"] = b["ok"] and b["components_incomparable"] and b["homology"]["sphere_dim"] == 0
    for n in (5, 6):
        lv = theorem7_all_levels(n, 2, (2, 1))
        directions = all(
            [op["direction"] for op in level["operators"]] == ["increasing", "decreasing", "increasing", "decreasing"]
            for level in lv["levels"])
        parts[f"operators n={n}"] = lv["ok"] and directions
        parts[f"suspension n={n}"] = suspension_check(n, 2, (2, 1))["ok"]
    failed = [key for key, ok in parts.items() if not ok]
    return not failed, f"{len(parts) - len(failed)}/{len(parts)} operator checks hold" + (
        f"; failing {failed}" if failed else "")


def criterion_5():
    notes, all_ok = [], True
    for n in (4, 5, 6):
        rep = theorem8_verify(n, 2, (2, 1))
        stages = rep["stages"]
        valid = all(st["valid"] and st["acyclic"] for st in stages)
        sub = all(st["critical_is_subcomplex"] for st in stages)
        ok = valid and sub and rep["final_equals_target"] and rep["homology_equal"]
        all_ok &= ok
        if not ok:
            first = next(st for st in stages if not st["ok"])
            reason = first["failures"][0]["reason"] if first["failures"] else "see report"
            notes.append(f"n={n}: stage {first['stage']} breaks ({reason}); valid+acyclic={valid}, "
                         f"subcomplex={sub}, final=target {rep['final_equals_target']}, "
                         f"homology equal {rep['homology_equal']}")
        else:
            notes.append(f"n={n}: ok")
    return all_ok, "; ".join(notes)


def criterion_6():
    bad = []
    for n, k in [(9, 3), (6, 2)]:
        rep = corollary10_check(n, k)
        if not (rep["embedding"] and rep["subgraph"] and rep["chi_big"] is not None
                and rep["chi_big"] >= n - 3 * (k - 1) - 1):
            bad.append((n, k))
    return not bad, "embedding and bound hold on (9,3), (6,2)" if not bad else f"failing {bad}"


def _random_matching(rng, cells):
    used, mu = set(), {}
    for s in rng.sample(sorted(cells), len(cells)):
        if s in used:
            continue
        ups = [t for t in cells if len(t) == len(s) + 1 and set(s) < set(t) and t not in used]
        if ups and rng.random() < 0.7:
            t = rng.choice(ups)
            mu[s] = t
            used.update((s, t))
    return mu


def criterion_7():
    parts = {}
    complexes = [neighborhood_complex(build_graph(n, k, s)) for n, k, s in GRID]
    complexes += [order_complex(build_pair_poset(n, 2, (2, 1))) for n in (4, 5, 6)]
    parts["dd=0"] = all(boundary_matrices(c).check_dd_zero() for c in complexes)
    reports = [reduced_homology(c) for c in complexes]
    parts["euler"] = all(r.euler_from_betti() == r.euler_characteristic for r in reports)

    counts_ok = ineq_ok = True
    rng = random.Random(7)
    samples = []
    for n in (5, 6):
        cells = pair_chains(n, 2, (2, 1))
        m1, _ = build_mu1(n, 2, (2, 1), cells)
        m2, _ = build_mu2(n, 2, (2, 1), m1.critical())
        samples.append((chains_to_complex(cells), cells, m1))
        samples.append((chains_to_complex(m1.critical()), m1.critical(), m2))
    for _ in range(20):
        facets = [tuple(sorted(rng.sample(range(7), 3))) for _ in range(4)]
        c = SimplicialComplex(facets)
        samples.append((c, c.simplices, PartialMatching(frozenset(c.simplices), _random_matching(rng, c.simplices))))
    for c, cells, m in samples:
        counts_ok &= len(m.critical()) == len(cells) - 2 * len(m)
        if check_matching(m) and check_acyclic(m) and len(c) == len(cells):
            betti = reduced_homology(c, reduced=False).reduced_betti
            for d, b in betti.items():
                ineq_ok &= sum(1 for x in m.critical() if len(x) == d + 1) >= b
    parts["morse count"] = counts_ok
    parts["morse inequalities"] = ineq_ok

    enum_ok = True
    for k in range(1, 5):
        for n in range(k, 13):
            for s in product(range(1, 4), repeat=k):
                enum_ok &= [a.elements for a in enumerate_stable(n, k, s)] == brute_stable(n, k, s)
    parts["enumeration"] = enum_ok

    def cli_text(argv):
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = cli_main(argv, environ={})
        return code, buf.getvalue()

    runs = [cli_text(["grid", "--n", "4..6", "--k", "2", "--s", "2,1", "--format", "csv"]) for _ in range(2)]
    runs += [cli_text(["verify-proofs", "--n", "5", "--k", "2", "--s", "2,1"]) for _ in range(2)]
    parts["determinism"] = runs[0] == runs[1] and runs[2] == runs[3]
    failed = [key for key, ok in parts.items() if not ok]
    return not failed, f"{len(parts) - len(failed)}/{len(parts)} property suites hold" + (
        f"; failing {failed}" if failed else "")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7]


def _line(i, ok, detail):
    return f"ACCEPTANCE {i} {'PASS' if ok else 'FAIL'} {detail}"


@pytest.mark.parametrize("i", range(1, len(CRITERIA) + 1))
def test_acceptance(i, capsys):
    ok, detail = CRITERIA[i - 1]()
    with capsys.disabled():
        print("\n" + _line(i, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for i, crit in enumerate(CRITERIA, 1):
        ok, detail = crit()
        results.append(ok)
        print(_line(i, ok, detail), flush=True)
    sys.exit(0 if all(results) else 1)
