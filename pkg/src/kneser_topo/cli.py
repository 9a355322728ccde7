"""Command-line front end: single-instance reports, verification runs and parameter grids.

Data goes to stdout (or ``--out``); progress and warnings go to stderr.
Exit codes: 0 all checks passed, 1 a verification failed, 2 a resource cap
was hit, 3 invalid parameters.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .complexes import build_hom_poset, build_pair_poset, neighborhood_complex, order_complex
from .errors import Caps, ParameterError, ResourceError, caps_from_env
from .homology import is_homology_sphere, reduced_homology
from .kneser_graph import (
    build_graph,
    canonical_coloring,
    chromatic_number_exact,
    corollary10_check,
    graph_report,
    lovasz_bound_report,
    verify_coloring,
)
from .morse import theorem8_verify
from .order_homotopy import lemma5_verify, suspension_check, theorem7_all_levels, theorem7_base_case
from .stable_sets import StabilityVector, enumerate_stable, in_theorem_regime, theorem_sum

log = logging.getLogger("kneser_topo")

EXIT_OK, EXIT_FAIL, EXIT_CAP, EXIT_PARAMS = 0, 1, 2, 3

GRID_COLUMNS = [
    "n", "k", "s", "num_vertices", "num_edges", "chi_exact", "chi_formula", "chi_match",
    "sphere_dim_expected", "sphere_verified", "lemma5", "thm7", "thm8",
]
NO_FORMULA = "no formula asserted"


@dataclass
class RunConfig:
    command: str
    n: list[int]
    k: int | None
    s: list[StabilityVector]
    s_star: StabilityVector | None = None
    target: str = "ncomplex"
    fmt: str = "json"
    out: str | None = None
    caps: Caps = field(default_factory=Caps)
    jobs: int = 1

    @property
    def single(self) -> tuple[int, int, StabilityVector]:
        if len(self.n) != 1 or len(self.s) != 1:
            raise ParameterError(f"{self.command} takes a single --n and a single --s")
        s = self.s[0]
        return self.n[0], s.k, s


@dataclass
class VerificationReport:
    params: dict
    checks: dict
    cap_hit: bool = False

    @property
    def passed(self) -> bool:
        return not self.cap_hit and all(c.get("ok") is True for c in self.checks.values())

    def to_json(self) -> dict:
        return {"params": self.params, "checks": self.checks, "cap_hit": self.cap_hit, "pass": self.passed}


# -- argument parsing -----------------------------------------------------------

def parse_int_range(text: str) -> list[int]:
    """``"5"``, ``"4..8"`` (inclusive) or ``"4,6,9"``; an empty range such as ``"5..4"`` gives []."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            lo, sep, hi = part.partition("..")
            if sep:
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise ParameterError(f"cannot parse integer range {text!r}") from None
    return sorted(set(out))


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the invalid-parameters code rather than argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAMS, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--n", required=True, help="ground set size; grid accepts ranges like 4..8")
    common.add_argument("--k", type=int, help="subset size (must equal the length of --s)")
    common.add_argument("--s", action="append", help="stability vector, comma separated (grid: repeatable)")
    common.add_argument("--s-star", dest="s_star", help="vector for the second pair poset (default: s with last entry 2)")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    common.add_argument("--max-elements", type=int)
    common.add_argument("--max-simplices", type=int)
    common.add_argument("--vertex-budget", type=int)
    common.add_argument("--jobs", type=int, default=1)

    parser = _Parser(prog="kneser-topo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("enumerate", "list the stable k-subsets of [n]"),
        ("graph", "stable Kneser graph summary and exact chromatic number"),
        ("ncomplex", "neighbourhood complex of the stable Kneser graph"),
        ("pair-poset", "the poset of disjoint pairs (A, B)"),
        ("homology", "reduced integral homology of a chosen complex"),
        ("verify-theorem2", "neighbourhood complex is a homology sphere of the predicted dimension"),
        ("verify-theorem3", "exact chromatic number equals the predicted value"),
        ("verify-proofs", "check the intermediate constructions of the sphere proof"),
        ("corollary10", "lower bound for 3-stable Kneser graphs via the embedding"),
        ("grid", "table of checks over parameter ranges"),
    ]:
        p = sub.add_parser(name, parents=[common], help=help_)
        if name == "homology":
            p.add_argument("--target", choices=("ncomplex", "pair-poset", "hom"), default="ncomplex")
    return parser


def config_from_args(args: argparse.Namespace, environ=None) -> RunConfig:
    caps = caps_from_env(environ).updated(
        max_elements=args.max_elements, max_simplices=args.max_simplices, vertex_budget=args.vertex_budget
    )
    if args.jobs < 1:
        raise ParameterError("--jobs must be positive")
    n_values = parse_int_range(args.n)
    if args.command != "grid" and len(n_values) != 1:
        raise ParameterError(f"{args.command} takes a single --n, got {args.n!r}")
    if args.command == "corollary10":
        if args.k is None:
            raise ParameterError("corollary10 needs --k")
        s_list = [StabilityVector.uniform(3, args.k)]
    else:
        if not args.s:
            raise ParameterError("--s is required")
        s_list = [StabilityVector.parse(x) for x in args.s]
        if args.command != "grid" and len(s_list) != 1:
            raise ParameterError("--s may be repeated only for grid")
    if args.k is not None:
        for s in s_list:
            if s.k != args.k:
                raise ParameterError(f"--s {s} has length {s.k} but --k is {args.k}")
    s_star = StabilityVector.parse(args.s_star) if args.s_star else None
    return RunConfig(
        command=args.command,
        n=n_values,
        k=args.k,
        s=s_list,
        s_star=s_star,
        target=getattr(args, "target", "ncomplex"),
        fmt=args.fmt,
        out=args.out,
        caps=caps,
        jobs=args.jobs,
    )


def _warn_regime(n: int, s: StabilityVector):
    if not in_theorem_regime(n, s):
        log.warning("(n=%d, s=%s) is outside the theorem regime; no closed-form claim is checked", n, s)


def _params(n: int, k: int, s: StabilityVector) -> dict:
    return {"n": n, "k": k, "s": s.to_json()}


# -- single-instance commands ---------------------------------------------------

def cmd_enumerate(cfg: RunConfig) -> tuple[dict, int]:
    n, k, s = cfg.single
    sets = enumerate_stable(n, k, s)
    return {"params": _params(n, k, s), "count": len(sets), "sets": [a.to_json() for a in sets]}, EXIT_OK


def cmd_graph(cfg: RunConfig) -> tuple[dict, int]:
    n, k, s = cfg.single
    _warn_regime(n, s)
    g = build_graph(n, k, s)
    log.info("graph: %d vertices, %d edges", g.num_vertices, g.num_edges)
    code = EXIT_OK
    try:
        res = chromatic_number_exact(g, cfg.caps.vertex_budget)
    except ResourceError as exc:
        log.warning("%s", exc)
        res, code = None, EXIT_CAP
    report = graph_report(g, res)
    report["summary"] = f"{g.num_vertices} vertices, {g.num_edges} edges"
    report["vertices"] = [v.to_json() for v in g.vertices]
    report["edges"] = [list(e) for e in g.edges]
    report["cap_hit"] = res is None
    return report, code


def cmd_ncomplex(cfg: RunConfig) -> tuple[dict, int]:
    n, k, s = cfg.single
    g = build_graph(n, k, s)
    c = neighborhood_complex(g, cfg.caps.max_simplices)
    return {
        "params": _params(n, k, s),
        "num_vertices": len(c.vertices),
        "dimension": c.dimension,
        "f_vector": c.f_vector(),
        "complex": c.to_json(),
    }, EXIT_OK


def cmd_pair_poset(cfg: RunConfig) -> tuple[dict, int]:
    n, k, s = cfg.single
    p = build_pair_poset(n, k, s, cfg.caps.max_elements)
    return {
        "params": _params(n, k, s),
        "num_elements": len(p),
        "num_covers": len(p.covers),
        "num_minimal": len(p.minimal()),
        "num_maximal": len(p.maximal()),
        "poset": p.to_json(),
    }, EXIT_OK


def _target_complex(target: str, n: int, k: int, s: StabilityVector, caps: Caps):
    if target == "ncomplex":
        return neighborhood_complex(build_graph(n, k, s), caps.max_simplices)
    if target == "pair-poset":
        return order_complex(build_pair_poset(n, k, s, caps.max_elements), caps.max_simplices)
    if target == "hom":
        return order_complex(build_hom_poset(build_graph(n, k, s), caps.max_elements), caps.max_simplices)
    raise ParameterError(f"unknown homology target {target!r}")


def cmd_homology(cfg: RunConfig) -> tuple[dict, int]:
    n, k, s = cfg.single
    _warn_regime(n, s)
    c = _target_complex(cfg.target, n, k, s, cfg.caps)
    log.info("%s: f-vector %s", cfg.target, c.f_vector())
    h = reduced_homology(c, max_simplices=cfg.caps.max_simplices)
    out = {"params": _params(n, k, s), "target": cfg.target, "f_vector": c.f_vector()}
    out.update(h.to_json())
    out["sphere_dim_expected"] = n - theorem_sum(s) - 2 if in_theorem_regime(n, s) else None
    return out, EXIT_OK


# -- verification commands ------------------------------------------------------

def _require_regime(n: int, s: StabilityVector):
    if not in_theorem_regime(n, s):
        raise ParameterError(
            f"(n={n}, s={s}) is outside the theorem regime: need k >= 2, s_i >= 2 for i < k, "
            f"s_k in {{1,2}} and n >= {theorem_sum(s) + 2}"
        )


def theorem2_check(n: int, k: int, s: StabilityVector, caps: Caps) -> dict:
    g = build_graph(n, k, s)
    c = neighborhood_complex(g, caps.max_simplices)
    h = reduced_homology(c, max_simplices=caps.max_simplices)
    d = n - theorem_sum(s) - 2
    ok = is_homology_sphere(h, d)
    return {
        "check": "theorem2",
        "sphere_dim_expected": d,
        "homology": h.to_json(),
        "f_vector": c.f_vector(),
        "lovasz": lovasz_bound_report(n, k, s, d if ok else None),
        "ok": ok,
    }


def theorem3_check(n: int, k: int, s: StabilityVector, caps: Caps) -> dict:
    g = build_graph(n, k, s)
    res = chromatic_number_exact(g, caps.vertex_budget)
    formula = n - theorem_sum(s)
    canon = [canonical_coloring(v, n, s) for v in g.vertices]
    canon_ok = verify_coloring(g, canon) and len(set(canon)) <= formula
    levels = res.infeasibility_log.get("levels", [])
    exhaustive = any(lv["colors"] == res.chi - 1 and not lv["feasible"] for lv in levels) or res.chi == 0
    return {
        "check": "theorem3",
        "num_vertices": g.num_vertices,
        "num_edges": g.num_edges,
        "chi": res.chi,
        "formula": formula,
        "witness": list(res.witness.colors),
        "canonical_coloring_proper": canon_ok,
        "infeasibility": levels,
        "ok": res.chi == formula and canon_ok and exhaustive,
    }


def _verify_single(cfg: RunConfig, check) -> tuple[dict, int]:
    n, k, s = cfg.single
    _require_regime(n, s)
    t0 = time.perf_counter()
    rep = VerificationReport(_params(n, k, s), {})
    try:
        rep.checks[check.__name__.replace("_check", "")] = check(n, k, s, cfg.caps)
    except ResourceError as exc:
        log.warning("%s", exc)
        rep.cap_hit = True
    log.info("done in %.2fs", time.perf_counter() - t0)
    return rep.to_json(), _exit_for(rep)


def cmd_verify_theorem2(cfg: RunConfig) -> tuple[dict, int]:
    return _verify_single(cfg, theorem2_check)


def cmd_verify_theorem3(cfg: RunConfig) -> tuple[dict, int]:
    return _verify_single(cfg, theorem3_check)


def _exit_for(rep: VerificationReport) -> int:
    if rep.passed:
        return EXIT_OK
    if any(c.get("ok") is False for c in rep.checks.values()):
        return EXIT_FAIL
    return EXIT_CAP if rep.cap_hit else EXIT_FAIL


def proof_checks(n: int, k: int, s: StabilityVector, caps: Caps, s_star: StabilityVector | None = None) -> dict:
    """Intermediate constructions of the sphere proof, each as ``{"status": ..., "report": ...}``.

    Status is ``pass``, ``fail``, ``n/a`` (the construction does not apply)
    or ``cap`` (a resource cap was hit).
    """
    out: dict = {}

    def run(name, fn, *args):
        log.info("(n=%d, s=%s) %s", n, s, name)
        try:
            rep = fn(*args)
        except ResourceError as exc:
            out[name] = {"status": "cap", "report": {"error": str(exc)}}
            return
        out[name] = {"status": "pass" if rep["ok"] else "fail", "report": rep}

    run("lemma5", lemma5_verify, n, k, s, caps.max_elements)

    regime = in_theorem_regime(n, s)
    if regime and s[-1] == 1:
        if n == theorem_sum(s) + 2:
            run("thm7", theorem7_base_case, k, s, caps.max_elements)
        else:
            def chain_and_suspension():
                levels = theorem7_all_levels(n, k, s, caps.max_elements)
                susp = suspension_check(n, k, s, caps.max_elements)
                return {"check": "theorem7", "levels": levels, "suspension": susp,
                        "ok": levels["ok"] and susp["ok"]}
            run("thm7", chain_and_suspension)
    else:
        out["thm7"] = {"status": "n/a", "report": {"reason": "needs the theorem regime with s_k = 1"}}

    if regime:
        # the matching pipeline starts from the vector ending in 1
        base = s.with_last(1)
        if s_star is not None and s_star != base.with_last(2):
            raise ParameterError(f"--s-star must be {base.with_last(2)} for s={s}, got {s_star}")
        run("thm8", theorem8_verify, n, k, base, caps.max_elements, caps.max_simplices)
    else:
        out["thm8"] = {"status": "n/a", "report": {"reason": "outside the theorem regime"}}
    return out


def cmd_verify_proofs(cfg: RunConfig) -> tuple[dict, int]:
    n, k, s = cfg.single
    _warn_regime(n, s)
    checks = proof_checks(n, k, s, cfg.caps, cfg.s_star)
    rep = VerificationReport(_params(n, k, s), {})
    for name, item in checks.items():
        if item["status"] == "n/a":
            continue
        if item["status"] == "cap":
            rep.cap_hit = True
        rep.checks[name] = dict(item["report"], status=item["status"])
    out = rep.to_json()
    out["not_applicable"] = sorted(name for name, item in checks.items() if item["status"] == "n/a")
    return out, _exit_for(rep)


def cmd_corollary10(cfg: RunConfig) -> tuple[dict, int]:
    n, k, _ = cfg.single
    rep = corollary10_check(n, k, cfg.caps.vertex_budget)
    if rep["cap_hit"]:
        return rep, EXIT_CAP
    return rep, EXIT_OK if rep["ok"] else EXIT_FAIL


# -- grid ---------------------------------------------------------------------------

def grid_row(n: int, s_entries: tuple, caps: Caps) -> tuple[dict, bool, bool]:
    """One table row plus (any check failed, any cap hit)."""
    s = StabilityVector(s_entries)
    k = s.k
    regime = in_theorem_regime(n, s)
    row = {c: "" for c in GRID_COLUMNS}
    row.update(n=n, k=k, s=",".join(map(str, s)))
    failed = capped = False
    if n < k:
        row.update(num_vertices=0, num_edges=0, chi_formula=NO_FORMULA)
        return row, False, False
    g = build_graph(n, k, s)
    row.update(num_vertices=g.num_vertices, num_edges=g.num_edges)
    formula = n - theorem_sum(s) if regime else None
    row["chi_formula"] = formula if regime else NO_FORMULA
    try:
        chi = chromatic_number_exact(g, caps.vertex_budget).chi
        row["chi_exact"] = chi
        if regime:
            row["chi_match"] = chi == formula
            failed |= chi != formula
    except ResourceError:
        row["chi_exact"] = "cap"
        capped = True
    if regime:
        d = n - theorem_sum(s) - 2
        row["sphere_dim_expected"] = d
        try:
            h = reduced_homology(neighborhood_complex(g, caps.max_simplices), max_simplices=caps.max_simplices)
            row["sphere_verified"] = is_homology_sphere(h, d)
            failed |= not row["sphere_verified"]
        except ResourceError:
            row["sphere_verified"] = "cap"
            capped = True
    else:
        row["sphere_dim_expected"] = NO_FORMULA
    for name, item in proof_checks(n, k, s, caps).items():
        row[name] = item["status"]
        failed |= item["status"] == "fail"
        capped |= item["status"] == "cap"
    return row, failed, capped


def _grid_task(args):
    return grid_row(*args)


def cmd_grid(cfg: RunConfig) -> tuple[list[dict], int]:
    tasks = sorted({(n, tuple(s.entries)) for n in cfg.n for s in cfg.s}, key=lambda t: (t[0], len(t[1]), t[1]))
    for n, s in tasks:
        _warn_regime(n, StabilityVector(s))
    jobs = [(n, s, cfg.caps) for n, s in tasks]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_grid_task, jobs))
    else:
        results = []
        for i, job in enumerate(jobs, 1):
            log.info("grid row %d/%d: n=%d s=%s", i, len(jobs), job[0], job[1])
            results.append(_grid_task(job))
    rows = [r for r, _, _ in results]
    rows.sort(key=lambda r: (r["n"], r["k"], tuple(int(x) for x in r["s"].split(","))))
    if any(f for _, f, _ in results):
        code = EXIT_FAIL
    elif any(c for _, _, c in results):
        code = EXIT_CAP
    else:
        code = EXIT_OK
    return rows, code


COMMANDS = {
    "enumerate": cmd_enumerate,
    "graph": cmd_graph,
    "ncomplex": cmd_ncomplex,
    "pair-poset": cmd_pair_poset,
    "homology": cmd_homology,
    "verify-theorem2": cmd_verify_theorem2,
    "verify-theorem3": cmd_verify_theorem3,
    "verify-proofs": cmd_verify_proofs,
    "corollary10": cmd_corollary10,
    "grid": cmd_grid,
}


# -- output -------------------------------------------------------------------------

def _flatten(prefix: str, value, out: list):
    if isinstance(value, dict):
        for key, v in value.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), v, out)
    else:
        out.append((prefix, value if isinstance(value, (str, int, float, bool)) or value is None
                    else json.dumps(value, separators=(",", ":"))))


def render(result, fmt: str, grid: bool) -> str:
    if fmt == "json":
        return json.dumps(result, indent=2) + "\n"
    buf = io.StringIO()
    if grid:
        w = csv.DictWriter(buf, fieldnames=GRID_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(result)
    else:
        pairs: list = []
        _flatten("", result, pairs)
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(pairs)
    return buf.getvalue()


def main(argv=None, environ=None) -> int:
    logging.basicConfig(level=logging.INFO, format="kneser-topo: %(message)s", stream=sys.stderr)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors exit with 3, --help with 0
        return exc.code if isinstance(exc.code, int) else EXIT_PARAMS
    try:
        cfg = config_from_args(args, environ)
        result, code = COMMANDS[cfg.command](cfg)
    except ParameterError as exc:
        log.error("invalid parameters: %s", exc)
        return EXIT_PARAMS
    except ResourceError as exc:
        log.error("resource cap exceeded: %s", exc)
        return EXIT_CAP
    text = render(result, cfg.fmt, cfg.command == "grid")
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
