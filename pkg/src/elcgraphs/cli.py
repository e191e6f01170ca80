"""Command-line interface: ``elcgraphs <subcommand> ...``.

Exit codes: 0 success, 2 parse or validation error, 3 capacity exceeded,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import codes as codes_mod
from .constructions import ConstructionError, build, parse_spec
from .enumeration import (
    CLASSES,
    CapacityError,
    Census,
    classification_csv,
    classify_preserved,
    census_csv,
)
from .formats import from_adjacency_text, from_graph6, read_graph6_lines, to_graph6
from .graph import Graph, GraphError
from .orbits import OrbitCapExceeded, elc_orbit, elc_preserved_witness, lc_orbit

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CAPACITY = 3
EXIT_INVARIANT = 4

DEFAULT_SEED = 20080314

log = logging.getLogger("elcgraphs")


class InvariantViolation(RuntimeError):
    pass


@dataclass
class RunConfig:
    """Everything a subcommand run depends on."""

    subcommand: str
    inputs: list[str] = field(default_factory=list)
    n_min: int | None = None
    n_max: int | None = None
    jobs: int = 1
    fmt: str = "json"
    cap: int | None = None
    strict: bool = False
    deep: bool = False
    seed: int = DEFAULT_SEED


# --- input handling -------------------------------------------------------------


def _looks_like_matrix(text: str) -> bool:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    return bool(lines) and all(set(ln.replace(" ", "")) <= {"0", "1"} for ln in lines)


def read_graphs(item: str, how: str = "auto") -> list[Graph]:
    """Graphs from a graph6 string, a graph6 or adjacency file, or a construction spec."""
    if how == "spec":
        return [build(item)]
    if how == "graph6":
        return [from_graph6(item)]
    path = Path(item)
    if how in ("auto", "file", "adjacency") and path.is_file():
        text = path.read_text()
        if how == "adjacency" or (how != "file" and _looks_like_matrix(text)):
            return [from_adjacency_text(text)]
        body = text.strip().splitlines()
        return list(read_graph6_lines(body))
    if how == "adjacency":
        return [from_adjacency_text(item.replace(";", "\n"))]
    if how == "file":
        raise GraphError(f"no such file: {item}")
    try:
        return [from_graph6(item)]
    except GraphError:
        pass
    try:
        return [build(item)]
    except (ConstructionError, GraphError) as exc:
        raise GraphError(f"cannot read {item!r} as graph6, file or construction: {exc}") from None


def _emit(obj, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(obj, sort_keys=True) + "\n")
    elif fmt == "csv":
        keys = list(obj)
        out.write(",".join(keys) + "\n")
        out.write(",".join(str(obj[k]) for k in keys) + "\n")
    else:
        raise GraphError(f"format {fmt!r} not supported here")


# --- subcommands ------------------------------------------------------------------


def cmd_orbit(args, out) -> int:
    fn = elc_orbit if args.kind == "elc" else lc_orbit
    for g in read_graphs(args.graph, args.input_format):
        orbit = fn(g, args.cap)
        if args.format == "graph6" or args.members:
            for line in orbit.graph6_lines():
                out.write(line + "\n")
        if args.format != "graph6":
            _emit(orbit.summary(), args.format, out)
        if orbit.truncated:
            raise CapacityError(f"orbit grew past the cap of {orbit.size - 1} members")
    return EXIT_OK


def cmd_preserved(args, out) -> int:
    for g in read_graphs(args.graph, args.input_format):
        if not g.is_connected():
            raise GraphError("graph is not connected")
        w = elc_preserved_witness(g.adj)
        res = {"graph6": to_graph6(g), "preserved": w is None,
               "witness": list(w) if w else None}
        _emit(res, args.format, out)
    return EXIT_OK


def cmd_construct(args, out) -> int:
    spec = parse_spec(args.spec)
    g = build(spec, strict=args.strict)
    if args.format == "json":
        _emit({"spec": spec.text(), "n": g.n, "edges": g.edge_count, "graph6": to_graph6(g)},
              "json", out)
    else:
        out.write(to_graph6(g) + "\n")
    return EXIT_OK


def _code_from_args(args):
    if args.matrix:
        if len(args.matrix) > 1:
            raise GraphError("give one --matrix unless --survey is set")
        return codes_mod.parse_matrix_text(Path(args.matrix[0]).read_text()), None
    g = read_graphs(args.graph, args.input_format)[0]
    p = g.bipartition()
    if p is None:
        raise GraphError("code graphs must be bipartite")
    return codes_mod.code_from_graph(g, p, args.side), (g, p)


SURVEY_BUILTINS = ("he3", "H(s2)", "circ(3)", "circ(4)", "circ(5)")


def cmd_survey(args, out) -> int:
    """ELC orbit size class of the graphs of built-in and user self-dual codes."""
    from .enumeration import self_dual_orbit_survey

    items = []
    for spec in SURVEY_BUILTINS:
        g = build(spec)
        items.append((spec, codes_mod.code_from_graph(g, g.bipartition())))
    for path in args.matrix or []:
        items.append((path, codes_mod.parse_matrix_text(Path(path).read_text())))
    rows = self_dual_orbit_survey(items)
    if args.format == "json":
        for r in rows:
            out.write(json.dumps(r, sort_keys=True) + "\n")
    else:
        out.write("name,n,k,self_dual,orbit_size\n")
        for r in rows:
            out.write(f"{r['name']},{r['n']},{r['k']},{r['self_dual']},{r['orbit_size']}\n")
    return EXIT_OK


def cmd_code(args, out) -> int:
    if args.survey:
        return cmd_survey(args, out)
    if not args.matrix and not args.graph:
        raise GraphError("give a graph or --matrix FILE")
    code, gp = _code_from_args(args)
    isodual = None
    if gp is not None and code.n == 2 * code.k and gp[0].is_connected():
        g, p = gp
        isodual = codes_mod.is_isodual_via_orbit(g, p, args.cap)
    report = codes_mod.code_report(code, args.max_k, isodual)
    if gp is not None and args.check_orbit and gp[0].is_connected() and code.k <= args.max_k:
        d_orbit = codes_mod.min_distance_via_orbit(gp[0], gp[1], args.side, args.cap)
        if report.d is not None and d_orbit != report.d:
            raise InvariantViolation(f"orbit distance {d_orbit} != brute force {report.d}")
    if args.format == "json":
        obj = json.loads(report.to_json())
        obj["summary"] = f"{report.parameters}/{report.dual_parameters}"
        out.write(json.dumps(obj, sort_keys=True) + "\n")
    else:
        out.write(f"{report.parameters} dual {report.dual_parameters}"
                  f" self_dual={report.self_dual} isodual={report.isodual}\n")
    return EXIT_OK


def _census(args) -> Census:
    return Census(args.checkpoint, jobs=args.jobs, deep=args.deep)


def cmd_census(args, out) -> int:
    cls = args.cls
    lo = args.min_n if args.min_n is not None else (2 if cls == "bipartite" else 3)
    census = _census(args)
    out.write(census_csv(census, args.count, cls, range(lo, args.max_n + 1)))
    return EXIT_OK


def cmd_classify(args, out) -> int:
    entries = classify_preserved(args.max_bip, args.max_nonbip, _census(args))
    out.write(classification_csv(entries))
    bad = [e for e in entries if e.spec is None]
    if bad and args.strict:
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_selfcheck(args, out) -> int:
    """Randomized invariant checks; nonzero exit on any failure."""
    rng = random.Random(args.seed)
    failures = 0
    for _ in range(args.cases):
        n = rng.randint(2, 9)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.45]
        g = Graph.from_edges(n, edges)
        for v in range(n):
            if g.local_complement(v).local_complement(v) != g:
                failures += 1
        for u, v in g.edges():
            h = g.elc(u, v)
            if h.elc(u, v) != g or h != g.elc_via_lc(u, v):
                failures += 1
            if g.is_connected() != h.is_connected() or g.is_odd() != h.is_odd():
                failures += 1
    _emit({"cases": args.cases, "seed": args.seed, "failures": failures}, "json", out)
    if failures:
        raise InvariantViolation(f"{failures} invariant failures")
    return EXIT_OK


# --- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="elcgraphs", description="ELC orbits, preserved graphs and codes")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, graph=True, fmt=("json", "csv")):
        if graph:
            sp.add_argument("graph", nargs=None if graph is True else "?",
                            help="graph6 string, file, adjacency text or construction spec")
            sp.add_argument("--input-format", default="auto",
                            choices=["auto", "graph6", "file", "adjacency", "spec"])
        sp.add_argument("--format", default=fmt[0], choices=fmt)
        sp.add_argument("--cap", type=int, default=None, help="orbit size cap (env ELC_ORBIT_CAP)")
        sp.add_argument("--strict", action="store_true")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--deep", action="store_true", help="raise enumeration caps")

    sp = sub.add_parser("orbit", help="ELC or LC orbit of a graph")
    common(sp, fmt=("json", "csv", "graph6"))
    sp.add_argument("--kind", choices=["elc", "lc"], default="elc")
    sp.add_argument("--members", action="store_true", help="also list members as graph6")
    sp.set_defaults(func=cmd_orbit)

    sp = sub.add_parser("preserved", help="is the graph ELC-preserved")
    common(sp)
    sp.set_defaults(func=cmd_preserved)

    sp = sub.add_parser("construct", help="build a graph from a construction spec")
    sp.add_argument("spec")
    common(sp, graph=False, fmt=("graph6", "json"))
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("code", help="parameters of the code of a bipartite graph or matrix")
    common(sp, graph="optional")
    sp.add_argument("--matrix", action="append", help="file with generator rows of 0/1")
    sp.add_argument("--survey", action="store_true",
                    help="orbit size classes for built-in self-dual codes and any --matrix files")
    sp.add_argument("--side", choices=["left", "right"], default="left")
    sp.add_argument("--max-k", type=int, default=codes_mod.BRUTE_FORCE_MAX_K)
    sp.add_argument("--check-orbit", action="store_true",
                    help="cross-check the distance against the orbit bound")
    sp.set_defaults(func=cmd_code)

    sp = sub.add_parser("census", help="orbit, preserved or size-two counts as CSV")
    common(sp, graph=False, fmt=("csv",))
    sp.add_argument("--class", dest="cls", choices=list(CLASSES), required=True)
    sp.add_argument("--count", choices=["orbits", "preserved", "size-two"], required=True)
    sp.add_argument("--min-n", type=int)
    sp.add_argument("--max-n", type=int, required=True)
    sp.add_argument("--checkpoint", help="directory for resumable level files")
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("classify", help="match preserved graphs to construction expressions")
    common(sp, graph=False, fmt=("csv",))
    sp.add_argument("--max-bip", type=int, default=12)
    sp.add_argument("--max-nonbip", type=int, default=9)
    sp.add_argument("--checkpoint")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("selfcheck", help="randomized invariant checks")
    common(sp, graph=False)
    sp.add_argument("--cases", type=int, default=1000)
    sp.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if getattr(args, "cap", None) is not None and args.cap < 1:
        print("error: --cap must be positive", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args, out)
    except (CapacityError, codes_mod.CapacityError, OrbitCapExceeded) as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (InvariantViolation, AssertionError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
