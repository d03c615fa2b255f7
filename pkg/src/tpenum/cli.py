"""Batch command line: `tpenum <command> [options]`.

Exit codes: 0 completed, 2 a dm_failure record was emitted, 3 the instance
could not be parsed or validated, 4 the brute-force oracle refused.
"""
from __future__ import annotations

import argparse
import random
import sys

from .consistency import gac
from .decomposition import MethodSpec, build_views, views_hypergraph
from .enumeration import DM_FAILURE, enumerate_all, enumerate_certified
from .hypergraphs import Hypergraph, find_tree_projection, hypergraph_of, is_tp_covered
from .instance_io import (
    InstanceFormatError,
    dumps_record,
    event_record,
    parse_document,
    serialize_instance,
    structure_record,
)
from .structures import (
    RelationalStructure,
    StructureError,
    compute_cores,
    domain_restricted_version,
    sorted_elements,
    validate_instance,
)
from .testkit import (
    DEFAULT_ORACLE_BUDGET,
    OracleBudgetExceeded,
    gen_3col,
    gen_grid,
    measure_delay,
    oracle_solutions_sorted,
)

EXIT_OK, EXIT_DM_FAILURE, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3, 4


class _Out:
    """Line writer that flushes every record."""

    def __init__(self, stream):
        self.stream = stream

    def record(self, rec):
        self.line(dumps_record(rec))

    def line(self, text):
        self.stream.write(text + "\n")
        self.stream.flush()


def _element(token: str):
    try:
        return int(token)
    except ValueError:
        return token


def _load(args):
    if args.input in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    doc = parse_document(text)
    if getattr(args, "output", None) is not None:
        doc["O"] = [_element(t) for t in args.output.split(",") if t]
    return doc


def _spec(args) -> MethodSpec:
    return MethodSpec(args.method, args.k)


def _view_hypergraph(doc, args) -> Hypergraph:
    A = doc["A"]
    if doc["views"] is not None:
        return Hypergraph.from_edges([s for s in doc["views"].values() if s], A.universe)
    return views_hypergraph(A, _spec(args))


def _edges_text(H: Hypergraph) -> str:
    return " ".join("{" + ",".join(map(str, sorted_elements(e))) + "}" for e in H.sorted_edges())


# ---------------------------------------------------------------------------
# commands


def _stream(stream, out: _Out, args) -> int:
    code = EXIT_OK
    count = 0
    for event in stream:
        if args.max_solutions is not None and count >= args.max_solutions:
            out.record({"event": "truncated", "after": count})
            break
        out.record(event_record(event))
        if event.kind == DM_FAILURE:
            code = EXIT_DM_FAILURE
        else:
            count += 1
    if args.stats:
        out.record({"event": "stats", **stream.stats.as_dict()})
    return code


def cmd_enumerate(args, out):
    doc = _load(args)
    return _stream(enumerate_all(doc["A"], doc["B"], doc["O"], _spec(args)), out, args)


def cmd_enumerate_certified(args, out):
    doc = _load(args)
    return _stream(enumerate_certified(doc["A"], doc["B"], doc["O"], _spec(args)), out, args)


def cmd_oracle(args, out):
    doc = _load(args)
    validate_instance(doc["A"], doc["B"], doc["O"]).raise_for_errors()
    sols = oracle_solutions_sorted(doc["A"], doc["B"], doc["O"], budget=args.budget)
    for i, h in enumerate(sols):
        if args.max_solutions is not None and i >= args.max_solutions:
            out.record({"event": "truncated", "after": i})
            break
        out.record({"event": "oracle_solution", "solution": {str(k): v for k, v in h.items()}})
    if args.stats:
        out.record({"event": "stats", "solutions": len(sols)})
    return EXIT_OK


def _restricted_views(doc, args):
    A, B, O = doc["A"], doc["B"], doc["O"]
    validate_instance(A, B, O).raise_for_errors()
    return build_views(*domain_restricted_version(A, B, O), _spec(args))


def cmd_gac(args, out):
    doc = _load(args)
    V = _restricted_views(doc, args)
    W = gac(V)
    for name in V.names:
        out.record({"view": name, "scope": list(V.scopes[name]),
                    "before": len(V.tuples[name]), "after": len(W.tuples[name])})
    out.record({"event": "gac", "empty": W.has_empty_view(), "outputs": list(doc["O"])})
    return EXIT_OK


def cmd_views(args, out):
    V = _restricted_views(_load(args), args)
    for name in V.names:
        out.record({"view": name, "scope": list(V.scopes[name]), "tuples": len(V.tuples[name]),
                    "base": name in V.base_view_names})
    return EXIT_OK


def cmd_check_tp(args, out):
    doc = _load(args)
    result = find_tree_projection(hypergraph_of(doc["A"]), _view_hypergraph(doc, args))
    if result is None:
        out.line("no tree projection")
    else:
        out.line("tree projection: " + _edges_text(result))
    return EXIT_OK


def cmd_tp_covered(args, out):
    doc = _load(args)
    covered = is_tp_covered(doc["A"], _view_hypergraph(doc, args), doc["O"], jointly=not args.per_variable)
    out.line("true" if covered else "false")
    return EXIT_OK


def cmd_core(args, out):
    doc = _load(args)
    for core in compute_cores(doc["A"]):
        out.record({"event": "core", **structure_record(core)})
    return EXIT_OK


def cmd_gen(args, out):
    if args.kind == "grid":
        A = gen_grid(args.rows, args.cols, restrict_corners=args.restrict_corners, symmetric=args.symmetric)
        B = RelationalStructure(A.vocabulary, A.universe, A.relations)
    else:
        if args.edges:
            edges = [tuple(_element(x) for x in e.split("-")) for e in args.edges.split(",")]
        else:
            rng = random.Random(args.seed)
            n = args.vertices
            pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
            edges = [p for p in pairs if rng.random() < args.density] or [pairs[0]]
        A, B = gen_3col(edges)
    out.stream.write(serialize_instance(A, B, []))
    out.stream.flush()
    return EXIT_OK


def cmd_bench_delay(args, out):
    doc = _load(args)
    run = enumerate_certified if args.certified else enumerate_all
    stream = run(doc["A"], doc["B"], doc["O"], _spec(args))
    report = measure_delay(stream)
    out.record({
        "event": "delay",
        "algorithm": stream.stats.algorithm,
        "outputs": stream.stats.outputs,
        "gac_gaps": report.gac_gaps,
        "max_gap": report.max_gap,
        "bound": report.bound,
        "failed_extensions": report.failed_extensions,
        "dm_failure": stream.stats.dm_failure,
        "passed": report.passed,
    })
    return EXIT_DM_FAILURE if stream.stats.dm_failure else EXIT_OK


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the input-error code, leaving 2 for dm_failure."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", "-i", default="-", help="instance document (default: stdin)")
    common.add_argument("--method", choices=("tw", "hw"), default="tw")
    common.add_argument("--k", type=int, default=2)
    common.add_argument("--output", help="comma-separated output variables (overrides the document)")
    common.add_argument("--max-solutions", type=int, default=None)
    common.add_argument("--stats", action="store_true")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled generation only")

    parser = _Parser(prog="tpenum", description="Projected CSP enumeration over decomposition views.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, help_ in [
        ("enumerate", cmd_enumerate, "all projected solutions (promise-based)"),
        ("enumerate-certified", cmd_enumerate_certified, "projected solutions with certificates"),
        ("oracle", cmd_oracle, "brute-force projected solutions"),
        ("gac", cmd_gac, "view sizes before and after GAC"),
        ("views", cmd_views, "view scopes and tuple counts"),
        ("check-tp", cmd_check_tp, "tree projection of the left hypergraph onto the views"),
        ("tp-covered", cmd_tp_covered, "whether the outputs are tp-covered"),
        ("core", cmd_core, "all cores of the left structure"),
        ("bench-delay", cmd_bench_delay, "GAC calls between consecutive outputs"),
    ]:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        if name == "oracle":
            p.add_argument("--budget", type=int, default=DEFAULT_ORACLE_BUDGET)
        if name == "tp-covered":
            p.add_argument("--per-variable", action="store_true",
                           help="one singleton relation per output variable")
        if name == "bench-delay":
            p.add_argument("--certified", action="store_true")

    gen = sub.add_parser("gen", help="generate an instance document")
    gen.set_defaults(func=cmd_gen)
    kinds = gen.add_subparsers(dest="kind", required=True)
    grid = kinds.add_parser("grid", parents=[common])
    grid.add_argument("rows", type=int)
    grid.add_argument("cols", type=int)
    grid.add_argument("--restrict-corners", action="store_true")
    grid.add_argument("--symmetric", action="store_true")
    col = kinds.add_parser("3col", parents=[common])
    col.add_argument("--edges", help="edge list like 1-2,2-3")
    col.add_argument("--vertices", type=int, default=5)
    col.add_argument("--density", type=float, default=0.5)
    return parser


def run_cli(argv=None, stdout=None) -> int:
    args = build_parser().parse_args(argv)
    out = _Out(stdout or sys.stdout)
    try:
        return args.func(args, out)
    except (InstanceFormatError, StructureError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OracleBudgetExceeded as exc:
        print(f"oracle refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET


def main() -> None:
    sys.exit(run_cli())

