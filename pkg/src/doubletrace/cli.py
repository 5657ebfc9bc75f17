"""Command-line front-end.

Exit codes: 0 success / property holds, 1 principled refusal or property
failure, 2 input error, 3 budget exhausted.  JSON output is sorted-key and
byte-deterministic for a fixed input and flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from random import Random

from . import synthesis
from .analysis import classify_edges, validate_double_trace
from .embedding import is_orientable, surface_of, trace_faces
from .errors import (
    BudgetExceeded,
    DoubleTraceError,
    Refusal,
)
from .graph import (
    DEFAULT_TREE_BUDGET,
    Graph,
    betti,
    cut_edges,
    is_eulerian,
    parse_graph,
)
from .synthesis import DEFAULT_NODE_BUDGET

EXIT_OK = 0
EXIT_REFUSED = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _emit(payload: dict, as_json: bool, human: str) -> None:
    if as_json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(human)


def _emit_error(exc: Exception, as_json: bool) -> None:
    if as_json:
        print(
            json.dumps(
                {"error": {"type": type(exc).__name__, "message": str(exc)}},
                sort_keys=True,
                indent=2,
            )
        )
    else:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)


def _load_graph(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_graph(handle.read())


def _load_trace_tokens(path: str) -> list[str]:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read().split()


def _labels_to_ids(g: Graph, tokens: list[str]) -> list[int]:
    index = {label: v for v, label in enumerate(g.labels)}
    missing = [t for t in tokens if t not in index]
    if missing:
        from .errors import NotAWalk

        raise NotAWalk(f"unknown vertex label {missing[0]!r} in trace file")
    return [index[t] for t in tokens]


def _trace_human(g: Graph, report, trace) -> str:
    lines = []
    lines.append("trace: " + " ".join(g.labels[v] for v in trace.canonical()))
    lines.append(f"strong: {report.strong}")
    max_d = "unbounded" if report.max_stable_d is None else report.max_stable_d
    lines.append(f"max stable d: {max_d}")
    lines.append("edge directions:")
    per_edge: dict[int, list[tuple[int, int]]] = {}
    for st in trace.steps:
        per_edge.setdefault(st.edge, []).append((st.tail, st.head))
    for e in range(g.edge_count):
        u, v = g.endpoints(e)
        runs = ", ".join(f"{g.labels[a]}->{g.labels[b]}" for a, b in per_edge[e])
        lines.append(
            f"  edge {e} {{{g.labels[u]},{g.labels[v]}}}: {runs} ({report.edge_kinds[e]})"
        )
    return "\n".join(lines)


# --- subcommands ---------------------------------------------------------------


def cmd_info(args) -> int:
    g = _load_graph(args.graph)
    bridges = sorted(cut_edges(g))
    degrees = [g.degree(v) for v in range(g.vertex_count)]
    payload = {
        "vertex_count": g.vertex_count,
        "edge_count": g.edge_count,
        "betti": betti(g),
        "eulerian": is_eulerian(g),
        "min_degree": min(degrees),
        "max_degree": max(degrees),
        "cut_edges": bridges,
        "edges": [list(pair) for pair in g.edges],
        "labels": {str(i): label for i, label in enumerate(g.labels)},
    }
    human = (
        f"graph: {g.vertex_count} vertices, {g.edge_count} edges\n"
        f"betti number: {payload['betti']}\n"
        f"eulerian: {payload['eulerian']}\n"
        f"degrees: min {payload['min_degree']}, max {payload['max_degree']}\n"
        f"cut edges: {bridges if bridges else 'none'}"
    )
    _emit(payload, args.json, human)
    return EXIT_OK


def cmd_check(args) -> int:
    g = _load_graph(args.graph)
    walk = _labels_to_ids(g, _load_trace_tokens(args.trace))
    trace = validate_double_trace(g, walk)
    report = classify_edges(trace)
    _emit(report.to_json_dict(), args.json, _trace_human(g, report, trace))
    if args.d is not None:
        return EXIT_OK if report.is_d_stable(args.d) else EXIT_REFUSED
    return EXIT_OK if report.strong else EXIT_REFUSED


def cmd_construct(args) -> int:
    g = _load_graph(args.graph)
    kind = args.kind
    if kind == "double":
        rng = Random(args.seed) if args.seed is not None else None
        trace = synthesis.any_double_trace(g, rng=rng)
        report = classify_edges(trace)
        cert = synthesis.ConstructionCertificate(
            kind="double",
            trace=trace,
            embedding=None,
            witness={"seed": args.seed},
            verified=True,
            surface=None,
            report=report,
        )
    elif kind == "strong":
        cert = synthesis.strong_trace(g)
    elif kind == "dstable":
        if args.d is None:
            from .errors import ParseError

            raise ParseError("--kind dstable requires --d")
        cert = synthesis.d_stable_trace(g, args.d)
    elif kind == "parallel":
        if args.d is not None:
            cert = synthesis.parallel_d_stable_trace(g, args.d)
        else:
            cert = synthesis.parallel_strong_trace(g)
    else:  # antiparallel
        cert = synthesis.antiparallel_strong_trace(
            g, tree_budget=args.budget_trees, node_budget=args.budget_nodes
        )
    payload = cert.to_json_dict()
    if kind == "antiparallel" and not args.require_witness:
        payload["witness"] = {
            k: v for k, v in payload["witness"].items() if k != "spanning_tree"
        }
    human = _trace_human(g, cert.report, cert.trace) + f"\nkind: {cert.kind}\nverified: true"
    if cert.surface is not None:
        s = cert.surface
        human += f"\nsurface: {'orientable' if s.orientable else 'nonorientable'}, genus {s.genus}"
    _emit(payload, args.json, human)
    return EXIT_OK


def cmd_embed(args) -> int:
    g = _load_graph(args.graph)
    if args.nonorientable:
        emb = synthesis.nonorientable_one_face(g)
    else:
        emb = synthesis.one_face_embedding(g)
    surface = surface_of(emb)
    walk = trace_faces(emb)[0]
    payload = emb.to_json_dict()
    payload["surface"] = surface.to_json_dict()
    payload["facial_walk"] = [g.labels[v] for v in walk.vertices]
    payload["labels"] = {str(i): label for i, label in enumerate(g.labels)}
    human = (
        f"one-face embedding on {'an orientable' if surface.orientable else 'a nonorientable'} "
        f"surface of genus {surface.genus}\n"
        "facial walk: " + " ".join(g.labels[v] for v in walk.vertices)
    )
    _emit(payload, args.json, human)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    g = _load_graph(args.graph)
    with_reps = not args.count_only
    summary = synthesis.enumeration_summary(
        g,
        node_budget=args.budget_nodes,
        threads=args.threads,
        with_representatives=with_reps,
    )
    if args.convention is not None:
        result = summary[args.convention]
        payload = result.to_json_dict(g.labels)
        human = (
            f"convention {result.convention}: {result.count} strong traces "
            f"(parallel {result.parallel}, antiparallel {result.antiparallel}, mixed {result.mixed})"
        )
        _emit(payload, args.json, human)
        return EXIT_OK
    rows = [summary[name].to_json_dict(g.labels) for name in synthesis.CONVENTIONS]
    highlighted = [
        name for name in synthesis.CONVENTIONS if summary[name].count == args.highlight_count
    ]
    payload = {
        "conventions": rows,
        "highlight_count": args.highlight_count,
        "highlighted": highlighted,
    }
    lines = []
    for name in synthesis.CONVENTIONS:
        r = summary[name]
        mark = "  <-- matches highlight" if name in highlighted else ""
        lines.append(
            f"{name}: {r.count} (parallel {r.parallel}, antiparallel {r.antiparallel}, "
            f"mixed {r.mixed}){mark}"
        )
    _emit(payload, args.json, "\n".join(lines))
    return EXIT_OK


# --- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument(
        "--budget-trees",
        type=int,
        default=DEFAULT_TREE_BUDGET,
        metavar="N",
        help="cap on enumerated spanning trees",
    )
    common.add_argument(
        "--budget-nodes",
        type=int,
        default=DEFAULT_NODE_BUDGET,
        metavar="N",
        help="cap on search nodes",
    )
    common.add_argument(
        "--threads", type=int, default=1, metavar="K", help="worker count for enumeration"
    )

    parser = argparse.ArgumentParser(
        prog="doubletrace",
        description="Construct, verify, classify, and enumerate double traces of connected graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_info = sub.add_parser("info", parents=[common], help="structural summary of a graph")
    p_info.add_argument("graph")
    p_info.set_defaults(func=cmd_info)

    p_check = sub.add_parser("check", parents=[common], help="verify and classify a double trace")
    p_check.add_argument("graph")
    p_check.add_argument("--trace", required=True, help="trace file (vertex labels, one line)")
    p_check.add_argument("--d", type=int, default=None, help="require d-stability instead of strongness")
    p_check.set_defaults(func=cmd_check)

    p_con = sub.add_parser("construct", parents=[common], help="construct a trace of the requested kind")
    p_con.add_argument("graph")
    p_con.add_argument(
        "--kind",
        required=True,
        choices=["strong", "double", "parallel", "antiparallel", "dstable"],
    )
    p_con.add_argument("--d", type=int, default=None)
    p_con.add_argument(
        "--require-witness",
        action="store_true",
        help="include the spanning-tree certificate for antiparallel constructions",
    )
    p_con.add_argument("--seed", type=int, default=None, help="randomize --kind double")
    p_con.set_defaults(func=cmd_construct)

    p_embed = sub.add_parser("embed", parents=[common], help="compute a one-face embedding")
    p_embed.add_argument("graph")
    p_embed.add_argument(
        "--nonorientable", action="store_true", help="force a nonorientable surface"
    )
    p_embed.set_defaults(func=cmd_embed)

    p_enum = sub.add_parser("enumerate", parents=[common], help="enumerate all strong traces")
    p_enum.add_argument("graph")
    p_enum.add_argument("--convention", choices=list(synthesis.CONVENTIONS), default=None)
    p_enum.add_argument("--count-only", action="store_true")
    p_enum.add_argument(
        "--highlight-count",
        type=int,
        default=40,
        metavar="N",
        help="flag conventions whose class count equals N",
    )
    p_enum.set_defaults(func=cmd_enumerate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "d", None) is not None and args.d < 1:
        _emit_error(ValueError("--d must be a positive integer"), args.json)
        return EXIT_INPUT
    try:
        return args.func(args)
    except Refusal as exc:
        _emit_error(exc, args.json)
        return EXIT_REFUSED
    except BudgetExceeded as exc:
        _emit_error(exc, args.json)
        return EXIT_BUDGET
    except (DoubleTraceError, OSError) as exc:
        _emit_error(exc, args.json)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
