"""Command-line front end.

Exit codes: 0 success / true, 1 mathematically negative result, 2 input
error, 3 combination not covered by any construction.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import newick
from .constructions import FAMILIES, GRAPH_FAMILIES, canonical_class, construct
from .errors import DisconnectedGraph, OrderViolation, PCGError, UnsupportedCombination
from .formats import (
    dumps,
    read_edge_list,
    read_spec,
    trace_to_json,
    verdict_to_json,
    witness_from_json,
    witness_to_json,
    write_edge_list,
)
from .graph import (
    classify_split_component,
    degree_partition,
    is_threshold,
    split_partition,
)
from .oracle import DEFAULT_MAX_NONEDGES, MEMBER, decide, probe_open_problem
from .rational import format_bound, parse_bound, parse_rational
from .tree import pcg_eval, verify_witness

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_UNSUPPORTED = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise InputError(f"cannot write {out}: {exc.strerror}") from None


def cmd_construct(args) -> int:
    cls = canonical_class(args.cls)
    text = _read(args.input)
    source = read_edge_list(text) if args.family in GRAPH_FAMILIES else read_spec(text)
    try:
        trace = construct(args.family, cls, source)
    except (UnsupportedCombination, OrderViolation) as exc:
        print(f"unsupported: {args.family} as {cls}: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    w = trace.witness
    _write(dumps(witness_to_json(w)), args.out)
    if args.trace:
        _write(dumps(trace_to_json(trace)), args.trace)
    summary = (
        f"construction {trace.theorem}: class={w.cls} "
        f"d_min={format_bound(w.d_min)} d_max={format_bound(w.d_max)}"
    )
    print(summary, file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def cmd_eval(args) -> int:
    tree = newick.parse(_read(args.tree))
    d_min = parse_rational(args.dmin)
    d_max = parse_bound(args.dmax)
    _write(write_edge_list(pcg_eval(tree, d_min, d_max)), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    g = read_edge_list(_read(args.graph))
    w = witness_from_json(_read(args.witness))
    ok = verify_witness(g, w)
    print("valid" if ok else "invalid")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_decide(args) -> int:
    g = read_edge_list(_read(args.graph))
    v = decide(
        g,
        canonical_class(args.cls),
        jobs=args.jobs,
        max_n=args.max_n,
        max_nonedges=args.max_nonedges,
    )
    sys.stdout.write(dumps(verdict_to_json(v)))
    return EXIT_OK if v.outcome == MEMBER else EXIT_NEGATIVE


def cmd_classify(args) -> int:
    g = read_edge_list(_read(args.graph))
    out: dict = {"n": g.n, "edges": len(g.edges), "connected": g.is_connected()}
    try:
        part = degree_partition(g)
        out["degree_partition"] = {
            "degrees": list(part.degrees),
            "boxes": [sorted(b) for b in part.boxes],
        }
        out["threshold"] = is_threshold(g) is not None
    except DisconnectedGraph:
        out["degree_partition"] = None
        out["threshold"] = False
    sp = split_partition(g)
    out["split"] = sp is not None
    if sp is not None:
        out["split_partition"] = {"clique": sorted(sp.clique), "stable": sorted(sp.stable)}
        out["component_kind"] = classify_split_component(g, sp)
    else:
        out["split_partition"] = None
        out["component_kind"] = None
    sys.stdout.write(json.dumps(out, indent=2) + "\n")
    return EXIT_OK


def cmd_probe(args) -> int:
    spec = read_spec(_read(args.spec))
    v = probe_open_problem(
        spec, jobs=args.jobs, max_n=args.max_n, max_nonedges=args.max_nonedges
    )
    sys.stdout.write(dumps(verdict_to_json(v)))
    return EXIT_OK if v.outcome == MEMBER else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcgtools",
        description="Build, evaluate, verify and decide pairwise compatibility representations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="emit a witness for a supported graph family")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--class", dest="cls", required=True, choices=["lpg", "mlpg", "pcg"])
    p.add_argument("--input", required=True, help="edge-list file, or spec JSON for sequence families")
    p.add_argument("--out", help="witness JSON path (default: stdout)")
    p.add_argument("--trace", help="also write the construction trace JSON here")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("eval", help="graph of a Newick tree under distance bounds")
    p.add_argument("--tree", required=True)
    p.add_argument("--dmin", required=True, help="exact rational p/q")
    p.add_argument("--dmax", required=True, help="exact rational p/q or inf")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="check a witness against a graph (exit 0 valid, 1 invalid)")
    p.add_argument("--graph", required=True)
    p.add_argument("--witness", required=True)
    p.set_defaults(func=cmd_verify)

    def oracle_flags(p):
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--max-n", type=int, default=None)
        p.add_argument("--max-nonedges", type=int, default=DEFAULT_MAX_NONEDGES)

    p = sub.add_parser("decide", help="exact membership by topology exhaustion")
    p.add_argument("--graph", required=True)
    p.add_argument("--class", dest="cls", required=True, choices=["lpg", "mlpg", "pcg"])
    oracle_flags(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("classify", help="threshold / split recognition report")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("probe", help="PCG decision for a composed matrogenic spec")
    p.add_argument("--spec", required=True)
    oracle_flags(p)
    p.set_defaults(func=cmd_probe)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, PCGError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
