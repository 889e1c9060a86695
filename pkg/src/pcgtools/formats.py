"""Text and JSON formats: edge lists, matrogenic specs, witnesses, verdicts, traces."""
from __future__ import annotations

import json
from typing import TYPE_CHECKING

from . import newick
from .errors import InvalidBounds, InvalidGraph, ParseError
from .graph import Component, Graph, MatrogenicSpec
from .rational import format_bound, parse_bound, parse_rational
from .tree import CLASSES, Witness

if TYPE_CHECKING:
    from .constructions import ConstructionTrace
    from .oracle import Verdict


def read_edge_list(text: str) -> Graph:
    """``n <count>`` then ``e <u> <v>`` lines; ``#`` starts a comment."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "n" and len(parts) == 2:
                if n is not None:
                    raise ParseError("duplicate 'n' line", lineno)
                n = int(parts[1])
            elif parts[0] == "e" and len(parts) == 3:
                if n is None:
                    raise ParseError("edge before the 'n' line", lineno)
                edges.append((int(parts[1]), int(parts[2])))
            else:
                raise ParseError(f"unrecognized line {raw.strip()!r}", lineno)
        except ValueError:
            raise ParseError(f"bad integer in {raw.strip()!r}", lineno) from None
    if n is None:
        raise ParseError("missing 'n <count>' line")
    try:
        return Graph(n, edges)
    except InvalidGraph as exc:
        raise ParseError(str(exc)) from None


def write_edge_list(g: Graph) -> str:
    """Canonical form: edges with ``u < v`` in lexicographic order."""
    return "".join([f"n {g.n}\n"] + [f"e {u} {v}\n" for u, v in g.edge_list()])


def read_spec(text: str) -> MatrogenicSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"spec is not valid JSON: {exc.msg}", exc.pos) from None
    if isinstance(data, dict) and "components" in data:
        data = data["components"]
    if not isinstance(data, list):
        raise ParseError("spec must be a JSON array of {kind, size} objects")
    try:
        return MatrogenicSpec(tuple(Component(item["kind"], item["size"]) for item in data))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad spec component: {exc}") from None


def spec_to_json(spec: MatrogenicSpec) -> list:
    return [{"kind": c.kind, "size": c.size} for c in spec.components]


def witness_to_json(w: Witness) -> dict:
    return {
        "class": w.cls,
        "newick": newick.serialize(w.tree),
        "d_min": format_bound(w.d_min),
        "d_max": format_bound(w.d_max),
    }


def witness_from_json(data) -> Witness:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"witness is not valid JSON: {exc.msg}", exc.pos) from None
    try:
        cls = data["class"]
        tree = newick.parse(data["newick"])
        d_min = parse_rational(str(data["d_min"]))
        d_max = parse_bound(str(data["d_max"]))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"witness JSON is missing a field: {exc}") from None
    if cls not in CLASSES:
        raise ParseError(f"unknown witness class {cls!r}")
    try:
        return Witness(tree, d_min, d_max, cls)
    except InvalidBounds as exc:
        raise ParseError(str(exc)) from None


def verdict_to_json(v: Verdict) -> dict:
    out = {
        "class": v.cls,
        "outcome": v.outcome,
        "witness": witness_to_json(v.witness) if v.witness else None,
        "topologies_examined": v.topologies_examined,
        "lp_count": v.lp_count,
        "elapsed_ms": round(v.elapsed_ms, 3),
        "n": v.n,
        "exhaustion": v.exhaustion,
    }
    if v.label:
        out["label"] = v.label
    return out


def trace_to_json(trace: ConstructionTrace) -> dict:
    return {
        "theorem": trace.theorem,
        "reconstructed": trace.reconstructed,
        "witness": witness_to_json(trace.witness),
        "depths": {str(v): str(d) for v, d in sorted(trace.depths.items())},
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
