"""Newick reading and writing with exact branch lengths.

Leaves are labeled ``v<k>`` for graph vertex ``k``; branch lengths are integers
or ``p/q`` fractions (plain decimals are read exactly but never written).
"""
from __future__ import annotations

import re

from .errors import InvalidTree, ParseError
from .rational import parse_rational
from .tree import WeightedTree

_LABEL = re.compile(r"[A-Za-z0-9_]+")
_LENGTH = re.compile(r"[0-9+\-./eE]+")
_VERTEX = re.compile(r"v(\d+)$")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.edges = []
        self.leaf_map = {}
        self.n_nodes = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise ParseError(f"expected {ch!r}, found {found!r}", self.pos)
        self.pos += 1

    def label(self) -> str | None:
        self.skip()
        m = _LABEL.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return m.group()

    def length(self):
        self.skip()
        start = self.pos
        m = _LENGTH.match(self.text, self.pos)
        if not m:
            raise ParseError("missing branch length", start)
        self.pos = m.end()
        try:
            w = parse_rational(m.group(), allow_decimal=True)
        except ParseError:
            raise ParseError(f"bad branch length {m.group()!r}", start) from None
        if w < 0:
            raise ParseError(f"negative branch length {m.group()}", start)
        return w

    def node(self) -> int:
        me = self.n_nodes
        self.n_nodes += 1
        has_children = self.peek() == "("
        if has_children:
            self.pos += 1
            while True:
                child = self.node()
                self.expect(":")
                self.edges.append((me, child, self.length()))
                if self.peek() == ",":
                    self.pos += 1
                    continue
                self.expect(")")
                break
        start = self.pos
        name = self.label()
        if name is not None:
            m = _VERTEX.match(name)
            if not m:
                raise ParseError(f"leaf labels must look like v<k>, got {name!r}", start)
            self.leaf_map[me] = int(m.group(1))
        elif not has_children:
            raise ParseError("leaf without a label", start)
        return me


def parse(text: str) -> WeightedTree:
    p = _Parser(text)
    p.node()
    p.expect(";")
    if p.peek():
        raise ParseError("trailing characters after ';'", p.pos)
    if len(set(p.leaf_map.values())) != len(p.leaf_map):
        raise ParseError("duplicate leaf label")
    try:
        return WeightedTree(p.n_nodes, p.edges, p.leaf_map)
    except InvalidTree as exc:
        raise ParseError(f"not a valid leaf-labeled tree: {exc}") from None


def serialize(t: WeightedTree) -> str:
    """Newick text rooted at node 0, children in node-id order."""
    parent, pw, order = t.parents(0)
    children: dict[int, list[int]] = {v: [] for v in range(t.n_nodes)}
    for v in order[1:]:
        children[parent[v]].append(v)

    def emit(v: int) -> str:
        label = f"v{t.leaf_map[v]}" if v in t.leaf_map else ""
        kids = sorted(children[v])
        if not kids:
            return label
        return "(" + ",".join(f"{emit(c)}:{pw[c]}" for c in kids) + ")" + label

    return emit(0) + ";"
