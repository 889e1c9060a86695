"""Graph model, degree partitions, split/threshold recognition and composition.

Vertices are the dense integers ``0..n-1``.  Every object here is immutable.
"""
from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import DisconnectedGraph, InvalidGraph, InvalidPartition

MATCHING = "matching"
ANTIMATCHING = "antimatching"
CLIQUE = "clique"
STABLE = "stable"
OTHER = "other"
COMPONENT_KINDS = (MATCHING, ANTIMATCHING, CLIQUE, STABLE)


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Undirected simple graph on vertices ``0..n-1``."""

    __slots__ = ("n", "edges", "_adj")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise InvalidGraph(f"negative vertex count {n}")
        norm = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise InvalidGraph(f"self-loop on vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGraph(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            norm.add(_pair(u, v))
        self.n = n
        self.edges = frozenset(norm)
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in norm:
            adj[u].add(v)
            adj[v].add(u)
        self._adj = tuple(frozenset(a) for a in adj)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edge_list()})"

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self._adj]

    def edge_list(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, sorted lexicographically."""
        return sorted(self.edges)

    def non_edges(self) -> list[tuple[int, int]]:
        return [p for p in combinations(range(self.n), 2) if p not in self.edges]

    def complement(self) -> Graph:
        return Graph(self.n, self.non_edges())

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            for w in self._adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(self.has_edge(u, v) for u, v in combinations(vs, 2))

    def is_independent(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return not any(self.has_edge(u, v) for u, v in combinations(vs, 2))


# -- degree partition and threshold graphs ---------------------------------


@dataclass(frozen=True)
class DegreePartition:
    boxes: tuple[frozenset[int], ...]
    degrees: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.boxes)

    def box_index(self) -> dict[int, int]:
        """Map each vertex to its 1-based box index."""
        return {v: i for i, box in enumerate(self.boxes, start=1) for v in box}


def degree_partition(g: Graph) -> DegreePartition:
    if not g.is_connected():
        raise DisconnectedGraph("degree partition is defined for connected graphs only")
    by_degree: dict[int, set[int]] = defaultdict(set)
    for v, d in enumerate(g.degrees()):
        by_degree[d].add(v)
    degs = sorted(by_degree, reverse=True)
    return DegreePartition(tuple(frozenset(by_degree[d]) for d in degs), tuple(degs))


def is_threshold(g: Graph) -> DegreePartition | None:
    """Return the degree partition if ``g`` is threshold, else ``None``.

    A connected graph is threshold iff vertices ``u`` in box ``i`` and ``v``
    in box ``j`` are adjacent exactly when ``i + j <= r + 1``.
    """
    part = degree_partition(g)
    idx = part.box_index()
    bound = part.r + 1
    for u, v in combinations(range(g.n), 2):
        if g.has_edge(u, v) != (idx[u] + idx[v] <= bound):
            return None
    return part


def threshold_from_creation(seq: str) -> Graph:
    """Threshold graph from a creation sequence.

    Vertex 0 is the seed; character ``k`` of ``seq`` adds vertex ``k+1`` as
    dominating (``'d'``) or isolated (``'i'``).
    """
    edges = []
    for k, op in enumerate(seq, start=1):
        if op == "d":
            edges.extend((u, k) for u in range(k))
        elif op != "i":
            raise ValueError(f"creation sequence may only contain 'd' and 'i', got {op!r}")
    return Graph(len(seq) + 1, edges)


def random_threshold(n: int, seed: int | None = None) -> Graph:
    """Random connected threshold graph on ``n`` vertices with shuffled labels."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    ops = [rng.choice("di") for _ in range(n - 2)] + (["d"] if n >= 2 else [])
    g = threshold_from_creation("".join(ops))
    perm = list(range(n))
    rng.shuffle(perm)
    return Graph(n, [(perm[u], perm[v]) for u, v in g.edges])


def all_threshold_graphs(n: int) -> list[Graph]:
    """One connected threshold graph per creation sequence on ``n`` vertices."""
    if n == 1:
        return [Graph(1)]
    out = []
    for bits in range(2 ** (n - 2)):
        seq = "".join("d" if bits >> k & 1 else "i" for k in range(n - 2)) + "d"
        out.append(threshold_from_creation(seq))
    return out


# -- split graphs -----------------------------------------------------------


@dataclass(frozen=True)
class SplitPartition:
    clique: frozenset[int]
    stable: frozenset[int]

    def check(self, g: Graph) -> None:
        """Raise InvalidPartition unless this is a split partition of ``g``."""
        if self.clique & self.stable:
            raise InvalidPartition("clique and stable sets overlap")
        if self.clique | self.stable != frozenset(range(g.n)):
            raise InvalidPartition("partition does not cover the vertex set")
        if not g.is_clique(self.clique):
            raise InvalidPartition("clique side is not complete")
        if not g.is_independent(self.stable):
            raise InvalidPartition("stable side has an edge")

    def is_valid(self, g: Graph) -> bool:
        try:
            self.check(g)
        except InvalidPartition:
            return False
        return True


def _partition_key(p: SplitPartition):
    return (-len(p.clique), tuple(sorted(p.clique)))


def split_partitions(g: Graph) -> list[SplitPartition]:
    """All split partitions of ``g``, best first (largest clique, then lexicographic).

    A maximum clique ``K0`` comes from the Hammer-Simeone degree test; every other
    split partition differs from it by removing at most one vertex of ``K0`` and
    adding at most one vertex of the stable side.
    """
    if g.n == 0:
        return [SplitPartition(frozenset(), frozenset())]
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    d = [g.degree(v) for v in order]
    m = max(i for i in range(1, g.n + 1) if d[i - 1] >= i - 1)
    if sum(d[:m]) != m * (m - 1) + sum(d[m:]):
        return []
    k0 = frozenset(order[:m])
    s0 = frozenset(order[m:])
    found = set()
    for x in [None, *sorted(k0)]:
        for y in [None, *sorted(s0)]:
            k = (k0 - {x}) | ({y} - {None})
            p = SplitPartition(frozenset(k), frozenset(range(g.n)) - k)
            if p.is_valid(g):
                found.add(p)
    return sorted(found, key=_partition_key)


def split_partition(g: Graph) -> SplitPartition | None:
    parts = split_partitions(g)
    return parts[0] if parts else None


def _cross_sets(g: Graph, p: SplitPartition):
    ks, ss = sorted(p.clique), sorted(p.stable)
    cross = {(k, s) for k in ks for s in ss}
    edges = {(k, s) for k, s in cross if g.has_edge(k, s)}
    return ks, ss, edges, cross - edges


def _is_perfect_matching(pairs: set[tuple[int, int]], size: int) -> bool:
    return (
        len(pairs) == size
        and len({k for k, _ in pairs}) == size
        and len({s for _, s in pairs}) == size
    )


def classify_split_component(g: Graph, p: SplitPartition) -> str:
    """Kind of the split graph ``g`` under partition ``p``.

    When |K| = |S| both a matching and an antimatching reading can fit (always
    for |K| = 2).  The index pairing ``sorted(K)[i] <-> sorted(S)[i]`` decides
    first: cross edges equal to it read as ``matching``, cross non-edges equal
    to it as ``antimatching``; otherwise ``matching`` is preferred.
    """
    p.check(g)
    if not p.stable:
        return CLIQUE
    if not p.clique:
        return STABLE
    if len(p.clique) != len(p.stable):
        return OTHER
    ks, ss, cross_e, cross_n = _cross_sets(g, p)
    identity = set(zip(ks, ss))
    if cross_e == identity:
        return MATCHING
    if cross_n == identity:
        return ANTIMATCHING
    if _is_perfect_matching(cross_e, len(ks)):
        return MATCHING
    if _is_perfect_matching(cross_n, len(ks)):
        return ANTIMATCHING
    return OTHER


def cross_pairs(g: Graph, p: SplitPartition, kind: str) -> list[tuple[int, int]]:
    """The (clique, stable) pairs forming the perfect matching of a matching
    (cross edges) or antimatching (cross non-edges) component, sorted by clique vertex."""
    _, _, cross_e, cross_n = _cross_sets(g, p)
    pairs = cross_e if kind == MATCHING else cross_n
    if not _is_perfect_matching(pairs, len(p.clique)) or len(p.clique) != len(p.stable):
        raise InvalidPartition(f"cross pairs do not form a perfect matching for kind {kind}")
    return sorted(pairs)


def crosswise_complement(g: Graph, p: SplitPartition) -> Graph:
    """Flip only the clique-stable edges of ``g``."""
    kept = [e for e in g.edges if not ((e[0] in p.clique) ^ (e[1] in p.clique))]
    _, _, _, cross_n = _cross_sets(g, p)
    return Graph(g.n, kept + list(cross_n))


# -- composition and split matrogenic graphs --------------------------------


def compose(g1: Graph, p1: SplitPartition, g2: Graph) -> Graph:
    """Disjoint union with ``g2`` shifted by ``g1.n``, plus every K1 x V(g2) edge."""
    p1.check(g1)
    if g1.n == 0 or g2.n == 0:
        raise InvalidGraph("composition needs nonempty operands")
    off = g1.n
    edges = list(g1.edges)
    edges += [(u + off, v + off) for u, v in g2.edges]
    edges += [(k, v + off) for k in p1.clique for v in range(g2.n)]
    return Graph(g1.n + g2.n, edges)


@dataclass(frozen=True)
class Component:
    kind: str
    size: int

    def __post_init__(self):
        if self.kind not in COMPONENT_KINDS:
            raise ValueError(f"unknown component kind {self.kind!r}")
        if not isinstance(self.size, int) or self.size < 1:
            raise ValueError(f"component size must be a positive integer, got {self.size!r}")

    @property
    def n_clique(self) -> int:
        return 0 if self.kind == STABLE else self.size

    @property
    def n_stable(self) -> int:
        return 0 if self.kind == CLIQUE else self.size


@dataclass(frozen=True)
class MatrogenicSpec:
    components: tuple[Component, ...]

    def __post_init__(self):
        comps = tuple(
            c if isinstance(c, Component) else Component(*c) for c in self.components
        )
        if not comps:
            raise ValueError("a matrogenic spec needs at least one component")
        object.__setattr__(self, "components", comps)

    @classmethod
    def of(cls, *pairs: tuple[str, int]) -> MatrogenicSpec:
        return cls(tuple(Component(k, s) for k, s in pairs))

    @property
    def t(self) -> int:
        return len(self.components)

    @property
    def n(self) -> int:
        return sum(c.n_clique + c.n_stable for c in self.components)

    def kinds(self) -> list[str]:
        return [c.kind for c in self.components]


@dataclass(frozen=True)
class ComponentRange:
    kind: str
    clique: range
    stable: range

    @property
    def vertices(self) -> range:
        start = self.clique.start if len(self.clique) else self.stable.start
        return range(start, start + len(self.clique) + len(self.stable))


def component_graph(kind: str, size: int) -> tuple[Graph, SplitPartition]:
    """Component graph with clique vertices first.

    Clique vertex ``i`` is paired with stable vertex ``size + i``: joined by the
    matching edge, or left as the only missing cross edge for an antimatching.
    """
    c = Component(kind, size)
    nk, ns = c.n_clique, c.n_stable
    edges = list(combinations(range(nk), 2))
    if kind == MATCHING:
        edges += [(i, nk + i) for i in range(size)]
    elif kind == ANTIMATCHING:
        edges += [(i, nk + j) for i in range(size) for j in range(size) if i != j]
    part = SplitPartition(frozenset(range(nk)), frozenset(range(nk, nk + ns)))
    return Graph(nk + ns, edges), part


def split_matching(k: int) -> Graph:
    return component_graph(MATCHING, k)[0]


def split_antimatching(k: int) -> Graph:
    return component_graph(ANTIMATCHING, k)[0]


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def build_matrogenic(spec: MatrogenicSpec) -> tuple[Graph, list[ComponentRange]]:
    """Left-fold composition of the spec's components.

    Returns the graph and, per component, the vertex ranges of its clique and
    stable sides.
    """
    g, part = component_graph(spec.components[0].kind, spec.components[0].size)
    c0 = spec.components[0]
    ranges = [ComponentRange(c0.kind, range(0, c0.n_clique), range(c0.n_clique, g.n))]
    for c in spec.components[1:]:
        h, hp = component_graph(c.kind, c.size)
        off = g.n
        g_next = compose(g, part, h)
        part = SplitPartition(
            part.clique | {v + off for v in hp.clique},
            part.stable | {v + off for v in hp.stable},
        )
        ranges.append(
            ComponentRange(c.kind, range(off, off + c.n_clique), range(off + c.n_clique, g_next.n))
        )
        g = g_next
    return g, ranges


# -- induced subgraphs ------------------------------------------------------


def induced_subgraph(g: Graph, subset: Iterable[int]) -> Graph:
    """Subgraph induced by ``subset``, relabeled by the sorted order of ``subset``."""
    vs = sorted(set(subset))
    if vs and not (0 <= vs[0] and vs[-1] < g.n):
        raise InvalidGraph("subset contains vertices outside the graph")
    pos = {v: i for i, v in enumerate(vs)}
    return Graph(len(vs), [(pos[u], pos[v]) for u, v in g.edges if u in pos and v in pos])


def contains_long_induced_cycle(g: Graph, minlen: int = 5) -> list[int] | None:
    """Some induced (chordless) cycle of length >= ``minlen``, or ``None``.

    Backtracking over induced paths whose smallest vertex is the start; exhaustive.
    """
    minlen = max(minlen, 3)

    def extend(path: list[int], on_path: set[int]) -> list[int] | None:
        start, last = path[0], path[-1]
        for v in sorted(g.neighbors(last)):
            if v <= start or v in on_path:
                continue
            inner = path[1:-1]
            if any(g.has_edge(v, w) for w in inner):
                continue
            if len(path) >= 2 and g.has_edge(v, start):
                if len(path) + 1 >= minlen:
                    return path + [v]
                continue
            on_path.add(v)
            path.append(v)
            found = extend(path, on_path)
            if found:
                return found
            path.pop()
            on_path.discard(v)
        return None

    for s in range(g.n):
        found = extend([s], {s})
        if found:
            return found
    return None
