"""Edge-weighted trees, leaf distances and pairwise-compatibility evaluation."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations
from math import lcm
from typing import Iterable

from . import _kernels
from .errors import InvalidBounds, InvalidTree, PreconditionViolated, UnmappedVertex
from .graph import Graph
from .rational import INF, check_bounds, to_fraction

LPG = "LPG"
MLPG = "mLPG"
PCG = "PCG"
CLASSES = (LPG, MLPG, PCG)


class WeightedTree:
    """Unrooted tree on nodes ``0..n_nodes-1`` with nonnegative rational weights.

    ``leaf_map`` sends every leaf node to a graph vertex; the vertices must be
    exactly ``0..n_leaves-1``.  Node 0 is used as the root when a rooted view is
    needed (Newick output, construction audit), which never affects distances.
    """

    def __init__(self, n_nodes: int, edges: Iterable, leaf_map: dict[int, int]):
        self.n_nodes = n_nodes
        self.edges = tuple((int(a), int(b), to_fraction(w)) for a, b, w in edges)
        self.leaf_map = dict(leaf_map)
        self._validate()

    def _validate(self) -> None:
        n = self.n_nodes
        if n < 1:
            raise InvalidTree("a tree needs at least one node")
        if len(self.edges) != n - 1:
            raise InvalidTree(f"{n} nodes need {n - 1} edges, got {len(self.edges)}")
        adj: list[list[tuple[int, Fraction]]] = [[] for _ in range(n)]
        for a, b, w in self.edges:
            if not (0 <= a < n and 0 <= b < n) or a == b:
                raise InvalidTree(f"bad edge ({a}, {b})")
            if w < 0:
                raise InvalidTree(f"negative weight {w} on edge ({a}, {b})")
            adj[a].append((b, w))
            adj[b].append((a, w))
        seen = {0}
        stack = [0]
        while stack:
            for b, _ in adj[stack.pop()]:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        if len(seen) != n:
            raise InvalidTree("tree is not connected")
        leaves = {v for v in range(n) if len(adj[v]) <= 1}
        if set(self.leaf_map) != leaves:
            raise InvalidTree(
                f"leaf_map keys {sorted(self.leaf_map)} differ from the leaves {sorted(leaves)}"
            )
        if sorted(self.leaf_map.values()) != list(range(len(leaves))):
            raise InvalidTree("leaf_map values must be the vertices 0..n_leaves-1")
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self.vertex_node = {v: node for node, v in self.leaf_map.items()}

    def __repr__(self):
        return f"WeightedTree(n_nodes={self.n_nodes}, n_leaves={self.n_leaves})"

    def __eq__(self, other):
        if not isinstance(other, WeightedTree):
            return NotImplemented
        return (
            self.n_nodes == other.n_nodes
            and sorted(self.edges) == sorted(other.edges)
            and self.leaf_map == other.leaf_map
        )

    @property
    def n_leaves(self) -> int:
        return len(self.leaf_map)

    def neighbors(self, node: int) -> tuple[tuple[int, Fraction], ...]:
        return self._adj[node]

    def degree(self, node: int) -> int:
        return len(self._adj[node])

    def node_of(self, vertex: int) -> int:
        try:
            return self.vertex_node[vertex]
        except KeyError:
            raise UnmappedVertex(f"vertex {vertex} is not a leaf of this tree") from None

    def distances_from(self, node: int) -> list[Fraction]:
        dist: list[Fraction | None] = [None] * self.n_nodes
        dist[node] = Fraction(0)
        stack = [node]
        while stack:
            a = stack.pop()
            for b, w in self._adj[a]:
                if dist[b] is None:
                    dist[b] = dist[a] + w
                    stack.append(b)
        return dist  # type: ignore[return-value]

    def parents(self, root: int = 0) -> tuple[list[int], list[Fraction], list[int]]:
        """Parent array, weight to parent and BFS order for the view rooted at ``root``."""
        parent = [-1] * self.n_nodes
        pw = [Fraction(0)] * self.n_nodes
        order = [root]
        seen = {root}
        for a in order:
            for b, w in self._adj[a]:
                if b not in seen:
                    seen.add(b)
                    parent[b] = a
                    pw[b] = w
                    order.append(b)
        return parent, pw, order

    @cached_property
    def distance_matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        rows = []
        for v in range(self.n_leaves):
            dist = self.distances_from(self.vertex_node[v])
            rows.append(tuple(dist[self.vertex_node[u]] for u in range(self.n_leaves)))
        return tuple(rows)

    def map_weights(self, fn) -> WeightedTree:
        return WeightedTree(self.n_nodes, [(a, b, fn(w)) for a, b, w in self.edges], self.leaf_map)


class TreeBuilder:
    """Incremental construction; ``build`` prunes unmapped leaves and renumbers
    nodes so that the designated root (when it survives) is node 0."""

    def __init__(self):
        self.n_nodes = 0
        self.edges: list[tuple[int, int, Fraction]] = []
        self.leaf_map: dict[int, int] = {}

    def add_node(self, vertex: int | None = None) -> int:
        node = self.n_nodes
        self.n_nodes += 1
        if vertex is not None:
            self.leaf_map[node] = vertex
        return node

    def add_edge(self, a: int, b: int, weight) -> None:
        self.edges.append((a, b, to_fraction(weight)))

    def add_leaf(self, parent: int, vertex: int, weight) -> int:
        node = self.add_node(vertex)
        self.add_edge(parent, node, weight)
        return node

    def build(self, root: int = 0) -> WeightedTree:
        alive = set(range(self.n_nodes))
        edges = list(self.edges)
        while True:
            deg = {v: 0 for v in alive}
            for a, b, _ in edges:
                deg[a] += 1
                deg[b] += 1
            dead = {v for v in alive if deg[v] <= 1 and v not in self.leaf_map}
            if not dead or len(alive) == 1:
                break
            alive -= dead
            edges = [e for e in edges if e[0] in alive and e[1] in alive]
        order = sorted(alive)
        if root in alive:
            order.remove(root)
            order.insert(0, root)
        if len(order) > 2 and order[0] in self.leaf_map:
            # keep an internal node at id 0 so Newick output is rooted internally
            deg = {v: 0 for v in alive}
            for a, b, _ in edges:
                deg[a] += 1
                deg[b] += 1
            first_internal = next(v for v in order if deg[v] > 1)
            order.remove(first_internal)
            order.insert(0, first_internal)
        new = {old: i for i, old in enumerate(order)}
        return WeightedTree(
            len(order),
            [(new[a], new[b], w) for a, b, w in edges],
            {new[v]: x for v, x in self.leaf_map.items() if v in alive},
        )


# -- evaluation ---------------------------------------------------------------


def leaf_distance(t: WeightedTree, u: int, v: int) -> Fraction:
    """Exact weight of the path between the leaves of vertices ``u`` and ``v``."""
    a, b = t.node_of(u), t.node_of(v)
    return t.distances_from(a)[b]


def all_pairs_leaf_distances(t: WeightedTree) -> list[list[Fraction]]:
    return [list(row) for row in t.distance_matrix]


def pcg_eval(t: WeightedTree, d_min, d_max) -> Graph:
    """Graph whose edges are the leaf pairs at distance within ``[d_min, d_max]``."""
    lo, hi = check_bounds(d_min, d_max)
    dm = t.distance_matrix
    n = t.n_leaves
    return Graph(n, [(u, v) for u, v in combinations(range(n), 2) if lo <= dm[u][v] <= hi])


def lpg_eval(t: WeightedTree, d_max) -> Graph:
    return pcg_eval(t, 0, d_max)


def mlpg_eval(t: WeightedTree, d_min) -> Graph:
    return pcg_eval(t, d_min, INF)


@dataclass(frozen=True)
class Witness:
    tree: WeightedTree
    d_min: Fraction
    d_max: Fraction | float
    cls: str

    def __post_init__(self):
        lo, hi = check_bounds(self.d_min, self.d_max)
        object.__setattr__(self, "d_min", lo)
        object.__setattr__(self, "d_max", hi)
        if self.cls not in CLASSES:
            raise InvalidBounds(f"unknown class tag {self.cls!r}")
        if self.cls == LPG and lo != 0:
            raise InvalidBounds("an LPG witness must have d_min = 0")
        if self.cls == MLPG and hi != INF:
            raise InvalidBounds("an mLPG witness must have d_max = inf")

    def graph(self) -> Graph:
        return pcg_eval(self.tree, self.d_min, self.d_max)


def verify_witness(g: Graph, w: Witness) -> bool:
    if w.tree.n_leaves != g.n:
        return False
    return w.graph() == g


# -- structural checks ------------------------------------------------------------


def check_three_leaf_lemma(t: WeightedTree, u: int, v: int, w: int, x: int) -> bool:
    """For leaves with ``P_uv`` the (weakly) longest path among u, v, w, test
    ``d(w, x) <= d(u, x) or d(w, x) <= d(v, x)``."""
    if len({u, v, w, x}) != 4:
        raise PreconditionViolated("the four leaves must be distinct")
    for y in (u, v, w, x):
        t.node_of(y)
    d = t.distance_matrix
    if d[u][v] < d[u][w] or d[u][v] < d[v][w]:
        raise PreconditionViolated(f"path {u}-{v} is not the longest among {u}, {v}, {w}")
    return d[w][x] <= d[u][x] or d[w][x] <= d[v][x]


def integer_scaled(t: WeightedTree) -> tuple[list[int], list[int], list[int], list[int], int]:
    """Tree rooted at node 0 with weights multiplied by the lcm of denominators.

    Returns ``(parent, weight_to_parent, bfs_order, leaf_node_by_vertex, scale)``.
    """
    parent, pw, order = t.parents(0)
    scale = lcm(*(w.denominator for w in pw)) if pw else 1
    ipw = [int(w * scale) for w in pw]
    leaves = [t.vertex_node[v] for v in range(t.n_leaves)]
    return parent, ipw, order, leaves, scale


def three_leaf_lemma_violations(t: WeightedTree, limit: int = 10) -> list[tuple[int, int, int, int]]:
    """Quadruples ``(u, v, w, x)`` meeting the precondition where the conclusion fails.

    Uses the integer kernels when distances fit in int64, exact Python otherwise.
    """
    parent, ipw, order, leaves, _ = integer_scaled(t)
    if sum(ipw) < 2**62:
        dm = _kernels.leaf_distance_matrix(parent, ipw, order, leaves)
        return _kernels.lemma_violations(dm, limit)
    out = []
    d = t.distance_matrix
    for u, v, w, x in permutations(range(t.n_leaves), 4):
        if d[u][v] >= d[u][w] and d[u][v] >= d[v][w]:
            if not (d[w][x] <= d[u][x] or d[w][x] <= d[v][x]):
                out.append((u, v, w, x))
                if len(out) >= limit:
                    break
    return out


# -- transformations --------------------------------------------------------------


def scale_tree(t: WeightedTree, c) -> WeightedTree:
    c = to_fraction(c)
    if c <= 0:
        raise ValueError("scale factor must be positive")
    return t.map_weights(lambda w: w * c)


def scale_witness(w: Witness, c) -> Witness:
    """Multiply every weight and both bounds by ``c > 0``; the graph is unchanged."""
    c = to_fraction(c)
    d_max = INF if w.d_max == INF else w.d_max * c
    return Witness(scale_tree(w.tree, c), w.d_min * c, d_max, w.cls)


def integral_witness(w: Witness) -> Witness:
    """Rescale so every weight and finite bound is an integer."""
    vals = [e[2] for e in w.tree.edges] + [w.d_min]
    if w.d_max != INF:
        vals.append(w.d_max)
    return scale_witness(w, lcm(*(v.denominator for v in vals)))


def suppress_degree_two(t: WeightedTree) -> WeightedTree:
    """Merge each internal degree-2 node into one edge carrying the summed weight."""
    adj = {v: dict() for v in range(t.n_nodes)}
    for a, b, w in t.edges:
        adj[a][b] = w
        adj[b][a] = w
    for v in range(t.n_nodes):
        if len(adj[v]) == 2 and v not in t.leaf_map:
            (a, wa), (b, wb) = adj[v].items()
            del adj[a][v], adj[b][v]
            adj[a][b] = wa + wb
            adj[b][a] = wa + wb
            del adj[v]
    builder = TreeBuilder()
    ids = {v: builder.add_node(t.leaf_map.get(v)) for v in sorted(adj)}
    for a in adj:
        for b, w in adj[a].items():
            if a < b:
                builder.add_edge(ids[a], ids[b], w)
    return builder.build()


def refine_to_binary(t: WeightedTree) -> WeightedTree:
    """Split every node of degree > 3 with zero-weight edges; distances are preserved."""
    builder = TreeBuilder()
    for v in range(t.n_nodes):
        builder.add_node(t.leaf_map.get(v))
    parent, pw, order = t.parents(0)
    children: dict[int, list[int]] = {v: [] for v in range(t.n_nodes)}
    for v in order[1:]:
        children[parent[v]].append(v)
    for v in order:
        kids = children[v]
        hub = v
        capacity = 3 if v == 0 else 2
        while len(kids) > capacity:
            for c in kids[: capacity - 1]:
                builder.add_edge(hub, c, pw[c])
            kids = kids[capacity - 1 :]
            nxt = builder.add_node()
            builder.add_edge(hub, nxt, 0)
            hub = nxt
            capacity = 2
        for c in kids:
            builder.add_edge(hub, c, pw[c])
    return builder.build()


def random_weighted_tree(
    n_leaves: int,
    rng: random.Random,
    multifurcating: bool = False,
    max_numerator: int = 10,
    denominators: tuple[int, ...] = (1, 2, 3, 4),
) -> WeightedTree:
    """Random tree with ``n_leaves`` labeled leaves and random rational weights.

    Leaves are inserted onto random edges; with ``multifurcating`` a new leaf may
    also attach directly to an existing internal node.  Zero weights occur.
    """
    if n_leaves < 1:
        raise ValueError("need at least one leaf")

    def weight() -> Fraction:
        return Fraction(rng.randint(0, max_numerator), rng.choice(denominators))

    if n_leaves == 1:
        return WeightedTree(1, [], {0: 0})
    if n_leaves == 2:
        return WeightedTree(2, [(0, 1, weight())], {0: 0, 1: 1})
    labels = list(range(n_leaves))
    rng.shuffle(labels)
    edges = [[0, 1], [0, 2], [0, 3]]
    leaf_map = {1: labels[0], 2: labels[1], 3: labels[2]}
    internal = [0]
    n_nodes = 4
    for k in range(3, n_leaves):
        if multifurcating and rng.random() < 0.3:
            edges.append([rng.choice(internal), n_nodes])
            leaf_map[n_nodes] = labels[k]
            n_nodes += 1
            continue
        e = edges[rng.randrange(len(edges))]
        mid, leaf = n_nodes, n_nodes + 1
        n_nodes += 2
        a, b = e
        e[1] = mid
        edges.append([mid, b])
        edges.append([mid, leaf])
        leaf_map[leaf] = labels[k]
        internal.append(mid)
    return WeightedTree(n_nodes, [(a, b, weight()) for a, b in edges], leaf_map)
