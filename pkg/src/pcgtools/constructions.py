"""Explicit weighted-tree witnesses for threshold graphs, split matchings and
antimatchings, their sequences, and ordered split matrogenic graphs.

Every builder checks its closed-form leaf distances against the actual
distance matrix and round-trips the witness through evaluation before
returning; a failure raises ``ConstructionError``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import (
    ConstructionError,
    DisconnectedGraph,
    InvalidPartition,
    NotSplitAntimatching,
    NotSplitMatching,
    NotThreshold,
    OrderViolation,
    UnsupportedCombination,
    UnsupportedComponent,
)
from .graph import (
    ANTIMATCHING,
    MATCHING,
    Graph,
    MatrogenicSpec,
    SplitPartition,
    build_matrogenic,
    cross_pairs,
    is_threshold,
    split_partitions,
)
from .rational import INF
from .tree import LPG, MLPG, PCG, TreeBuilder, Witness, verify_witness

THRESHOLD_LPG = "threshold-lpg"
THRESHOLD_MLPG = "threshold-mlpg"
SPLIT_MATCHING_LPG = "split-matching-lpg"
SPLIT_ANTIMATCHING_MLPG = "split-antimatching-mlpg"
MATCHING_SEQUENCE_LPG = "matching-sequence-lpg"
ANTIMATCHING_SEQUENCE_MLPG = "antimatching-sequence-mlpg"
MATROGENIC_PCG = "ordered-matrogenic-pcg"


@dataclass(frozen=True)
class ConstructionTrace:
    """A witness plus the audit data of how it was built.

    ``depths`` maps each vertex to the weight of the path from its leaf to the
    construction root.  ``reconstructed`` marks weight choices that are not
    given explicitly in the source construction and rest on the round trip.
    """

    witness: Witness
    depths: dict[int, Fraction]
    theorem: str
    reconstructed: bool = False


def _depths(builder: TreeBuilder, root: int) -> dict[int, Fraction]:
    adj: dict[int, list] = {v: [] for v in range(builder.n_nodes)}
    for a, b, w in builder.edges:
        adj[a].append((b, w))
        adj[b].append((a, w))
    dist = {root: Fraction(0)}
    stack = [root]
    while stack:
        a = stack.pop()
        for b, w in adj[a]:
            if b not in dist:
                dist[b] = dist[a] + w
                stack.append(b)
    return {vertex: dist[node] for node, vertex in builder.leaf_map.items()}


def _finish(g: Graph, builder: TreeBuilder, root: int, d_min, d_max, cls: str,
            theorem: str, expected=None, reconstructed: bool = False) -> ConstructionTrace:
    tree = builder.build(root=root)
    for a, b, w in tree.edges:
        if w <= 0:
            raise ConstructionError(f"{theorem}: non-positive weight {w}")
    if expected is not None:
        dm = tree.distance_matrix
        for u, v in combinations(range(g.n), 2):
            want = expected(u, v)
            if dm[u][v] != want:
                raise ConstructionError(
                    f"{theorem}: d({u}, {v}) = {dm[u][v]}, closed form gives {want}"
                )
    witness = Witness(tree, d_min, d_max, cls)
    if not verify_witness(g, witness):
        raise ConstructionError(f"{theorem}: witness does not reproduce the input graph")
    return ConstructionTrace(witness, _depths(builder, root), theorem, reconstructed)


# -- threshold graphs -----------------------------------------------------------


def _threshold(g: Graph, lpg: bool) -> ConstructionTrace:
    try:
        part = is_threshold(g)
    except DisconnectedGraph:
        part = None
    if part is None:
        raise NotThreshold("input graph is not a connected threshold graph")
    r = part.r
    box = part.box_index()
    weight = {v: (box[v] if lpg else r + 1 - box[v]) for v in range(g.n)}
    b = TreeBuilder()
    center = b.add_node()
    for v in range(g.n):
        b.add_leaf(center, v, weight[v])
    if lpg:
        return _finish(g, b, center, 0, r + 1, LPG, THRESHOLD_LPG,
                       lambda u, v: box[u] + box[v])
    return _finish(g, b, center, r + 1, INF, MLPG, THRESHOLD_MLPG,
                   lambda u, v: 2 * (r + 1) - (box[u] + box[v]))


def threshold_lpg_witness(g: Graph) -> Witness:
    """Star whose leaf for a vertex in box ``i`` hangs at weight ``i``; d_max = r + 1."""
    return _threshold(g, lpg=True).witness


def threshold_mlpg_witness(g: Graph) -> Witness:
    """Star with leaf weights ``r + 1 - i``; d_min = r + 1."""
    return _threshold(g, lpg=False).witness


# -- split matchings and antimatchings ----------------------------------------------


def _find_pairs(g: Graph, kind: str, partition: SplitPartition | None):
    candidates = [partition] if partition is not None else split_partitions(g)
    for p in candidates:
        if len(p.clique) != len(p.stable) or not p.clique:
            continue
        try:
            p.check(g)
            return cross_pairs(g, p, kind)
        except InvalidPartition:
            continue
    return None


def _caterpillar(g: Graph, pairs, clique_w: int, stable_w: int) -> tuple[TreeBuilder, int]:
    b = TreeBuilder()
    spine = [b.add_node() for _ in pairs]
    for x, y in zip(spine, spine[1:]):
        b.add_edge(x, y, 1)
    for node, (k, s) in zip(spine, pairs):
        b.add_leaf(node, k, clique_w)
        b.add_leaf(node, s, stable_w)
    return b, spine[0]


def _caterpillar_expected(pairs, clique_w: int, stable_w: int):
    where = {}
    for i, (k, s) in enumerate(pairs):
        where[k] = (i, clique_w)
        where[s] = (i, stable_w)

    def expected(u, v):
        (i, wu), (j, wv) = where[u], where[v]
        return wu + wv + abs(i - j)

    return expected


def _split_matching(g: Graph, partition=None) -> ConstructionTrace:
    pairs = _find_pairs(g, MATCHING, partition)
    if pairs is None:
        raise NotSplitMatching("input graph is not a split matching")
    n = len(pairs)
    b, root = _caterpillar(g, pairs, 1, n)
    return _finish(g, b, root, 0, n + 1, LPG, SPLIT_MATCHING_LPG,
                   _caterpillar_expected(pairs, 1, n))


def _split_antimatching(g: Graph, partition=None) -> ConstructionTrace:
    pairs = _find_pairs(g, ANTIMATCHING, partition)
    if pairs is None:
        raise NotSplitAntimatching("input graph is not a split antimatching")
    n = len(pairs)
    b, root = _caterpillar(g, pairs, n, 1)
    return _finish(g, b, root, n + 2, INF, MLPG, SPLIT_ANTIMATCHING_MLPG,
                   _caterpillar_expected(pairs, n, 1), reconstructed=True)


def split_matching_lpg_witness(g: Graph, partition: SplitPartition | None = None) -> Witness:
    """Caterpillar with a unit spine; spine node ``i`` carries ``k_i`` at weight 1
    and its matched ``s_i`` at weight ``n``.  d_max = n + 1."""
    return _split_matching(g, partition).witness


def split_antimatching_mlpg_witness(g: Graph, partition: SplitPartition | None = None) -> Witness:
    """Caterpillar with a unit spine; spine node ``i`` carries ``k_i`` at weight ``n``
    and its non-neighbor ``s_i`` at weight 1.  d_min = n + 2."""
    return _split_antimatching(g, partition).witness


# -- sequences and ordered matrogenic graphs --------------------------------------------


def _roles(spec: MatrogenicSpec):
    """Vertex -> (1-based component index, 'a' for clique / 'b' for stable, pair index)."""
    g, ranges = build_matrogenic(spec)
    roles = {}
    for i, cr in enumerate(ranges, start=1):
        for s, v in enumerate(cr.clique):
            roles[v] = (i, "a", s)
        for s, v in enumerate(cr.stable):
            roles[v] = (i, "b", s)
    return g, ranges, roles


def _matching_subtree(b: TreeBuilder, root: int, ranges, indices, bound, bump=0) -> None:
    for i in indices:
        cr = ranges[i - 1]
        for s in range(max(len(cr.clique), len(cr.stable))):
            u = b.add_node()
            b.add_edge(root, u, i)
            if cr.clique:
                b.add_leaf(u, cr.clique[s], 1 + bump)
            if cr.stable:
                b.add_leaf(u, cr.stable[s], bound - 2 * i + bump)


def _antimatching_subtree(b: TreeBuilder, root: int, ranges, indices, bound) -> None:
    for i in indices:
        cr = ranges[i - 1]
        for s in range(max(len(cr.clique), len(cr.stable))):
            u = b.add_node()
            b.add_edge(root, u, i)
            if cr.stable:
                b.add_leaf(u, cr.stable[s], 1)
            if cr.clique:
                b.add_leaf(u, cr.clique[s], bound - 2 * i - 1)


def _matching_formula(bound):
    def d(x, y):
        (i, sx, px), (j, sy, py) = sorted([x, y])
        if i == j:
            if sx == sy:
                return 2 * i + 2 if sx == "a" else 2 * bound - 2 * i
            return bound - 2 * i + 1 if px == py else bound + 1
        if sx == "a" and sy == "a":
            return i + j + 2
        if sx == "a":
            return bound + (i - j + 1)
        if sy == "a":
            return bound + (j - i + 1)
        return 2 * bound - i - j

    return d


def _antimatching_formula(bound):
    def d(x, y):
        (i, sx, px), (j, sy, py) = sorted([x, y])
        if i == j:
            if sx == sy:
                return 2 * bound - 2 * i - 2 if sx == "a" else 2 * i + 2
            return bound - 2 * i if px == py else bound
        if sx == "a" and sy == "a":
            return 2 * bound - i - j - 2
        if sx == "a":
            return bound + (j - i)
        if sy == "a":
            return bound + (i - j)
        return i + j + 2

    return d


def _check_kinds(spec: MatrogenicSpec, forbidden: str, what: str) -> None:
    for i, c in enumerate(spec.components, start=1):
        if c.kind == forbidden:
            raise UnsupportedComponent(f"component {i} is a {forbidden}; {what} allows only "
                                       f"{'antimatching' if forbidden == MATCHING else 'matching'}, "
                                       "clique and stable components")


def _matching_sequence(spec: MatrogenicSpec) -> ConstructionTrace:
    _check_kinds(spec, ANTIMATCHING, "a split matching sequence")
    g, ranges, roles = _roles(spec)
    d_max = 2 * (spec.t + 1)
    b = TreeBuilder()
    root = b.add_node()
    _matching_subtree(b, root, ranges, range(1, spec.t + 1), d_max)
    f = _matching_formula(d_max)
    return _finish(g, b, root, 0, d_max, LPG, MATCHING_SEQUENCE_LPG,
                   lambda u, v: f(roles[u], roles[v]))


def _antimatching_sequence(spec: MatrogenicSpec) -> ConstructionTrace:
    _check_kinds(spec, MATCHING, "a split antimatching sequence")
    g, ranges, roles = _roles(spec)
    d_min = 2 * (spec.t + 1) + 1
    b = TreeBuilder()
    root = b.add_node()
    _antimatching_subtree(b, root, ranges, range(1, spec.t + 1), d_min)
    f = _antimatching_formula(d_min)
    return _finish(g, b, root, d_min, INF, MLPG, ANTIMATCHING_SEQUENCE_MLPG,
                   lambda u, v: f(roles[u], roles[v]))


def matching_sequence_witness(spec: MatrogenicSpec) -> Witness:
    """LPG witness for a composition of matching, clique and stable components.

    One hub per (component ``i``, pair ``s``) hangs from a common root at weight
    ``i``; the clique vertex sits at weight 1 below it and the stable vertex at
    ``d_max - 2i``, with ``d_max = 2(t + 1)``.
    """
    return _matching_sequence(spec).witness


def antimatching_sequence_witness(spec: MatrogenicSpec) -> Witness:
    """mLPG witness for a composition of antimatching, clique and stable
    components: hubs at weight ``i``, stable vertex at 1, clique vertex at
    ``d_min - 2i - 1``, with ``d_min = 2(t + 1) + 1``."""
    return _antimatching_sequence(spec).witness


def first_antimatching(spec: MatrogenicSpec) -> int:
    """1-based index of the first antimatching component, ``t + 1`` if none."""
    kinds = spec.kinds()
    return kinds.index(ANTIMATCHING) + 1 if ANTIMATCHING in kinds else spec.t + 1


def _matrogenic(spec: MatrogenicSpec) -> ConstructionTrace:
    q = first_antimatching(spec)
    for i, c in enumerate(spec.components[q:], start=q + 1):
        if c.kind == MATCHING:
            raise OrderViolation(
                f"matching component {i} follows antimatching component {q}; "
                "only matchings-before-antimatchings orders are constructible"
            )
    g, ranges, roles = _roles(spec)
    m = 2 * (spec.t + 1) + 1
    half = Fraction(m, 2)
    b = TreeBuilder()
    root1 = b.add_node()
    root2 = b.add_node()
    b.add_edge(root1, root2, half)
    _matching_subtree(b, root1, ranges, range(1, q), m, bump=half)
    _antimatching_subtree(b, root2, ranges, range(q, spec.t + 1), m)
    in_first = {v: roles[v][0] < q for v in roles}
    fm = _matching_formula(m)
    fa = _antimatching_formula(m)

    def expected(u, v):
        x, y = roles[u], roles[v]
        if in_first[u] and in_first[v]:
            return fm(x, y) + m
        if not in_first[u] and not in_first[v]:
            return fa(x, y)
        if not in_first[u]:
            x, y = y, x
        (i, sx, _), (j, sy, _) = x, y
        if sx == "a":
            return 2 * m + i - j if sy == "a" else m + i + j + 2
        return 3 * m - i - j - 1 if sy == "a" else 2 * m + j - i + 1

    return _finish(g, b, root1, m, 2 * m, PCG, MATROGENIC_PCG, expected)


def matrogenic_witness(spec: MatrogenicSpec) -> Witness:
    """PCG witness for a split matrogenic graph whose matching components all
    precede its antimatching components.

    With ``m = 2(t + 1) + 1``: the matching prefix gets the matching-sequence
    tree with bound ``m`` and every leaf edge lengthened by ``m/2``; the suffix
    gets the antimatching-sequence tree with bound ``m`` using global component
    indices; the two roots are joined at weight ``m/2``.  d_min = m, d_max = 2m.
    """
    return _matrogenic(spec).witness


# -- dispatch -------------------------------------------------------------------

GRAPH_FAMILIES = ("threshold", "matching", "antimatching")
SPEC_FAMILIES = ("matching-seq", "antimatching-seq", "matrogenic")
FAMILIES = GRAPH_FAMILIES + SPEC_FAMILIES

_BUILDERS = {
    ("threshold", LPG): lambda g: _threshold(g, lpg=True),
    ("threshold", MLPG): lambda g: _threshold(g, lpg=False),
    ("matching", LPG): _split_matching,
    ("antimatching", MLPG): _split_antimatching,
    ("matching-seq", LPG): _matching_sequence,
    ("antimatching-seq", MLPG): _antimatching_sequence,
    ("matrogenic", PCG): _matrogenic,
}

_NEGATIVE = {
    ("matching", MLPG): "split matching graphs with |K| >= 3 are not mLPG (G ∉ mLPG)",
    ("antimatching", LPG): "split antimatching graphs with |K| >= 3 are not LPG (G ∉ LPG)",
    ("matching-seq", MLPG): "a split matching component with |K| >= 3 is an induced "
                            "subgraph that is not mLPG (G ∉ mLPG)",
    ("antimatching-seq", LPG): "a split antimatching component with |K| >= 3 is an induced "
                               "subgraph that is not LPG (G ∉ LPG)",
}

_CLASS_NAMES = {"lpg": LPG, "mlpg": MLPG, "pcg": PCG}


def canonical_class(name: str) -> str:
    try:
        return _CLASS_NAMES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown class {name!r}; expected lpg, mlpg or pcg") from None


def construct(family: str, cls: str, source) -> ConstructionTrace:
    """Build the witness for ``family`` in class ``cls``.

    ``source`` is a Graph for graph families and a MatrogenicSpec for the
    sequence families.  A PCG request on a family with an LPG (or mLPG)
    construction returns that witness retagged as PCG.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    cls = canonical_class(cls) if cls.lower() in _CLASS_NAMES else cls
    builder = _BUILDERS.get((family, cls))
    if builder is not None:
        return builder(source)
    if cls == PCG:
        for sub in (LPG, MLPG):
            if (family, sub) in _BUILDERS:
                trace = _BUILDERS[(family, sub)](source)
                w = trace.witness
                return ConstructionTrace(
                    Witness(w.tree, w.d_min, w.d_max, PCG),
                    trace.depths, trace.theorem, trace.reconstructed,
                )
    reason = _NEGATIVE.get((family, cls), f"no {cls} construction for family {family}")
    raise UnsupportedCombination(reason)


__all__ = [
    "ConstructionTrace",
    "threshold_lpg_witness",
    "threshold_mlpg_witness",
    "split_matching_lpg_witness",
    "split_antimatching_mlpg_witness",
    "matching_sequence_witness",
    "antimatching_sequence_witness",
    "matrogenic_witness",
    "construct",
]
