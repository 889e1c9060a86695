"""Exact membership decisions for LPG, mLPG and PCG on small graphs.

Every weighted tree can be refined into a binary one with zero-weight edges
without changing leaf distances, so it suffices to search the (2n-5)!! unrooted
binary topologies on the labeled leaves.  Per topology, membership is the
nonemptiness of an open polyhedron in the edge weights; strict inequalities get
a common slack ``s`` that is maximized, and the topology admits a witness iff
the optimum is positive.  Scale invariance fixes one bound to 1.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator

from . import lp
from .errors import CapExceeded, CaseSplitCapExceeded, LabelMismatch, PCGError
from .graph import ANTIMATCHING, MATCHING, Graph, MatrogenicSpec, build_matrogenic
from .rational import INF
from .tree import LPG, MLPG, PCG, CLASSES, WeightedTree, Witness, verify_witness

MEMBER = "MEMBER"
NON_MEMBER = "NON_MEMBER"
EXPLORATORY = "EXPLORATORY"

DEFAULT_MAX_N = {LPG: 8, MLPG: 8, PCG: 6}
DEFAULT_MAX_NONEDGES = 12


class OracleError(PCGError):
    """Internal inconsistency: a solver answer failed re-verification."""


def double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def topology_count(n: int) -> int:
    return double_factorial(2 * n - 5) if n >= 3 else 1


@dataclass(frozen=True)
class Topology:
    """Unrooted binary tree; leaves are nodes ``0..n-1``, internal nodes ``n..2n-3``."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def pair_paths(self) -> dict[tuple[int, int], tuple[int, ...]]:
        """Edge indices on the path between each pair of leaves ``u < v``."""
        adj: dict[int, list[tuple[int, int]]] = {}
        for idx, (a, b) in enumerate(self.edges):
            adj.setdefault(a, []).append((b, idx))
            adj.setdefault(b, []).append((a, idx))
        paths = {}
        for u in range(self.n):
            via: dict[int, tuple[int, ...]] = {u: ()}
            stack = [u]
            while stack:
                a = stack.pop()
                for b, idx in adj[a]:
                    if b not in via:
                        via[b] = via[a] + (idx,)
                        stack.append(b)
            for v in range(u + 1, self.n):
                paths[(u, v)] = tuple(sorted(via[v]))
        return paths

    def splits(self) -> frozenset[frozenset[int]]:
        """Leaf bipartitions induced by internal edges, each side normalized to
        the one without leaf 0; identifies the topology up to isomorphism."""
        adj: dict[int, list[int]] = {}
        for a, b in self.edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        out = set()
        for a, b in self.edges:
            if a < self.n or b < self.n:
                continue
            side = set()
            seen = {a, b}
            stack = [b]
            while stack:
                x = stack.pop()
                if x < self.n:
                    side.add(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            if 0 in side:
                side = set(range(self.n)) - side
            out.add(frozenset(side))
        return frozenset(out)

    def to_tree(self, weights) -> WeightedTree:
        """Weighted tree with the internal nodes numbered first."""
        n = self.n

        def relabel(x: int) -> int:
            return x - n if x >= n else n - 2 + x

        return WeightedTree(
            2 * n - 2,
            [(relabel(a), relabel(b), w) for (a, b), w in zip(self.edges, weights)],
            {n - 2 + v: v for v in range(n)},
        )


def enumerate_topologies(n: int, cap: int = 8) -> Iterator[Topology]:
    """All (2n-5)!! binary topologies on leaves ``0..n-1`` by leaf insertion."""
    if n < 3:
        raise ValueError("topologies need at least 3 leaves")
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds the topology cap {cap}")

    def grow(edges: list[tuple[int, int]], k: int) -> Iterator[Topology]:
        if k == n:
            yield Topology(n, tuple(edges))
            return
        mid = n + k - 2
        for i, (a, b) in enumerate(edges):
            nxt = edges[:i] + [(a, mid)] + edges[i + 1 :] + [(mid, b), (mid, k)]
            yield from grow(nxt, k + 1)

    yield from grow([(0, n), (1, n), (2, n)], 3)


# -- per-topology feasibility -------------------------------------------------


def _check_labels(g: Graph, topo: Topology) -> None:
    if g.n != topo.n:
        raise LabelMismatch(f"graph has {g.n} vertices, topology has {topo.n} leaves")


def _row(path: tuple[int, ...], extra: dict[int, int] | None = None) -> dict[int, int]:
    row = {e: 1 for e in path}
    if extra:
        row.update(extra)
    return row


def _solve_checked(n_vars: int, cons: list[lp.Constraint], s: int) -> lp.LPResult:
    res = lp.solve(n_vars, cons, {s: 1})
    if res.status == lp.OPTIMAL and res.value > 0:
        if not all(c.holds(res.x) for c in cons):
            raise OracleError("LP solution violates its own constraints")
    return res


def _one_sided(g: Graph, topo: Topology, lower: bool):
    """Shared LP for LPG (``lower=False``: d_max = 1) and mLPG (``lower=True``: d_min = 1)."""
    _check_labels(g, topo)
    paths = topo.pair_paths()
    n_w = len(topo.edges)
    s = n_w
    cons = [lp.Constraint({s: 1}, "<=", 1)]
    for (u, v), path in paths.items():
        if g.has_edge(u, v) != lower:
            # LPG edge / mLPG non-edge: close pair
            extra = {s: 1} if lower else None
            cons.append(lp.Constraint(_row(path, extra), "<=", 1))
        else:
            extra = None if lower else {s: -1}
            cons.append(lp.Constraint(_row(path, extra), ">=", 1))
    res = _solve_checked(n_w + 1, cons, s)
    if res.status == lp.OPTIMAL and res.value > 0:
        return list(res.x[:n_w]), res
    return None, res


def lpg_feasible(g: Graph, topo: Topology) -> list[Fraction] | None:
    """Edge weights realizing ``g`` on ``topo`` with d_min = 0, d_max = 1, or None."""
    return _one_sided(g, topo, lower=False)[0]


def mlpg_feasible(g: Graph, topo: Topology) -> list[Fraction] | None:
    """Edge weights realizing ``g`` on ``topo`` with d_min = 1, d_max = inf, or None."""
    return _one_sided(g, topo, lower=True)[0]


@dataclass
class _PCGSearch:
    lp_count: int = 0
    case_splits: int = 0


def _pcg_search(g: Graph, topo: Topology, max_nonedges: int):
    """Branch over LOW/HIGH placements of the non-edges.

    Each node's LP holds the edge constraints and only the placed non-edges, so
    an LP without positive slack rules out every completion below it.  Branching
    happens on the first non-edge the current optimum misplaces; an optimum that
    misplaces none is already a witness.
    """
    _check_labels(g, topo)
    non_edges = g.non_edges()
    if len(non_edges) > max_nonedges:
        raise CaseSplitCapExceeded(
            f"{len(non_edges)} non-edges exceed the case-split cap {max_nonedges}"
        )
    paths = topo.pair_paths()
    n_w = len(topo.edges)
    s, y = n_w, n_w + 1
    base = [lp.Constraint({s: 1}, "<=", 1)]
    for (u, v), path in paths.items():
        if g.has_edge(u, v):
            base.append(lp.Constraint(_row(path), ">=", 1))
            base.append(lp.Constraint(_row(path, {y: -1}), "<=", 1))
    stats = _PCGSearch()

    def visit(placed: dict[tuple[int, int], bool]):
        cons = list(base)
        for pair, high in placed.items():
            if high:
                cons.append(lp.Constraint(_row(paths[pair], {y: -1, s: -1}), ">=", 1))
            else:
                cons.append(lp.Constraint(_row(paths[pair], {s: 1}), "<=", 1))
        stats.lp_count += 1
        res = _solve_checked(n_w + 2, cons, s)
        if res.status != lp.OPTIMAL or res.value <= 0:
            stats.case_splits += 2 ** (len(non_edges) - len(placed))
            return None
        w = res.x[:n_w]
        d_max = 1 + res.x[y]
        for pair in non_edges:
            if pair in placed:
                continue
            dist = sum((w[e] for e in paths[pair]), Fraction(0))
            if 1 <= dist <= d_max:
                for high in (False, True):
                    found = visit({**placed, pair: high})
                    if found:
                        return found
                return None
        stats.case_splits += 2 ** (len(non_edges) - len(placed))
        return list(w), d_max

    return visit({}), stats


def pcg_feasible(
    g: Graph, topo: Topology, max_nonedges: int = DEFAULT_MAX_NONEDGES
) -> tuple[list[Fraction], Fraction] | None:
    """``(weights, d_max)`` realizing ``g`` on ``topo`` with d_min = 1, or None."""
    return _pcg_search(g, topo, max_nonedges)[0]


# -- decision -------------------------------------------------------------------


@dataclass
class Verdict:
    cls: str
    outcome: str
    witness: Witness | None
    topologies_examined: int
    lp_count: int
    elapsed_ms: float
    n: int
    exhaustion: dict = field(default_factory=dict)
    label: str | None = None
    member_topology: int | None = None

    def same_decision(self, other: Verdict) -> bool:
        """Equal up to timing: outcome, witness content and counts."""
        from .formats import witness_to_json

        wa = witness_to_json(self.witness) if self.witness else None
        wb = witness_to_json(other.witness) if other.witness else None
        return (
            self.cls == other.cls
            and self.outcome == other.outcome
            and wa == wb
            and self.topologies_examined == other.topologies_examined
            and self.lp_count == other.lp_count
        )


def _witness_for(cls: str, topo: Topology, found) -> Witness:
    if cls == LPG:
        return Witness(topo.to_tree(found), 0, 1, LPG)
    if cls == MLPG:
        return Witness(topo.to_tree(found), 1, INF, MLPG)
    weights, d_max = found
    return Witness(topo.to_tree(weights), 1, d_max, PCG)


def _scan(args):
    """Scan topologies in order until the first member.

    Returns ``(member_index | None, found, examined, lp_count, tallies)``.
    """
    g, cls, start, topos, max_nonedges = args
    lp_count = 0
    tallies = {"infeasible": 0, "zero_slack": 0, "case_splits": 0}
    for offset, topo in enumerate(topos):
        if cls == PCG:
            found, stats = _pcg_search(g, topo, max_nonedges)
            lp_count += stats.lp_count
            tallies["case_splits"] += stats.case_splits
        else:
            found, res = _one_sided(g, topo, lower=(cls == MLPG))
            lp_count += 1
            if found is None:
                tallies["infeasible" if res.status == lp.INFEASIBLE else "zero_slack"] += 1
        if found is not None:
            return start + offset, found, offset + 1, lp_count, tallies
    return None, None, len(topos), lp_count, tallies


def _tiny_witness(g: Graph, cls: str) -> Witness:
    """Graphs on one or two vertices, which every class contains."""
    if g.n == 1:
        tree = WeightedTree(1, [], {0: 0})
    else:
        close = g.has_edge(0, 1) != (cls == MLPG)
        tree = WeightedTree(2, [(0, 1, Fraction(1) if close else Fraction(2))], {0: 0, 1: 1})
    if cls == LPG:
        return Witness(tree, 0, Fraction(3, 2), LPG)
    if cls == MLPG:
        return Witness(tree, Fraction(3, 2), INF, MLPG)
    if g.n == 2 and not g.has_edge(0, 1):
        return Witness(tree, 0, 1, PCG)
    return Witness(tree, 0, 2, PCG)


def decide(
    g: Graph,
    cls: str,
    jobs: int = 1,
    max_n: int | None = None,
    max_nonedges: int = DEFAULT_MAX_NONEDGES,
) -> Verdict:
    """Exact membership of ``g`` in ``cls`` by exhausting binary topologies.

    Topologies are numbered by enumeration order and the member with the lowest
    number wins, so results do not depend on ``jobs``.
    """
    if cls not in CLASSES:
        raise ValueError(f"unknown class {cls!r}")
    if g.n == 0:
        raise ValueError("the empty graph has no tree representation")
    cap = DEFAULT_MAX_N[cls] if max_n is None else max_n
    if g.n > cap:
        raise CapExceeded(f"n = {g.n} exceeds the cap {cap} for {cls}")
    if cls == PCG and len(g.non_edges()) > max_nonedges:
        raise CaseSplitCapExceeded(
            f"{len(g.non_edges())} non-edges exceed the case-split cap {max_nonedges}"
        )
    t0 = time.perf_counter()
    if g.n < 3:
        w = _tiny_witness(g, cls)
        return Verdict(cls, MEMBER, w, 1, 0, (time.perf_counter() - t0) * 1e3, g.n, member_topology=0)

    topos = list(enumerate_topologies(g.n, cap=cap))
    if jobs <= 1:
        results = [_scan((g, cls, 0, topos, max_nonedges))]
    else:
        results = _scan_parallel(g, cls, topos, max_nonedges, jobs)

    examined = lp_count = 0
    tallies = {"infeasible": 0, "zero_slack": 0, "case_splits": 0}
    member = None
    for idx, found, n_seen, n_lp, tally in results:
        examined += n_seen
        lp_count += n_lp
        for k, v in tally.items():
            tallies[k] += v
        if idx is not None:
            member = (idx, found)
            break
    elapsed = (time.perf_counter() - t0) * 1e3
    if cls != PCG:
        del tallies["case_splits"]
    else:
        del tallies["infeasible"], tallies["zero_slack"]

    if member is None:
        if examined != topology_count(g.n):
            raise OracleError(f"examined {examined} of {topology_count(g.n)} topologies")
        return Verdict(cls, NON_MEMBER, None, examined, lp_count, elapsed, g.n, tallies)
    idx, found = member
    witness = _witness_for(cls, topos[idx], found)
    if not verify_witness(g, witness):
        raise OracleError("oracle witness failed verification")
    return Verdict(cls, MEMBER, witness, examined, lp_count, elapsed, g.n, tallies, member_topology=idx)


def _scan_parallel(g, cls, topos, max_nonedges, jobs):
    """Contiguous chunks scanned by a process pool, consumed in chunk order.

    Results after the first chunk holding a member are discarded, so the counts
    equal those of a sequential scan.
    """
    size = max(1, -(-len(topos) // (jobs * 4)))
    chunks = [(g, cls, i, topos[i : i + size], max_nonedges) for i in range(0, len(topos), size)]
    out = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_scan, c) for c in chunks]
        for fut in futures:
            res = fut.result()
            out.append(res)
            if res[0] is not None:
                for f in futures:
                    f.cancel()
                break
    return out


def is_open_order(spec: MatrogenicSpec) -> bool:
    """True when some antimatching component precedes some matching component."""
    kinds = spec.kinds()
    anti = [i for i, k in enumerate(kinds) if k == ANTIMATCHING]
    match = [i for i, k in enumerate(kinds) if k == MATCHING]
    return bool(anti and match and anti[0] < match[-1])


def probe_open_problem(spec: MatrogenicSpec, jobs: int = 1, **caps) -> Verdict:
    """PCG decision for the composed graph of ``spec``.

    Specs with an antimatching before a matching get the EXPLORATORY label: the
    verdict covers this one instance only.  Ordered specs are accepted as a
    sanity check against the constructive witness.
    """
    g, _ = build_matrogenic(spec)
    verdict = decide(g, PCG, jobs=jobs, **caps)
    if is_open_order(spec):
        verdict.label = EXPLORATORY
    return verdict
