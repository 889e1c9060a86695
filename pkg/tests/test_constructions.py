import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from pcgtools.constructions import (
    MATROGENIC_PCG,
    SPLIT_ANTIMATCHING_MLPG,
    antimatching_sequence_witness,
    construct,
    matching_sequence_witness,
    matrogenic_witness,
    split_antimatching_mlpg_witness,
    split_matching_lpg_witness,
    threshold_lpg_witness,
    threshold_mlpg_witness,
)
from pcgtools.errors import (
    NotSplitAntimatching,
    NotSplitMatching,
    NotThreshold,
    OrderViolation,
    UnsupportedCombination,
    UnsupportedComponent,
)
from pcgtools.graph import (
    ANTIMATCHING,
    CLIQUE,
    MATCHING,
    STABLE,
    Graph,
    MatrogenicSpec,
    build_matrogenic,
    cycle,
    random_threshold,
    split_antimatching,
    split_matching,
)
from pcgtools.rational import INF
from pcgtools.tree import LPG, MLPG, PCG, all_pairs_leaf_distances, leaf_distance, verify_witness


def star_k13():
    return Graph(4, [(0, 1), (0, 2), (0, 3)])


def roles(spec):
    """Vertex -> (component index from 1, side, pair index)."""
    _, ranges = build_matrogenic(spec)
    out = {}
    for i, cr in enumerate(ranges, start=1):
        out.update({v: (i, "a", s) for s, v in enumerate(cr.clique)})
        out.update({v: (i, "b", s) for s, v in enumerate(cr.stable)})
    return out


def weights_of(w):
    return [x for _, _, x in w.tree.edges]


class TestThreshold:
    def test_k2_lpg(self):
        w = threshold_lpg_witness(Graph(2, [(0, 1)]))
        assert weights_of(w) == [1, 1]
        assert (w.d_min, w.d_max, w.cls) == (0, 2, LPG)
        assert leaf_distance(w.tree, 0, 1) == 2

    def test_k13_lpg(self):
        w = threshold_lpg_witness(star_k13())
        assert w.d_max == 3
        d = all_pairs_leaf_distances(w.tree)
        assert all(d[0][x] == 3 for x in (1, 2, 3))
        assert all(d[x][y] == 4 for x, y in combinations((1, 2, 3), 2))

    def test_k2_mlpg(self):
        w = threshold_mlpg_witness(Graph(2, [(0, 1)]))
        assert weights_of(w) == [1, 1]
        assert (w.d_min, w.d_max, w.cls) == (2, INF, MLPG)

    def test_k13_mlpg(self):
        w = threshold_mlpg_witness(star_k13())
        assert w.d_min == 3
        d = all_pairs_leaf_distances(w.tree)
        assert all(d[0][x] == 3 for x in (1, 2, 3))
        assert all(d[x][y] == 2 for x, y in combinations((1, 2, 3), 2))

    @pytest.mark.parametrize("seed", range(25))
    def test_random_round_trip(self, seed):
        g = random_threshold(10, seed)
        assert verify_witness(g, threshold_lpg_witness(g))
        assert verify_witness(g, threshold_mlpg_witness(g))

    def test_rejects_non_threshold(self):
        with pytest.raises(NotThreshold):
            threshold_lpg_witness(cycle(5))
        with pytest.raises(NotThreshold):
            threshold_mlpg_witness(Graph(3, [(0, 1)]))


class TestSplitMatching:
    def test_n1(self):
        w = split_matching_lpg_witness(split_matching(1))
        assert w.d_max == 2
        assert leaf_distance(w.tree, 0, 1) == 2

    def test_n2_distances(self):
        w = split_matching_lpg_witness(split_matching(2))
        a1, a2, b1, b2 = 0, 1, 2, 3
        d = all_pairs_leaf_distances(w.tree)
        assert w.d_max == 3
        assert (d[a1][a2], d[a1][b1], d[a1][b2], d[b1][b2]) == (3, 3, 4, 5)

    @pytest.mark.parametrize("k", range(1, 9))
    def test_round_trip(self, k):
        assert verify_witness(split_matching(k), split_matching_lpg_witness(split_matching(k)))

    def test_relabeled_input(self):
        # Same graph as split_matching(3) with clique and stable sides interleaved.
        g = Graph(6, [(0, 2), (0, 4), (2, 4), (0, 1), (2, 3), (4, 5)])
        assert verify_witness(g, split_matching_lpg_witness(g))

    def test_rejects(self):
        with pytest.raises(NotSplitMatching):
            split_matching_lpg_witness(split_antimatching(3))
        with pytest.raises(NotSplitMatching):
            split_matching_lpg_witness(cycle(4))


class TestSplitAntimatching:
    def test_n2_distances(self):
        w = split_antimatching_mlpg_witness(split_antimatching(2))
        a1, a2, b1, b2 = 0, 1, 2, 3
        d = all_pairs_leaf_distances(w.tree)
        assert w.d_min == 4
        assert (d[a1][b1], d[a1][b2], d[a1][a2], d[b1][b2]) == (3, 4, 5, 3)

    def test_n1(self):
        w = split_antimatching_mlpg_witness(split_antimatching(1))
        assert w.d_min == 3
        assert leaf_distance(w.tree, 0, 1) == 2

    @pytest.mark.parametrize("k", range(1, 9))
    def test_round_trip(self, k):
        g = split_antimatching(k)
        assert verify_witness(g, split_antimatching_mlpg_witness(g))

    def test_flagged_as_reconstructed(self):
        trace = construct("antimatching", "mlpg", split_antimatching(3))
        assert trace.theorem == SPLIT_ANTIMATCHING_MLPG
        assert trace.reconstructed

    def test_rejects(self):
        with pytest.raises(NotSplitAntimatching):
            split_antimatching_mlpg_witness(split_matching(3))


def matching_identity(t, x, y):
    d_max = 2 * (t + 1)
    (i, sx, px), (j, sy, py) = sorted([x, y])
    if i == j:
        if sx == sy == "a":
            return 2 * i + 2
        if sx == sy == "b":
            return 2 * d_max - 2 * i
        return d_max - 2 * i + 1 if px == py else d_max + 1
    return {
        ("a", "a"): i + j + 2,
        ("a", "b"): d_max + (i - j + 1),
        ("b", "a"): d_max + (j - i + 1),
        ("b", "b"): 2 * d_max - i - j,
    }[sx, sy]


def antimatching_identity(t, x, y):
    d_min = 2 * (t + 1) + 1
    (i, sx, px), (j, sy, py) = sorted([x, y])
    if i == j:
        if sx == sy == "a":
            return 2 * d_min - 2 * i - 2
        if sx == sy == "b":
            return 2 * i + 2
        return d_min - 2 * i if px == py else d_min
    return {
        ("a", "a"): 2 * d_min - i - j - 2,
        ("a", "b"): d_min + (j - i),
        ("b", "a"): d_min + (i - j),
        ("b", "b"): i + j + 2,
    }[sx, sy]


def spec_strategy(kinds, max_t=4, max_size=4):
    return st.lists(st.tuples(st.sampled_from(kinds), st.integers(1, max_size)), min_size=1,
                    max_size=max_t).map(lambda cs: MatrogenicSpec.of(*cs))


class TestMatchingSequence:
    def test_single_matching(self):
        w = matching_sequence_witness(MatrogenicSpec.of((MATCHING, 1)))
        assert w.d_max == 4
        assert leaf_distance(w.tree, 0, 1) == 3

    def test_clique_then_matching_cross_identity(self):
        spec = MatrogenicSpec.of((CLIQUE, 2), (MATCHING, 2))
        w = matching_sequence_witness(spec)
        r = roles(spec)
        a = next(v for v in r if r[v][:2] == (1, "a"))
        b2 = next(v for v in r if r[v][:2] == (2, "b"))
        assert leaf_distance(w.tree, a, b2) == w.d_max + (1 - 2 + 1) == 6

    def test_equivalent_to_split_matching_caterpillar(self):
        for k in range(1, 5):
            w = matching_sequence_witness(MatrogenicSpec.of((MATCHING, k)))
            g = split_matching(k)
            assert w.graph() == g == split_matching_lpg_witness(g).graph()

    @given(spec_strategy([MATCHING, CLIQUE, STABLE]))
    def test_identities(self, spec):
        w = matching_sequence_witness(spec)
        r = roles(spec)
        d = all_pairs_leaf_distances(w.tree)
        assert (w.d_min, w.d_max) == (0, 2 * (spec.t + 1))
        assert all(x > 0 for x in weights_of(w))
        for u, v in combinations(range(spec.n), 2):
            assert d[u][v] == matching_identity(spec.t, r[u], r[v])
        assert verify_witness(build_matrogenic(spec)[0], w)

    def test_rejects_antimatching(self):
        with pytest.raises(UnsupportedComponent):
            matching_sequence_witness(MatrogenicSpec.of((MATCHING, 1), (ANTIMATCHING, 1)))


class TestAntimatchingSequence:
    def test_single_antimatching(self):
        w = antimatching_sequence_witness(MatrogenicSpec.of((ANTIMATCHING, 2)))
        assert w.d_min == 5
        a1, a2, b1, b2 = 0, 1, 2, 3
        assert leaf_distance(w.tree, a1, b1) == 3
        assert leaf_distance(w.tree, a1, b2) == 5

    def test_stable_then_antimatching(self):
        spec = MatrogenicSpec.of((STABLE, 2), (ANTIMATCHING, 2))
        w = antimatching_sequence_witness(spec)
        r = roles(spec)
        b = next(v for v in r if r[v][:2] == (1, "b"))
        b2 = next(v for v in r if r[v][:2] == (2, "b"))
        assert leaf_distance(w.tree, b, b2) == 1 + 1 + 2 + 1

    @given(spec_strategy([ANTIMATCHING, CLIQUE, STABLE]))
    def test_identities(self, spec):
        w = antimatching_sequence_witness(spec)
        r = roles(spec)
        d = all_pairs_leaf_distances(w.tree)
        assert (w.d_min, w.d_max) == (2 * (spec.t + 1) + 1, INF)
        assert all(x > 0 for x in weights_of(w))
        for u, v in combinations(range(spec.n), 2):
            assert d[u][v] == antimatching_identity(spec.t, r[u], r[v])
        assert verify_witness(build_matrogenic(spec)[0], w)

    def test_rejects_matching(self):
        with pytest.raises(UnsupportedComponent):
            antimatching_sequence_witness(MatrogenicSpec.of((MATCHING, 2)))


ordered_specs = st.tuples(
    st.lists(st.tuples(st.sampled_from([MATCHING, CLIQUE, STABLE]), st.integers(1, 3)), max_size=2),
    st.lists(st.tuples(st.sampled_from([ANTIMATCHING, CLIQUE, STABLE]), st.integers(1, 3)), max_size=2),
).filter(lambda p: p[0] or p[1]).map(lambda p: MatrogenicSpec.of(*(p[0] + p[1])))


class TestMatrogenic:
    def test_matching_one_antimatching_one(self):
        spec = MatrogenicSpec.of((MATCHING, 1), (ANTIMATCHING, 1))
        w = matrogenic_witness(spec)
        assert (w.d_min, w.d_max, w.cls) == (7, 14, PCG)
        r = roles(spec)
        a1 = next(v for v in r if r[v][:2] == (1, "a"))
        a2 = next(v for v in r if r[v][:2] == (2, "a"))
        assert leaf_distance(w.tree, a1, a2) == 13

    def test_first_stable_side_isolated_from_suffix(self):
        spec = MatrogenicSpec.of((MATCHING, 2), (ANTIMATCHING, 2))
        w = matrogenic_witness(spec)
        r = roles(spec)
        d = all_pairs_leaf_distances(w.tree)
        for u in (v for v in r if r[v][:2] == (1, "b")):
            for v in (x for x in r if r[x][:2] == (2, "a")):
                i, j = r[u][0], r[v][0]
                assert d[u][v] == 3 * 7 - i - j - 1 > 14

    def test_half_integer_weights(self):
        w = matrogenic_witness(MatrogenicSpec.of((MATCHING, 1), (ANTIMATCHING, 1)))
        assert Fraction(7, 2) in weights_of(w)

    @given(ordered_specs)
    def test_cross_identities(self, spec):
        w = matrogenic_witness(spec)
        m = 2 * (spec.t + 1) + 1
        r = roles(spec)
        q = next((i for i, c in enumerate(spec.components, 1) if c.kind == ANTIMATCHING), spec.t + 1)
        d = all_pairs_leaf_distances(w.tree)
        for u, v in combinations(range(spec.n), 2):
            x, y = r[u], r[v]
            if x[0] >= q and y[0] < q:
                x, y = y, x
            if x[0] < q <= y[0]:
                i, j = x[0], y[0]
                want = {
                    ("a", "a"): 2 * m + i - j,
                    ("a", "b"): m + i + j + 2,
                    ("b", "a"): 3 * m - i - j - 1,
                    ("b", "b"): 2 * m + j - i + 1,
                }[x[1], y[1]]
                assert d[u][v] == want
        assert verify_witness(build_matrogenic(spec)[0], w)

    def test_random_ordered_specs(self):
        rng = random.Random(4)
        for _ in range(100):
            t = rng.randint(1, 4)
            q = rng.randint(0, t)
            comps = [(rng.choice([MATCHING, CLIQUE, STABLE]), rng.randint(1, 3)) for _ in range(q)]
            comps += [(rng.choice([ANTIMATCHING, CLIQUE, STABLE]), rng.randint(1, 3)) for _ in range(t - q)]
            spec = MatrogenicSpec.of(*comps)
            assert verify_witness(build_matrogenic(spec)[0], matrogenic_witness(spec))

    def test_order_violation(self):
        with pytest.raises(OrderViolation):
            matrogenic_witness(MatrogenicSpec.of((ANTIMATCHING, 1), (MATCHING, 1)))
        with pytest.raises(OrderViolation):
            matrogenic_witness(MatrogenicSpec.of((MATCHING, 1), (ANTIMATCHING, 1), (STABLE, 1), (MATCHING, 2)))


class TestDispatch:
    def test_trace_depths(self):
        trace = construct("threshold", "lpg", star_k13())
        assert trace.depths == {0: 1, 1: 2, 2: 2, 3: 2}

    def test_matrogenic_theorem_id(self):
        trace = construct("matrogenic", "pcg", MatrogenicSpec.of((MATCHING, 1), (ANTIMATCHING, 1)))
        assert trace.theorem == MATROGENIC_PCG
        assert trace.witness.cls == PCG

    def test_pcg_request_retags(self):
        g = split_matching(3)
        trace = construct("matching", "pcg", g)
        assert trace.witness.cls == PCG
        assert verify_witness(g, trace.witness)

    @pytest.mark.parametrize("family,cls", [("matching", "mlpg"), ("antimatching", "lpg"),
                                            ("matching-seq", "mlpg"), ("antimatching-seq", "lpg"),
                                            ("matrogenic", "lpg")])
    def test_unsupported(self, family, cls):
        source = split_matching(3) if family in ("matching", "antimatching") else MatrogenicSpec.of((MATCHING, 3))
        with pytest.raises(UnsupportedCombination):
            construct(family, cls, source)

    def test_negative_message_cites_class(self):
        with pytest.raises(UnsupportedCombination, match="G ∉ mLPG"):
            construct("matching", "mlpg", split_matching(3))

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            construct("wheel", "lpg", Graph(1))
