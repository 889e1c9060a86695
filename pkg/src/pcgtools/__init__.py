"""Pairwise compatibility graphs: weighted-tree witnesses, evaluation and exact decisions."""

from .constructions import (
    ConstructionTrace,
    antimatching_sequence_witness,
    construct,
    matching_sequence_witness,
    matrogenic_witness,
    split_antimatching_mlpg_witness,
    split_matching_lpg_witness,
    threshold_lpg_witness,
    threshold_mlpg_witness,
)
from .graph import (
    Component,
    DegreePartition,
    Graph,
    MatrogenicSpec,
    SplitPartition,
    build_matrogenic,
    classify_split_component,
    compose,
    contains_long_induced_cycle,
    cycle,
    degree_partition,
    induced_subgraph,
    is_threshold,
    random_threshold,
    split_antimatching,
    split_matching,
    split_partition,
)
from .newick import parse as newick_parse
from .newick import serialize as newick_serialize
from .oracle import (
    Topology,
    Verdict,
    decide,
    enumerate_topologies,
    lpg_feasible,
    mlpg_feasible,
    pcg_feasible,
    probe_open_problem,
)
from .rational import INF
from .tree import (
    LPG,
    MLPG,
    PCG,
    WeightedTree,
    Witness,
    all_pairs_leaf_distances,
    check_three_leaf_lemma,
    leaf_distance,
    lpg_eval,
    mlpg_eval,
    pcg_eval,
    verify_witness,
)

__version__ = "0.1.0"
