"""Isomorphism testing for graphs that exclude a topological clique."""

from .closure import (
    ClosureGraph,
    ClosureParams,
    InitialSetResult,
    PairClosure,
    SeparatorReport,
    check_separator_bound,
    closure_graph,
    closure_of,
    closure_pair,
    find_initial_set,
    t_of_h,
    tcr_stable,
)
from .generators import InfeasibleSpec, generate
from .graph import (
    ColoredGraph,
    GraphFormatError,
    apply_permutation,
    connected_components,
    is_isomorphism,
    neighborhood,
    parse_graph,
    read_graph,
    serialize_graph,
    write_graph,
)
from .hypergraph import (
    BudgetExceeded,
    CosetLabeledHypergraph,
    MultipleLabelingCoset,
    iso_coset_labeled,
    iso_hypergraph,
    iso_multi_coset,
)
from .iso import (
    DecompositionNode,
    IsoResult,
    TopologicalSubgraphDetected,
    automorphism_group,
    bounding_coset,
    check_decomposition,
    isomorphisms,
    tree_decomposition,
)
from .perm import Coset, LabelingCoset, PermGroup
from .refinement import TupleColoring, color_refine, project, wl

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ClosureGraph",
    "ClosureParams",
    "ColoredGraph",
    "Coset",
    "CosetLabeledHypergraph",
    "DecompositionNode",
    "GraphFormatError",
    "InfeasibleSpec",
    "InitialSetResult",
    "IsoResult",
    "LabelingCoset",
    "MultipleLabelingCoset",
    "PairClosure",
    "PermGroup",
    "SeparatorReport",
    "TopologicalSubgraphDetected",
    "TupleColoring",
    "apply_permutation",
    "automorphism_group",
    "bounding_coset",
    "check_decomposition",
    "check_separator_bound",
    "closure_graph",
    "closure_of",
    "closure_pair",
    "color_refine",
    "connected_components",
    "find_initial_set",
    "generate",
    "is_isomorphism",
    "iso_coset_labeled",
    "iso_hypergraph",
    "iso_multi_coset",
    "isomorphisms",
    "neighborhood",
    "parse_graph",
    "project",
    "read_graph",
    "serialize_graph",
    "t_of_h",
    "tcr_stable",
    "tree_decomposition",
    "wl",
    "write_graph",
]
