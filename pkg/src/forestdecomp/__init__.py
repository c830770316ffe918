"""Tree and forest decompositions of graphs: cuts, sparse spanning trees,
chains, peeling into stub graphs, exact search and the T_k counterexample."""

from .chains import (
    BezoutCertificate,
    ChainParameters,
    ChainTree,
    bezout_coefficients,
    bezout_small,
    chain,
    forest_chain_parameters,
    k_chain_forest,
)
from .connectivity import TreePack, check_tree_pack, edge_connectivity, global_min_cut, is_k_edge_connected, pack_spanning_trees
from .counterexample import (
    ResidueProfile,
    assemble_counterexample,
    binary_tree,
    build_blowup,
    certify_obstruction,
    residue_profile,
    split_sizes,
)
from .decomposition import Decomposition, Embedding, Twig, Verdict, regroup, verify
from .graph import (
    Cut,
    GraphError,
    Multigraph,
    StubGraph,
    TreeShape,
    canonical_shape,
    degree,
    induced,
    minus,
    path_graph,
    star_graph,
)
from .peeling import PeelSequence, find_small_cut, peel
from .pipeline import (
    BudgetExceeded,
    ExactCore,
    Infeasible,
    PipelineConfig,
    PipelineError,
    assemble_forest,
    decompose_forest,
    decompose_two_coprime,
    expand_stub_embedding,
    extend_from_minus,
    pipeline_three_trees,
)
from .search import SearchResult, exact_decompose
from .sparse_trees import (
    Orientation,
    PreconditionError,
    SplitResult,
    balanced_strong_orientation,
    halving_spanning_tree,
    low_degree_spanning_tree,
    sparse_tree_family,
    split_core_rest,
)

__version__ = "0.1.0"
