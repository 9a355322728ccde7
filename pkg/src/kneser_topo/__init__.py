"""Exact finite checks for stable Kneser graphs: stable sets, graphs, complexes,
integral homology, order homotopy and discrete Morse matchings."""

from .errors import Caps, KneserTopoError, ParameterError, ResourceError, caps_from_env
from .stable_sets import (
    KSubset,
    StabilityVector,
    contains_stable,
    elements_of,
    enumerate_stable,
    in_theorem_regime,
    is_stable,
    mask_of,
    smallest_stable_subset,
    theorem_sum,
)
from .kneser_graph import (
    ChromaticResult,
    ColoringCertificate,
    StableKneserGraph,
    build_graph,
    canonical_coloring,
    chromatic_number_exact,
    corollary10_check,
    graph_report,
    greedy_clique,
    lovasz_bound_report,
    verify_coloring,
)
from .complexes import (
    HomPosetElement,
    PairElement,
    Poset,
    SimplicialComplex,
    build_hom_poset,
    build_pair_poset,
    complex_equality,
    neighborhood_complex,
    order_complex,
)
from .homology import (
    ChainComplex,
    HomologyReport,
    SparseMatrix,
    betti_numbers_mod_p,
    boundary_matrices,
    is_homology_sphere,
    reduced_homology,
    smith_normal_form,
)
from .order_homotopy import (
    OperatorChainReport,
    OperatorReport,
    PosetMap,
    cone_check,
    lemma5_verify,
    level_offsets,
    suspension_check,
    theorem7_all_levels,
    theorem7_base_case,
    theorem7_operator_chain,
    verify_order_preserving,
)
from .morse import (
    MatchingCheck,
    NotASubcomplex,
    PartialMatching,
    StageResult,
    check_acyclic,
    check_matching,
    classify_chain,
    critical_subcomplex,
    pair_chains,
    chains_to_complex,
    theorem8_verify,
)

__version__ = "0.1.0"
