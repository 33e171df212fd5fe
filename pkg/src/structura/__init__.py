"""Graph-class laboratory: cores, fragments, exact enumeration and Boltzmann Poisson sampling."""
from .boltzmann import BPModel, ComponentMultiset, build_bp_model, core_of_bp, sample_bp, sample_uniform
from .canon import UnlabeledGraph, canonicalize, certificate, is_isomorphic
from .census import (
    Census,
    RatioSequence,
    build_census,
    count_by_core_size,
    count_labeled,
    ratio_sequence,
    richness_diagnostic,
    rooted_forest_count,
    unlabeled_inventory,
)
from .classes import (
    GraphClass,
    UnknownClass,
    builtin_class,
    is_attachable_up_to,
    is_bridge_addable_up_to,
    is_decomposable_up_to,
    is_free_up_to,
    is_trimmable_up_to,
)
from .graph import Graph, RootedGraph, SizeCapExceeded, StructuraError, core2, fragment
from .innercore import InnerCoreGadgets, inner_core, safe_sets
from .minors import contains_minor
from .series import RhoSolution, Series, eval_series, rooted_tree_series, solve_rho2

__version__ = "0.1.0"

__all__ = [
    "BPModel",
    "build_bp_model",
    "build_census",
    "builtin_class",
    "canonicalize",
    "Census",
    "certificate",
    "ComponentMultiset",
    "contains_minor",
    "core2",
    "core_of_bp",
    "count_by_core_size",
    "count_labeled",
    "eval_series",
    "fragment",
    "Graph",
    "GraphClass",
    "inner_core",
    "InnerCoreGadgets",
    "is_attachable_up_to",
    "is_bridge_addable_up_to",
    "is_decomposable_up_to",
    "is_free_up_to",
    "is_isomorphic",
    "is_trimmable_up_to",
    "ratio_sequence",
    "RatioSequence",
    "RhoSolution",
    "richness_diagnostic",
    "rooted_forest_count",
    "rooted_tree_series",
    "RootedGraph",
    "safe_sets",
    "sample_bp",
    "sample_uniform",
    "Series",
    "SizeCapExceeded",
    "solve_rho2",
    "StructuraError",
    "UnknownClass",
    "unlabeled_inventory",
    "UnlabeledGraph",
]
