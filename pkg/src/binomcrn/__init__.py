"""Unconditional binomiality of reversible chemical reaction networks.

Two independent deciders are provided and cross-checked: exact rational
row reduction of the binomial coefficient matrix (:mod:`binomcrn.matrix`)
and edge rewriting on the modified species-reaction graph
(:mod:`binomcrn.graph`).
"""
__version__ = "0.1.0"

from .decomposition import (associated_binomial, mass_action_rhs, species_coefficient,
                            steady_state_polynomials, verify_decomposition)
from .graph import (SRGraph, create_graph, graph_to_matrix, is_unconditionally_binomial_graph,
                    transform)
from .harness import AnalysisReport, RandomNetworkSpec, analyze, bench, generate_random
from .matrix import BinomialCoefficientMatrix, build_matrix, is_unconditionally_binomial_matrix, rref
from .network import (Complex, ParseError, ReactionNetwork, ReversibleReaction, SpeciesId,
                      format_network, parse_batch, parse_network)
from .polynomial import SymbolicPolynomial, complex_monomial
from .verdict import Verdict

__all__ = [
    "AnalysisReport", "BinomialCoefficientMatrix", "Complex", "ParseError", "RandomNetworkSpec",
    "ReactionNetwork", "ReversibleReaction", "SRGraph", "SpeciesId", "SymbolicPolynomial",
    "Verdict", "analyze", "associated_binomial", "bench", "build_matrix", "complex_monomial",
    "create_graph", "format_network", "generate_random", "graph_to_matrix",
    "is_unconditionally_binomial_graph", "is_unconditionally_binomial_matrix",
    "mass_action_rhs", "parse_batch", "parse_network", "rref", "species_coefficient",
    "steady_state_polynomials", "transform", "verify_decomposition",
]
