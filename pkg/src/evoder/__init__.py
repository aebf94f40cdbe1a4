"""Derivations of finite-dimensional evolution algebras over the rationals."""

from .classify3 import TemplateCheck, TypeMatch, classify, template_check
from .core import EvolutionAlgebra, format_rational, parse_algebra, parse_matrix, serialize_algebra
from .graph import DirectedGraph, VertexCycle, associated_graph, descendants, graph_properties
from .report import analyze, emit_report
from .solver import (
    DerivationSpace,
    assemble_constraints,
    derivation_space,
    generate_random_algebra,
    is_derivation,
    lie_bracket,
    nullspace,
)
from .structural import ZeroCertificate, ZeroPattern, certificates, infer_zero_pattern, replay
from .twin import TwinClass, TwinPartition, is_twin_free, twin_partition

__version__ = "0.1.0"

__all__ = [
    "DerivationSpace",
    "DirectedGraph",
    "EvolutionAlgebra",
    "TemplateCheck",
    "TwinClass",
    "TwinPartition",
    "TypeMatch",
    "VertexCycle",
    "ZeroCertificate",
    "ZeroPattern",
    "analyze",
    "assemble_constraints",
    "associated_graph",
    "certificates",
    "classify",
    "derivation_space",
    "descendants",
    "emit_report",
    "format_rational",
    "generate_random_algebra",
    "graph_properties",
    "infer_zero_pattern",
    "is_derivation",
    "is_twin_free",
    "lie_bracket",
    "nullspace",
    "parse_algebra",
    "parse_matrix",
    "replay",
    "serialize_algebra",
    "template_check",
    "twin_partition",
]
