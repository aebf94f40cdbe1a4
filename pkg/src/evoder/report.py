"""Full analysis pipeline and its deterministic JSON serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .classify3 import LETTERS, TemplateCheck, TypeMatch, classify, template_check
from .core import EvolutionAlgebra, Matrix, format_rational
from .graph import DirectedGraph, GraphProperties, associated_graph, graph_properties
from .solver import DerivationSpace, derivation_space
from .structural import ZeroCertificate, ZeroPattern, certificates, infer_zero_pattern
from .twin import TwinPartition, is_twin_free, twin_partition


@dataclass(frozen=True)
class Analysis:
    algebra: EvolutionAlgebra
    graph: DirectedGraph
    properties: GraphProperties
    partition: TwinPartition
    twin_free: bool
    pattern: ZeroPattern
    space: DerivationSpace
    contradictions: tuple[tuple[int, int, int], ...]  # (basis index, row, col)
    match: Optional[TypeMatch]
    check: Optional[TemplateCheck]

    @property
    def consistent(self) -> bool:
        return not self.contradictions


def structural_contradictions(pattern: ZeroPattern, space: DerivationSpace) -> list[tuple[int, int, int]]:
    """Cells proven zero that are nonzero in some basis derivation (should be empty)."""
    out = []
    for b, d in enumerate(space.basis):
        for (i, j) in sorted(pattern.cells):
            if d[i][j] != 0:
                out.append((b, i, j))
    return out


def analyze(a: EvolutionAlgebra) -> Analysis:
    g = associated_graph(a)
    props = graph_properties(a, g)
    part = twin_partition(g)
    pattern = infer_zero_pattern(a, g, part)
    space = derivation_space(a)
    match = check = None
    if a.n == 3:
        match = classify(a)
        if match.verdict == "Type":
            check = template_check(a, match, space)
    return Analysis(
        algebra=a,
        graph=g,
        properties=props,
        partition=part,
        twin_free=is_twin_free(part),
        pattern=pattern,
        space=space,
        contradictions=tuple(structural_contradictions(pattern, space)),
        match=match,
        check=check,
    )


# -- JSON -------------------------------------------------------------------


def _matrix_json(m: Matrix) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in m]


def _vertices(vs) -> list[int]:
    return [v + 1 for v in vs]


def _witness_json(value, key: str = ""):
    """Indices become 1-based; rationals become strings."""
    if isinstance(value, bool):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, int):
        return value if key == "step" else value + 1
    if isinstance(value, dict):
        return {k: _witness_json(v, k) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        if key == "W":
            return [[format_rational(x) for x in row] for row in value]
        return [_witness_json(v, key) for v in value]
    return value


def certificate_json(c: ZeroCertificate) -> dict:
    return {"row": c.row + 1, "col": c.col + 1, "rule": c.rule, "witnesses": _witness_json(dict(c.witnesses))}


def match_json(m: TypeMatch, check: Optional[TemplateCheck]) -> dict:
    out: dict = {"verdict": m.verdict, "arrows": m.arrows}
    if m.verdict == "NotApplicable":
        out["reason"] = m.reason
    if m.verdict == "Type":
        out["type"] = m.type_id
        out["assignment"] = {LETTERS[x]: m.assignment[x] + 1 for x in range(3)}
    if check is not None:
        v = check.violation
        out["template_check"] = {
            "holds": check.holds,
            "table_discrepancy": not check.holds,
            "parameter_count": check.parameter_count,
            "derivation_dimension": check.dimension,
            "cells": [list(r) for r in check.cells],
            "violation": None
            if v is None
            else {
                "basis_index": v.basis_index + 1,
                "row": v.cell[0] + 1,
                "col": v.cell[1] + 1,
                "actual": format_rational(v.actual),
                "expected": format_rational(v.expected),
                "relation": v.relation,
            },
        }
    return out


def partition_json(p: TwinPartition) -> list[dict]:
    return [
        {"members": _vertices(c.members), "with_loop": _vertices(c.with_loop), "without_loop": _vertices(c.without_loop)}
        for c in p.classes
    ]


def report_dict(an: Analysis) -> dict:
    props = an.properties
    out = {
        "dimension": an.algebra.n,
        "structure_matrix": _matrix_json(an.algebra.structure),
        "graph": [[int(x) for x in row] for row in an.graph.adjacency],
        "sinks": _vertices(props.sinks),
        "connected": props.connected,
        "non_degenerate": props.non_degenerate,
        "cycle": None if props.cycle is None else _vertices(props.cycle.vertices),
        "twin_partition": partition_json(an.partition),
        "twin_free": an.twin_free,
        "zero_certificates": [certificate_json(c) for c in certificates(an.pattern)],
        "structural_consistent": an.consistent,
        "derivation_dimension": an.space.dimension,
        "basis": [_matrix_json(b) for b in an.space.basis],
    }
    if an.match is not None:
        out["classification"] = match_json(an.match, an.check)
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def emit_report(an: Analysis) -> str:
    return dumps(report_dict(an))
