"""Graph types of 3-dimensional non-degenerate irreducible evolution algebras.

Every such algebra that is not twin-free has, after relabeling its basis as
``(i, j, k)``, one of 23 adjacency patterns. Each pattern comes with a
parametric template for its derivations: some entries are forced to zero,
the others are rational expressions in the structure constants and a few free
entries. The templates live in ``data/types3.json``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import permutations
from typing import Optional

from . import expr
from .core import EvolutionAlgebra
from .graph import associated_graph, graph_properties
from .solver import DerivationSpace
from .twin import is_twin_free, twin_partition

LETTERS = "ijk"


@dataclass(frozen=True)
class TypeTemplate:
    id: int
    arrows: frozenset[tuple[int, int]]
    twin_class: tuple[int, ...]
    descendants: tuple[int, ...]
    zero: frozenset[tuple[int, int]]
    parameters: tuple[tuple[int, int], ...]
    relations: tuple[tuple[tuple[int, int], str, object], ...]  # (cell, source text, parsed rhs)

    def adjacency(self) -> tuple[tuple[bool, ...], ...]:
        return tuple(tuple((x, y) in self.arrows for y in range(3)) for x in range(3))


def _cell(s: str) -> tuple[int, int]:
    return LETTERS.index(s[0]), LETTERS.index(s[1])


@lru_cache(maxsize=1)
def load_templates() -> tuple[TypeTemplate, ...]:
    raw = json.loads(resources.files("evoder").joinpath("data/types3.json").read_text(encoding="utf-8"))
    out = []
    for rec in raw["types"]:
        zero = {(x, y) for x in range(3) for y in range(3)} if rec["zero"] == "all" else {_cell(c) for c in rec["zero"]}
        rels = []
        for text in rec["relations"]:
            lhs, node = expr.parse_relation(text)
            rels.append((_cell(lhs[2:]), text, node))
        out.append(
            TypeTemplate(
                id=rec["id"],
                arrows=frozenset((LETTERS.index(a), LETTERS.index(b)) for a, b in rec["arrows"]),
                twin_class=tuple(LETTERS.index(c) for c in rec["twin_class"]),
                descendants=tuple(LETTERS.index(c) for c in rec["descendants"]),
                zero=frozenset(zero),
                parameters=tuple(_cell(c) for c in rec["parameters"]),
                relations=tuple(rels),
            )
        )
    return tuple(out)


def template(type_id: int) -> TypeTemplate:
    return load_templates()[type_id - 1]


@dataclass(frozen=True)
class TypeMatch:
    """``verdict`` is ``"Type"``, ``"TwinFree"`` or ``"NotApplicable"``.

    For a type match, ``assignment[x]`` is the algebra's basis index playing
    the role of letter ``LETTERS[x]``.
    """

    verdict: str
    arrows: int
    type_id: Optional[int] = None
    assignment: Optional[tuple[int, int, int]] = None
    reason: Optional[str] = None


def classify(a: EvolutionAlgebra) -> TypeMatch:
    if a.n != 3:
        return TypeMatch("NotApplicable", 0, reason="n must be 3")
    g = associated_graph(a)
    count = g.arrow_count()
    props = graph_properties(a, g)
    if not props.non_degenerate:
        return TypeMatch("NotApplicable", count, reason="degenerate")
    if not props.connected:
        return TypeMatch("NotApplicable", count, reason="disconnected")
    if is_twin_free(twin_partition(g)):
        return TypeMatch("TwinFree", count)
    for t in load_templates():
        if len(t.arrows) != count:
            continue
        for perm in permutations(range(3)):
            if all(g.has_arrow(perm[x], perm[y]) == ((x, y) in t.arrows) for x in range(3) for y in range(3)):
                return TypeMatch("Type", count, type_id=t.id, assignment=perm)
    return TypeMatch("NotApplicable", count, reason="pattern outside table")


@dataclass(frozen=True)
class Violation:
    basis_index: int
    cell: tuple[int, int]  # in algebra indices
    actual: Fraction
    expected: Fraction
    relation: str  # "0" for a required zero, else the relation text


@dataclass(frozen=True)
class TemplateCheck:
    type_id: int
    cells: tuple[tuple[str, ...], ...]  # per template cell: "0", "param" or the relation text
    holds: bool
    violation: Optional[Violation]
    parameter_count: int
    dimension: int


class TemplateViolation(AssertionError):
    def __init__(self, check: TemplateCheck):
        self.check = check
        v = check.violation
        super().__init__(
            f"type {check.type_id}: basis element {v.basis_index + 1} has d[{v.cell[0] + 1},{v.cell[1] + 1}] = {v.actual},"
            f" template ({v.relation}) gives {v.expected}"
        )


def _environment(a: EvolutionAlgebra, perm, d) -> dict[str, Fraction]:
    env = {}
    for x in range(3):
        for y in range(3):
            name = LETTERS[x] + LETTERS[y]
            env["w_" + name] = a[perm[x], perm[y]]
            env["d_" + name] = d[perm[x]][perm[y]]
    return env


def template_check(a: EvolutionAlgebra, match: TypeMatch, space: DerivationSpace, strict: bool = False) -> TemplateCheck:
    """Check that every basis derivation lies in the type's parametric family.

    Template relations are linear in the derivation entries, so checking the
    basis covers the whole space. The computed dimension may be smaller than
    the number of template parameters; only containment is checked.
    """
    if match.verdict != "Type":
        raise ValueError("template_check needs a Type match")
    t = template(match.type_id)
    perm = match.assignment
    rel_by_cell = {cell: (text, node) for cell, text, node in t.relations}
    cells = tuple(
        tuple("0" if (x, y) in t.zero else rel_by_cell[(x, y)][0] if (x, y) in rel_by_cell else "param" for y in range(3))
        for x in range(3)
    )
    violation = None
    for b, d in enumerate(space.basis):
        env = _environment(a, perm, d)
        for x in range(3):
            for y in range(3):
                actual = d[perm[x]][perm[y]]
                if (x, y) in t.zero:
                    expected, text = Fraction(0), "0"
                elif (x, y) in rel_by_cell:
                    text, node = rel_by_cell[(x, y)]
                    expected = expr.evaluate(node, env)
                else:
                    continue
                if actual != expected:
                    violation = Violation(b, (perm[x], perm[y]), actual, expected, text)
                    break
            if violation:
                break
        if violation:
            break
    check = TemplateCheck(t.id, cells, violation is None, violation, len(t.parameters), space.dimension)
    if strict and violation is not None:
        raise TemplateViolation(check)
    return check
