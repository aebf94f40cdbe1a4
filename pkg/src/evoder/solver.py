"""Derivation spaces computed exactly from the defining linear conditions.

With ``d(e_i) = sum_k d_ik e_k`` a linear map is a derivation iff

* ``w_jk d_ij + w_ik d_ji = 0``           for ``i != j`` and every ``k``  (Eq1)
* ``sum_k w_ik d_kj - 2 w_ij d_ii = 0``    for every ``i, j``              (Eq2)

The unknowns ``d_ij`` are numbered row-major: ``d_ij`` is unknown ``i*n + j``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import EvolutionAlgebra, Matrix, ShapeMismatch, to_matrix
from .graph import associated_graph, graph_properties
from .linalg import SparseRow, in_span, rref
from .twin import is_twin_free, twin_partition


@dataclass(frozen=True)
class ConstraintRow:
    origin: tuple  # ("Eq1", i, j, k) or ("Eq2", i, j), 0-based
    coefficients: tuple[Fraction, ...]


@dataclass(frozen=True)
class ConstraintSystem:
    n: int
    unknown_order: tuple[tuple[int, int], ...]
    rows: tuple[ConstraintRow, ...]


@dataclass(frozen=True)
class DerivationSpace:
    n: int
    dimension: int
    basis: tuple[Matrix, ...]
    rank: int
    free_unknowns: tuple[tuple[int, int], ...]


def assemble_constraints(a: EvolutionAlgebra) -> ConstraintSystem:
    n = a.n
    w = a.structure
    rows = []
    zero = Fraction(0)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                coef = [zero] * (n * n)
                coef[i * n + j] += w[j][k]
                coef[j * n + i] += w[i][k]
                rows.append(ConstraintRow(("Eq1", i, j, k), tuple(coef)))
    for i in range(n):
        for j in range(n):
            coef = [zero] * (n * n)
            for k in range(n):
                coef[k * n + j] += w[i][k]
            coef[i * n + i] -= 2 * w[i][j]
            rows.append(ConstraintRow(("Eq2", i, j), tuple(coef)))
    order = tuple((i, j) for i in range(n) for j in range(n))
    return ConstraintSystem(n, order, tuple(rows))


def nullspace(c: ConstraintSystem) -> DerivationSpace:
    """Exact kernel of the constraint system.

    Columns are eliminated from the last unknown to the first, so the free
    unknowns are the earliest possible ones in row-major order. Each basis
    matrix has a 1 at its own free unknown and 0 at the other free unknowns;
    the basis is sorted by free-unknown position.
    """
    n = c.n
    size = n * n
    rows: list[SparseRow] = [{t: v for t, v in enumerate(r.coefficients) if v} for r in c.rows]
    pivots, reduced = rref(rows, size, column_order=range(size - 1, -1, -1))
    rank = len(pivots)
    pivot_set = set(pivots)
    free = [t for t in range(size) if t not in pivot_set]
    basis = []
    for f in free:
        vec = [Fraction(0)] * size
        vec[f] = Fraction(1)
        for p, row in zip(pivots, reduced):
            coeff = row.get(f)
            if coeff:
                vec[p] = -coeff
        basis.append(tuple(tuple(vec[i * n:(i + 1) * n]) for i in range(n)))
    assert len(basis) == size - rank
    return DerivationSpace(n, len(basis), tuple(basis), rank, tuple(divmod(f, n) for f in free))


def derivation_space(a: EvolutionAlgebra) -> DerivationSpace:
    return nullspace(assemble_constraints(a))


@dataclass(frozen=True)
class Residual:
    origin: tuple  # ("Eq1", i, j, k) or ("Eq2", i, j), 0-based
    value: Fraction


@dataclass(frozen=True)
class LeibnizCheck:
    holds: bool
    residual: Optional[Residual]


def _check_shape(a: EvolutionAlgebra, d: Matrix) -> Matrix:
    d = to_matrix(d)
    if len(d) != a.n:
        raise ShapeMismatch(f"derivation matrix is {len(d)}x{len(d)}, algebra has dimension {a.n}")
    return d


def is_derivation(a: EvolutionAlgebra, d: Matrix) -> LeibnizCheck:
    """Check ``d(e_i e_j) = d(e_i) e_j + e_i d(e_j)`` on all pairs of basis vectors.

    The products are formed with the algebra's multiplication rather than the
    assembled constraint rows, so this is an independent test of the solver.
    The first nonzero coordinate of ``lhs - rhs`` is reported with the tag of
    the constraint row it corresponds to.
    """
    d = _check_shape(a, d)
    n = a.n
    basis = [tuple(Fraction(int(t == i)) for t in range(n)) for i in range(n)]

    def apply(u):
        out = [Fraction(0)] * n
        for i, ui in enumerate(u):
            if ui:
                for k, dik in enumerate(d[i]):
                    out[k] += ui * dik
        return tuple(out)

    for i in range(n):
        for j in range(i, n):
            lhs = apply(a.product(basis[i], basis[j]))
            rhs1 = a.product(apply(basis[i]), basis[j])
            rhs2 = a.product(basis[i], apply(basis[j]))
            for k in range(n):
                r = lhs[k] - rhs1[k] - rhs2[k]
                if r:
                    # d(e_i e_j) - ... at coordinate k is -(Eq1 row) for i != j and the Eq2 row (i, k) for i == j
                    origin = ("Eq2", i, k) if i == j else ("Eq1", i, j, k)
                    return LeibnizCheck(False, Residual(origin, r if i == j else -r))
    return LeibnizCheck(True, None)


def constraint_residual(c: ConstraintSystem, d: Matrix) -> Optional[Residual]:
    """First constraint row that does not vanish on ``d``."""
    flat = [x for row in d for x in row]
    for row in c.rows:
        v = sum((x * y for x, y in zip(row.coefficients, flat) if x), Fraction(0))
        if v:
            return Residual(row.origin, v)
    return None


def matmul(x: Matrix, y: Matrix) -> Matrix:
    n = len(x)
    return tuple(tuple(sum((x[i][k] * y[k][j] for k in range(n)), Fraction(0)) for j in range(n)) for i in range(n))


def lie_bracket(d1: Matrix, d2: Matrix) -> Matrix:
    """Matrix of the commutator ``d1∘d2 - d2∘d1``.

    A map's matrix acts on coordinate row vectors from the right
    (``d(u) = u·D``), so composition ``d1∘d2`` has matrix ``D2·D1``.
    """
    d1, d2 = to_matrix(d1), to_matrix(d2)
    if len(d1) != len(d2):
        raise ShapeMismatch("bracket of matrices of different sizes")
    p, q = matmul(d2, d1), matmul(d1, d2)
    return tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(p, q))


def flatten(m: Matrix) -> tuple[Fraction, ...]:
    return tuple(x for row in m for x in row)


def in_derivation_span(space: DerivationSpace, d: Matrix) -> bool:
    return in_span([flatten(b) for b in space.basis], flatten(d))


class GenerationExhausted(RuntimeError):
    pass


MAX_ATTEMPTS = 10_000


def _draw_entry(rng: random.Random) -> Fraction:
    num = rng.choice([v for v in range(-9, 10) if v])
    return Fraction(num, rng.randint(1, 4))


def generate_random_algebra(
    n: int,
    arrow_probability: Fraction | str | int = Fraction(1, 2),
    seed: int = 0,
    *,
    non_degenerate: bool = False,
    connected: bool = False,
    twin_free: bool = False,
) -> EvolutionAlgebra:
    """Deterministic random algebra for property tests.

    Each entry is nonzero with probability ``arrow_probability``; nonzero
    entries are ``p/q`` with ``p`` in ``[-9, 9] \\ {0}`` and ``q`` in ``[1, 4]``.
    Samples are rejected until the requested flags hold.
    """
    if n < 1:
        raise ValueError("n must be positive")
    p = Fraction(arrow_probability)
    if not (0 < p <= 1):
        raise ValueError("arrow probability must lie in (0, 1]")
    rng = random.Random(seed)
    for _ in range(MAX_ATTEMPTS):
        rows = []
        for _i in range(n):
            rows.append(tuple(_draw_entry(rng) if rng.randrange(p.denominator) < p.numerator else Fraction(0) for _j in range(n)))
        a = EvolutionAlgebra(tuple(rows))
        g = associated_graph(a)
        if non_degenerate or connected:
            props = graph_properties(a, g)
            if non_degenerate and not props.non_degenerate:
                continue
            if connected and not props.connected:
                continue
        if twin_free and not is_twin_free(twin_partition(g)):
            continue
        return a
    raise GenerationExhausted(f"no algebra with the requested properties after {MAX_ATTEMPTS} draws (n={n}, p={p})")


def random_instance(template_rows: Sequence[Sequence[bool]], rng: random.Random) -> EvolutionAlgebra:
    """Random algebra with a prescribed nonzero pattern."""
    return EvolutionAlgebra(tuple(tuple(_draw_entry(rng) if a else Fraction(0) for a in row) for row in template_rows))
