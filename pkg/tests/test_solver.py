import random
from fractions import Fraction as F

import pytest

from cases import (
    TWIN_FREE_3,
    DENSE_4,
    LOOP_SPLIT_4,
    LOOP_SPLIT_4_BASIS,
    LOOP_SPLIT_5,
    SINGLE_CLASS,
    SINGLE_CLASS_BASIS,
    TWO_CLASSES,
    TWO_CLASSES_BASIS,
    WHEEL,
    alg,
    mat,
)
from evoder.core import ShapeMismatch, zero_matrix
from evoder.graph import associated_graph, graph_properties
from evoder.linalg import rank
from evoder.solver import (
    GenerationExhausted,
    assemble_constraints,
    constraint_residual,
    derivation_space,
    generate_random_algebra,
    in_derivation_span,
    is_derivation,
    lie_bracket,
    nullspace,
)
from evoder.twin import is_twin_free, twin_partition


def random_matrix(rng, n, lo=-3, hi=3):
    return mat([[F(rng.randint(lo, hi), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)])


# -- constraint system ------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_row_counts_and_order(n):
    c = assemble_constraints(generate_random_algebra(n, seed=n))
    eq1 = [r.origin for r in c.rows if r.origin[0] == "Eq1"]
    eq2 = [r.origin for r in c.rows if r.origin[0] == "Eq2"]
    assert len(eq1) == n * n * (n - 1) // 2
    assert len(eq2) == n * n
    assert [r.origin for r in c.rows] == eq1 + eq2
    assert eq1 == sorted(eq1) and all(o[1] < o[2] for o in eq1)
    assert eq2 == sorted(eq2)
    assert c.unknown_order == tuple((i, j) for i in range(n) for j in range(n))


def test_three_dimensional_counts():
    c = assemble_constraints(alg(TWIN_FREE_3))
    assert sum(r.origin[0] == "Eq1" for r in c.rows) == 9
    assert sum(r.origin[0] == "Eq2" for r in c.rows) == 9
    assert all(len(r.coefficients) == 9 for r in c.rows)


@pytest.mark.parametrize("w", [F(1), F(-7, 3), F(5)])
def test_one_dimensional_row(w):
    (row,) = assemble_constraints(alg([[w]])).rows
    assert row.origin == ("Eq2", 0, 0)
    assert row.coefficients == (-w,)


def test_eq1_and_eq2_coefficients():
    a = alg([[1, 2], [3, 4]])
    rows = {r.origin: r.coefficients for r in assemble_constraints(a).rows}
    # unknowns d11 d12 d21 d22; Eq1 (1,2,k): w_2k d12 + w_1k d21
    assert rows[("Eq1", 0, 1, 0)] == (0, 3, 1, 0)
    assert rows[("Eq1", 0, 1, 1)] == (0, 4, 2, 0)
    # Eq2 (i,j): sum_k w_ik d_kj - 2 w_ij d_ii
    assert rows[("Eq2", 0, 0)] == (1 - 2, 0, 2, 0)
    assert rows[("Eq2", 0, 1)] == (-4, 1, 0, 2)
    assert rows[("Eq2", 1, 1)] == (0, 3, 0, 4 - 8)


def test_twin_free_example_has_full_rank():
    c = assemble_constraints(alg(TWIN_FREE_3))
    assert rank([r.coefficients for r in c.rows]) == 9
    assert nullspace(c).dimension == 0


# -- null space -------------------------------------------------------------


def test_two_class_example_basis():
    s = derivation_space(alg(TWO_CLASSES))
    assert s.dimension == 1
    assert s.basis == (mat(TWO_CLASSES_BASIS),)
    assert s.free_unknowns == ((0, 0),)


def test_single_class_example_basis():
    s = derivation_space(alg(SINGLE_CLASS))
    assert s.basis == (mat(SINGLE_CLASS_BASIS),)


def test_four_dimensional_loop_split_basis():
    s = derivation_space(alg(LOOP_SPLIT_4))
    assert s.basis == (mat(LOOP_SPLIT_4_BASIS),)


@pytest.mark.parametrize("rows", [TWIN_FREE_3, WHEEL, DENSE_4, LOOP_SPLIT_5])
def test_zero_derivation_examples(rows):
    s = derivation_space(alg(rows))
    assert s.dimension == 0
    assert s.basis == ()


def test_zero_algebra_admits_everything():
    s = derivation_space(alg([[0, 0], [0, 0]]))
    assert s.dimension == 4
    assert s.free_unknowns == ((0, 0), (0, 1), (1, 0), (1, 1))


def test_basis_is_canonical_on_free_unknowns():
    rng = random.Random(3)
    for _ in range(30):
        a = generate_random_algebra(rng.randint(2, 4), seed=rng.getrandbits(32))
        s = derivation_space(a)
        for b, (fi, fj) in zip(s.basis, s.free_unknowns):
            for gi, gj in s.free_unknowns:
                assert b[gi][gj] == (1 if (gi, gj) == (fi, fj) else 0)
        assert list(s.free_unknowns) == sorted(s.free_unknowns)


# -- Leibniz check ----------------------------------------------------------


def test_leibniz_examples():
    assert is_derivation(alg(TWO_CLASSES), TWO_CLASSES_BASIS).holds
    assert is_derivation(alg(WHEEL), zero_matrix(5)).holds
    bad = is_derivation(alg([[1]]), [[1]])
    assert not bad.holds
    assert bad.residual.origin == ("Eq2", 0, 0)
    assert bad.residual.value == -1


def test_leibniz_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        is_derivation(alg(TWIN_FREE_3), zero_matrix(2))


def test_leibniz_agrees_with_constraint_rows():
    rng = random.Random(11)
    for _ in range(150):
        n = rng.randint(1, 4)
        a = generate_random_algebra(n, seed=rng.getrandbits(32))
        c = assemble_constraints(a)
        s = derivation_space(a)
        candidates = [random_matrix(rng, n, -1, 1)] + list(s.basis)
        for d in candidates:
            res = is_derivation(a, d)
            assert res.holds == (constraint_residual(c, d) is None)
            if not res.holds:
                row = next(r for r in c.rows if r.origin == res.residual.origin)
                value = sum(x * y for x, y in zip(row.coefficients, (v for r in d for v in r)))
                assert value == res.residual.value != 0


# -- bracket ----------------------------------------------------------------


def test_bracket_antisymmetry_and_self():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(1, 4)
        d1, d2 = random_matrix(rng, n), random_matrix(rng, n)
        assert lie_bracket(d1, d1) == zero_matrix(n)
        neg = tuple(tuple(-x for x in row) for row in lie_bracket(d2, d1))
        assert lie_bracket(d1, d2) == neg


def test_bracket_is_a_derivation_on_zero_algebra():
    # every matrix is a derivation of the zero algebra, so only the formula is tested
    d1 = mat([[0, 1], [0, 0]])
    d2 = mat([[0, 0], [1, 0]])
    # d(u) = u*D; [d1,d2] = d1 d2 - d2 d1 has matrix D2 D1 - D1 D2
    assert lie_bracket(d1, d2) == mat([[-1, 0], [0, 1]])


def test_bracket_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        lie_bracket(zero_matrix(2), zero_matrix(3))


def test_bracket_closure_on_large_spaces():
    rng = random.Random(21)
    checked = 0
    for _ in range(80):
        a = generate_random_algebra(rng.randint(2, 4), arrow_probability=F(1, 4), seed=rng.getrandbits(32))
        s = derivation_space(a)
        for x in s.basis:
            for y in s.basis:
                br = lie_bracket(x, y)
                assert is_derivation(a, br).holds
                assert in_derivation_span(s, br)
                checked += 1
    assert checked > 50


# -- invariants -------------------------------------------------------------


def test_rank_nullity_and_scaling():
    rng = random.Random(8)
    for _ in range(40):
        n = rng.randint(1, 5)
        a = generate_random_algebra(n, seed=rng.getrandbits(32))
        s = derivation_space(a)
        c = assemble_constraints(a)
        assert s.dimension == n * n - rank([r.coefficients for r in c.rows]) == n * n - s.rank
        for factor in (F(-1), F(3, 7), F(-5, 2)):
            assert derivation_space(a.scaled(factor)).dimension == s.dimension


# -- random generator -------------------------------------------------------


def test_generator_is_deterministic():
    assert generate_random_algebra(3, F(1, 2), 42) == generate_random_algebra(3, F(1, 2), 42)
    assert generate_random_algebra(3, F(1, 2), 42) != generate_random_algebra(3, F(1, 2), 43)


def test_generator_entry_ranges():
    for seed in range(50):
        a = generate_random_algebra(4, F(3, 4), seed)
        for row in a.structure:
            for x in row:
                if x:
                    # x = p/q before reduction, with p in [-9, 9] \ {0} and q in [1, 4]
                    assert any((x * q).denominator == 1 and 1 <= abs(x * q) <= 9 for q in range(1, 5))


def test_generator_flags():
    for seed in range(30):
        a = generate_random_algebra(4, F(1, 2), seed, non_degenerate=True, connected=True, twin_free=True)
        g = associated_graph(a)
        p = graph_properties(a, g)
        assert p.non_degenerate and p.connected
        assert is_twin_free(twin_partition(g))


def test_generator_probability_one():
    a = generate_random_algebra(3, 1, 0)
    assert all(x != 0 for row in a.structure for x in row)


def test_generator_exhaustion():
    # with every entry nonzero all rows share the full descendant set
    with pytest.raises(GenerationExhausted):
        generate_random_algebra(2, 1, 0, twin_free=True)


@pytest.mark.parametrize("p", [0, F(3, 2), -1])
def test_generator_rejects_bad_probability(p):
    with pytest.raises(ValueError):
        generate_random_algebra(2, p, 0)
