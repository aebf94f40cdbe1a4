import pytest
from hypothesis import given
from hypothesis import strategies as st

from cases import TWIN_FREE_3, CHAIN_3, CHAIN_3_SECOND_BASIS, WHEEL, alg
from evoder.core import EvolutionAlgebra
from evoder.graph import (
    DirectedGraph,
    IndexOutOfRange,
    VertexCycle,
    associated_graph,
    descendants,
    find_cycle,
    graph_properties,
)


def bools(rows):
    return tuple(tuple(bool(x) for x in row) for row in rows)


def adjacency_matrices(max_n=6):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.booleans(), min_size=n, max_size=n), min_size=n, max_size=n)
    )


def test_adjacency_three_dimensional():
    g = associated_graph(alg(TWIN_FREE_3))
    assert g.adjacency == bools([[1, 1, 0], [1, 0, 1], [0, 0, 1]])
    assert g.arrows() == [(0, 0), (0, 1), (1, 0), (1, 2), (2, 2)]


def test_adjacency_second_basis():
    g = associated_graph(alg(CHAIN_3_SECOND_BASIS))
    assert g.adjacency == bools([[0, 1, 1], [0, 1, 1], [0, 1, 1]])


def test_zero_matrix_has_no_arrows():
    assert associated_graph(alg([[0, 0], [0, 0]])).arrow_count() == 0


def test_descendants_examples():
    assert descendants(associated_graph(alg(WHEEL)), {0}) == {0, 1, 3, 4}
    assert descendants(associated_graph(alg(CHAIN_3)), {1}) == {2}
    assert descendants(associated_graph(alg([[1, 1], [0, 0]])), {1}) == set()


def test_wheel_descendant_lists():
    g = associated_graph(alg(WHEEL))
    expected = [{1, 2, 4, 5}, {1, 3, 5}, {2, 4, 5}, {1, 3, 4, 5}, {1, 2, 3, 4}]
    assert [{v + 1 for v in descendants(g, {i})} for i in range(5)] == expected


@pytest.mark.parametrize("vertices", [{3}, {-1}, {0, 5}])
def test_descendants_out_of_range(vertices):
    with pytest.raises(IndexOutOfRange):
        descendants(associated_graph(alg(TWIN_FREE_3)), vertices)


def test_properties_twin_free_example():
    a = alg(TWIN_FREE_3)
    p = graph_properties(a)
    assert p.sinks == ()
    assert p.non_degenerate and p.connected
    assert p.cycle == VertexCycle((0,))


def test_properties_with_sink():
    p = graph_properties(alg([[0, 1], [0, 0]]))
    assert p.sinks == (1,)
    assert not p.non_degenerate
    assert p.cycle is None


def test_properties_disconnected_loops():
    p = graph_properties(alg([[1, 0], [0, 1]]))
    assert p.sinks == ()
    assert not p.connected
    assert p.cycle == VertexCycle((0,))


def test_single_vertex_is_connected():
    assert graph_properties(alg([[0]])).connected
    assert graph_properties(alg([[5]])).connected


def test_cycle_follows_smallest_successor():
    # 1 -> 2 -> 3 -> 2, first repeated vertex is 2
    g = DirectedGraph(bools([[0, 1, 0], [0, 0, 1], [0, 1, 0]]))
    assert find_cycle(g) == VertexCycle((1, 2))


def test_cycle_found_past_a_sink_branch():
    # vertex 1 leads only to the sink 2; the cycle lives on 3 <-> 4
    g = DirectedGraph(bools([[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]))
    c = find_cycle(g)
    assert c is not None and c.is_valid(g)
    assert set(c.vertices) == {2, 3}


def test_acyclic_graph_has_no_cycle():
    g = DirectedGraph(bools([[0, 1, 1], [0, 0, 1], [0, 0, 0]]))
    assert find_cycle(g) is None


def test_invalid_cycles_rejected():
    g = DirectedGraph(bools([[0, 1], [1, 0]]))
    assert VertexCycle((0, 1)).is_valid(g)
    assert not VertexCycle((0,)).is_valid(g)
    assert not VertexCycle((0, 1, 0)).is_valid(g)
    assert not VertexCycle(()).is_valid(g)


@given(adjacency_matrices())
def test_non_degenerate_iff_no_sinks_and_cycle_exists(rows):
    a = EvolutionAlgebra.from_rows([[int(x) for x in row] for row in rows])
    g = associated_graph(a)
    p = graph_properties(a, g)
    zero_rows = tuple(i for i, row in enumerate(a.structure) if not any(row))
    assert p.sinks == zero_rows
    assert p.non_degenerate == (not zero_rows)
    if p.non_degenerate:
        assert p.cycle is not None and p.cycle.is_valid(g)
    if p.cycle is not None:
        assert p.cycle.is_valid(g)


@given(adjacency_matrices(), st.data())
def test_descendants_of_union(rows, data):
    g = DirectedGraph(bools(rows))
    verts = st.sets(st.integers(0, g.n - 1), min_size=1)
    u1, u2 = data.draw(verts), data.draw(verts)
    assert descendants(g, u1 | u2) == descendants(g, u1) | descendants(g, u2)
