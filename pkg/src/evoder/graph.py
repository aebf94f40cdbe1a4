"""The directed graph attached to an evolution algebra and its basic predicates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .core import EvolutionAlgebra


class IndexOutOfRange(IndexError):
    pass


@dataclass(frozen=True)
class DirectedGraph:
    """Arrow ``i -> j`` exists iff ``adjacency[i][j]``."""

    adjacency: tuple[tuple[bool, ...], ...]

    @property
    def n(self) -> int:
        return len(self.adjacency)

    def has_arrow(self, i: int, j: int) -> bool:
        return self.adjacency[i][j]

    def successors(self, i: int) -> tuple[int, ...]:
        return tuple(j for j, a in enumerate(self.adjacency[i]) if a)

    def arrows(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(self.n) if self.adjacency[i][j]]

    def arrow_count(self) -> int:
        return sum(sum(row) for row in self.adjacency)


@dataclass(frozen=True)
class VertexCycle:
    """Distinct vertices ``v_1 .. v_m`` with arrows ``v_t -> v_{t+1}`` and ``v_m -> v_1``."""

    vertices: tuple[int, ...]

    def is_valid(self, g: DirectedGraph) -> bool:
        vs = self.vertices
        if not vs or len(set(vs)) != len(vs):
            return False
        if any(not (0 <= v < g.n) for v in vs):
            return False
        return all(g.has_arrow(vs[t], vs[(t + 1) % len(vs)]) for t in range(len(vs)))


@dataclass(frozen=True)
class GraphProperties:
    sinks: tuple[int, ...]
    non_degenerate: bool
    connected: bool
    cycle: Optional[VertexCycle]


def associated_graph(a: EvolutionAlgebra) -> DirectedGraph:
    return DirectedGraph(tuple(tuple(w != 0 for w in row) for row in a.structure))


def descendants(g: DirectedGraph, vertices: Iterable[int]) -> frozenset[int]:
    """First-generation descendants of a vertex set: every target of an arrow leaving it."""
    out: set[int] = set()
    for i in vertices:
        if not (0 <= i < g.n):
            raise IndexOutOfRange(f"vertex {i + 1} is outside 1..{g.n}")
        out.update(g.successors(i))
    return frozenset(out)


def find_cycle(g: DirectedGraph) -> Optional[VertexCycle]:
    """Return some cycle of ``g``, or ``None`` if it is acyclic.

    From each start vertex walk forward along the smallest-indexed arrow; the
    first vertex seen twice closes a cycle. Every vertex of a sink-free graph
    reaches a cycle this way, so the first start vertex already succeeds.
    Vertices whose walk dies in a sink are skipped, then a DFS settles the
    general case.
    """
    for start in range(g.n):
        path: list[int] = []
        position: dict[int, int] = {}
        v: Optional[int] = start
        while v is not None and v not in position:
            position[v] = len(path)
            path.append(v)
            succ = g.successors(v)
            v = succ[0] if succ else None
        if v is not None:
            return VertexCycle(tuple(path[position[v]:]))
    return _dfs_cycle(g)


def _dfs_cycle(g: DirectedGraph) -> Optional[VertexCycle]:
    white, grey, black = 0, 1, 2
    color = [white] * g.n
    for root in range(g.n):
        if color[root] != white:
            continue
        stack = [(root, iter(g.successors(root)))]
        path = [root]
        color[root] = grey
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                path.pop()
                color[v] = black
            elif color[nxt] == grey:
                return VertexCycle(tuple(path[path.index(nxt):]))
            elif color[nxt] == white:
                color[nxt] = grey
                path.append(nxt)
                stack.append((nxt, iter(g.successors(nxt))))
    return None


def is_connected(g: DirectedGraph) -> bool:
    """Connectivity of the underlying undirected graph."""
    if g.n <= 1:
        return True
    seen = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for w in range(g.n):
            if w not in seen and (g.adjacency[v][w] or g.adjacency[w][v]):
                seen.add(w)
                frontier.append(w)
    return len(seen) == g.n


def graph_properties(a: EvolutionAlgebra, g: Optional[DirectedGraph] = None) -> GraphProperties:
    if g is None:
        g = associated_graph(a)
    sinks = tuple(i for i in range(g.n) if not any(g.adjacency[i]))
    non_degenerate = all(any(w != 0 for w in row) for row in a.structure)
    # the matrix-level and graph-level notions must agree
    assert non_degenerate == (not sinks)
    cycle = find_cycle(g)
    if not sinks:
        assert cycle is not None and cycle.is_valid(g)
    return GraphProperties(sinks=sinks, non_degenerate=non_degenerate, connected=is_connected(g), cycle=cycle)
