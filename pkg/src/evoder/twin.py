"""Twin partition: vertices grouped by equal first-generation descendant sets."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import DirectedGraph


@dataclass(frozen=True)
class TwinClass:
    members: tuple[int, ...]
    with_loop: tuple[int, ...]
    without_loop: tuple[int, ...]
    shared_descendants: frozenset[int]


@dataclass(frozen=True)
class TwinPartition:
    classes: tuple[TwinClass, ...]

    def class_of(self, v: int) -> TwinClass:
        for c in self.classes:
            if v in c.members:
                return c
        raise KeyError(v)

    def class_index(self) -> dict[int, int]:
        """Map each vertex to the position of its class in ``classes``."""
        return {v: t for t, c in enumerate(self.classes) for v in c.members}


def twin_partition(g: DirectedGraph) -> TwinPartition:
    groups: dict[tuple[int, ...], list[int]] = {}
    for v in range(g.n):
        groups.setdefault(g.successors(v), []).append(v)
    classes = []
    for key, members in groups.items():
        wl = tuple(v for v in members if g.has_arrow(v, v))
        nl = tuple(v for v in members if not g.has_arrow(v, v))
        classes.append(TwinClass(tuple(members), wl, nl, frozenset(key)))
    classes.sort(key=lambda c: c.members[0])
    return TwinPartition(tuple(classes))


def is_twin_free(p: TwinPartition) -> bool:
    return all(len(c.members) == 1 for c in p.classes)
