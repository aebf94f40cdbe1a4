"""Zero certificates for derivation matrices, derived without solving anything.

Each rule below proves that a given entry ``d_ij`` vanishes for *every*
derivation of the algebra. Premises are either facts about the structure
matrix or cells already proven zero, so rules are monotone and the engine runs
them to a fixpoint. Every conclusion carries a certificate whose witnesses let
:func:`replay` re-check it from scratch.

Rule order is priority order: after any rule adds a cell the scan restarts
from the top, so the first applicable rule in this list names each cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Optional

from .core import EvolutionAlgebra
from .graph import DirectedGraph, associated_graph, graph_properties
from .twin import TwinClass, TwinPartition, twin_partition

Cell = tuple[int, int]

RULES = (
    "TwinSeparation",
    "SoleTarget",
    "RestrictedIntersection",
    "Determinant2x2",
    "GramDeterminant",
    "TwinSymmetry",
    "SingletonLoop",
    "LoopSplitNonsingular",
    "LoopSplitDiagonal",
    "LoopFreeClassPropagation",
    "ContainedDescendants",
    "DiagonalFromOffdiagonal",
)

NEEDS_NON_DEGENERATE = frozenset({"TwinSeparation", "LoopFreeClassPropagation", "DiagonalFromOffdiagonal"})


@dataclass(frozen=True)
class ZeroCertificate:
    row: int
    col: int
    rule: str
    witnesses: Mapping[str, object] = field(hash=False, compare=True)

    @property
    def step(self) -> int:
        return self.witnesses["step"]


@dataclass(frozen=True)
class ZeroPattern:
    """Per-cell status: a certificate (proven zero) or absent (unknown)."""

    n: int
    cells: Mapping[Cell, ZeroCertificate] = field(hash=False)

    def is_zero(self, i: int, j: int) -> bool:
        return (i, j) in self.cells

    def unknown(self) -> list[Cell]:
        return [(i, j) for i in range(self.n) for j in range(self.n) if (i, j) not in self.cells]

    def is_complete(self) -> bool:
        return len(self.cells) == self.n * self.n

    def grid(self) -> list[list[Optional[str]]]:
        return [[self.cells[(i, j)].rule if (i, j) in self.cells else None for j in range(self.n)] for i in range(self.n)]


def certificates(z: ZeroPattern) -> list[ZeroCertificate]:
    return [z.cells[c] for c in sorted(z.cells)]


def _det(m: list[list[Fraction]]) -> Fraction:
    """Determinant by exact Gaussian elimination."""
    a = [list(r) for r in m]
    size = len(a)
    det = Fraction(1)
    for c in range(size):
        p = next((r for r in range(c, size) if a[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, size):
            f = a[r][c] / a[c][c]
            if f:
                for t in range(c, size):
                    a[r][t] -= f * a[c][t]
    return det


def gram_determinant(w, i: int, j: int) -> Fraction:
    sii = sum((x * x for x in w[i]), Fraction(0))
    sjj = sum((x * x for x in w[j]), Fraction(0))
    sij = sum((x * y for x, y in zip(w[i], w[j])), Fraction(0))
    return sii * sjj - sij * sij


class _Engine:
    def __init__(
        self,
        a: EvolutionAlgebra,
        g: DirectedGraph,
        p: TwinPartition,
        start: Optional[ZeroPattern],
        rules: Iterable[str] = RULES,
    ):
        self.a = a
        self.rules = tuple(rules)
        self.w = a.structure
        self.n = a.n
        self.g = g
        self.p = p
        self.props = graph_properties(a, g)
        self.d1 = [frozenset(g.successors(i)) for i in range(self.n)]
        self.cls = p.class_index()
        self.proven: dict[Cell, ZeroCertificate] = dict(start.cells) if start is not None else {}
        self.step = max((c.step for c in self.proven.values()), default=-1) + 1

    # -- bookkeeping -------------------------------------------------------

    def known(self, i: int, j: int) -> bool:
        return (i, j) in self.proven

    def all_known(self, cells: Iterable[Cell]) -> bool:
        return all(c in self.proven for c in cells)

    def conclude(self, rule: str, cells: Iterable[Cell], witnesses: dict) -> bool:
        new = [c for c in dict.fromkeys(cells) if c not in self.proven]
        if not new:
            return False
        wit = dict(witnesses, step=self.step)
        for i, j in new:
            self.proven[(i, j)] = ZeroCertificate(i, j, rule, wit)
        self.step += 1
        return True

    def twins(self, i: int, j: int) -> bool:
        return self.cls[i] == self.cls[j]

    # -- rules -------------------------------------------------------------

    def twin_separation(self) -> bool:
        fired = False
        for r in range(self.n):
            for c in range(self.n):
                if r == c or self.twins(r, c) or self.known(r, c):
                    continue
                direct = sorted(self.d1[c] - self.d1[r])
                if direct:
                    fired |= self.conclude("TwinSeparation", [(r, c)], {"k": direct[0]})
                    continue
                # D1(c) is a proper subset of D1(r); c is not a sink here
                k = min(self.d1[r] - self.d1[c])
                m = min(self.d1[r] & self.d1[c])
                fired |= self.conclude("TwinSeparation", [(r, c)], {"k": k, "common": m})
        return fired

    def sole_target(self) -> bool:
        fired = False
        for t in self.p.classes:
            if len(t.shared_descendants) != 1:
                continue
            (i,) = t.shared_descendants
            if i not in t.members:
                continue
            cells = [(i, i)]
            for j in t.members:
                cells += [(i, j), (j, i), (j, j)]
            fired |= self.conclude("SoleTarget", cells, {"class": list(t.members), "target": i})
        return fired

    def restricted_intersection(self) -> bool:
        fired = False
        for t in self.p.classes:
            if len(t.members) < 2:
                continue
            members = set(t.members)
            for k in range(self.n):
                hit = self.d1[k] & members
                if len(hit) != 1:
                    continue
                (j,) = hit
                for l in t.members:
                    if l == j or (self.known(j, l) and self.known(l, j)):
                        continue
                    premises = [(m, l) for m in sorted(self.d1[k] - {j})]
                    if not self.all_known(premises):
                        continue
                    cells = [(j, l)]
                    wit = {"class": list(t.members), "k": k, "j": j, "premises": premises}
                    if t.shared_descendants:
                        cells.append((l, j))
                        wit["common"] = min(t.shared_descendants)
                    fired |= self.conclude("RestrictedIntersection", cells, wit)
        return fired

    def determinant_2x2(self) -> bool:
        fired = False
        w = self.w
        for i, j in combinations(range(self.n), 2):
            if self.known(i, j) and self.known(j, i):
                continue
            for base, other in ((i, j), (j, i)):
                found = None
                for k, l in combinations(sorted(self.d1[base]), 2):
                    det = w[base][k] * w[other][l] - w[base][l] * w[other][k]
                    if det:
                        found = (k, l, det)
                        break
                if found:
                    k, l, det = found
                    fired |= self.conclude(
                        "Determinant2x2", [(i, j), (j, i)], {"base": base, "k": k, "l": l, "determinant": det}
                    )
                    break
        return fired

    def gram(self) -> bool:
        if self.n < 3:
            return False
        fired = False
        for i, j in combinations(range(self.n), 2):
            if self.known(i, j) and self.known(j, i):
                continue
            value = gram_determinant(self.w, i, j)
            if value:
                fired |= self.conclude("GramDeterminant", [(i, j), (j, i)], {"gram": value})
        return fired

    def twin_symmetry(self) -> bool:
        fired = False
        for (c, r) in list(self.proven):
            if r == c or self.known(r, c) or not self.twins(r, c) or not self.d1[c]:
                continue
            k = min(self.d1[c])
            fired |= self.conclude("TwinSymmetry", [(r, c)], {"common": k, "premises": [(c, r)]})
        return fired

    def singleton_loop(self) -> bool:
        fired = False
        for t in self.p.classes:
            if len(t.members) != 1 or not t.with_loop:
                continue
            (i,) = t.members
            if self.known(i, i):
                continue
            premises = [(k, i) for k in sorted(self.d1[i] - {i})]
            if self.all_known(premises):
                fired |= self.conclude("SingletonLoop", [(i, i)], {"premises": premises})
        return fired

    def _loop_split_premises(self, t: TwinClass) -> Optional[list[Cell]]:
        wl = t.with_loop
        if not wl:
            return None
        outside = sorted(t.shared_descendants - set(t.members))
        premises = [(a, b) for a in wl for b in wl if a != b]
        premises += [(k, j) for j in wl for k in outside]
        return premises if self.all_known(premises) else None

    def loop_split_nonsingular(self) -> bool:
        fired = False
        for t in self.p.classes:
            premises = self._loop_split_premises(t)
            if premises is None:
                continue
            wl, nl = t.with_loop, t.without_loop
            cells = [(i, j) for i in t.members for j in t.members if i in wl or j in wl]
            if self.all_known(cells):
                continue
            outside = sorted(t.shared_descendants - set(t.members))
            extra = [(k, j) for j in nl for k in outside]
            if not self.all_known(extra):
                continue
            wmat = [[self.w[a][b] for b in wl] for a in wl]
            det = _det(wmat)
            if not det:
                continue
            wit = {
                "class": list(t.members),
                "with_loop": list(wl),
                "without_loop": list(nl),
                "W": wmat,
                "determinant": det,
                "premises": premises + extra,
            }
            fired |= self.conclude("LoopSplitNonsingular", cells, wit)
        return fired

    def loop_split_diagonal(self) -> bool:
        fired = False
        for t in self.p.classes:
            if all(self.known(i, i) for i in t.members):
                continue
            premises = self._loop_split_premises(t)
            if premises is None:
                continue
            wit = {"class": list(t.members), "with_loop": list(t.with_loop), "premises": premises}
            fired |= self.conclude("LoopSplitDiagonal", [(i, i) for i in t.members], wit)
        return fired

    def loop_free_class(self) -> bool:
        fired = False
        for t in self.p.classes:
            if t.with_loop or not t.shared_descendants or all(self.known(i, i) for i in t.members):
                continue
            desc = sorted(t.shared_descendants)
            if len({self.cls[j] for j in desc}) != len(desc):
                continue
            for j in desc:
                premises = [(j, j)] + [(k, j) for k in desc if k != j]
                if self.all_known(premises):
                    wit = {"class": list(t.members), "j": j, "premises": premises}
                    fired |= self.conclude("LoopFreeClassPropagation", [(i, i) for i in t.members], wit)
                    break
        return fired

    def contained_descendants(self) -> bool:
        fired = False
        for t in self.p.classes:
            members = set(t.members)
            inside = sorted(t.shared_descendants & members)
            if len(inside) != 2:
                continue
            i, j = inside
            for k in sorted(t.shared_descendants - members):
                if not self.d1[k] <= members | {k}:
                    continue
                cells = [(i, j), (j, i), (i, i), (j, j), (k, k)]
                if self.all_known(cells):
                    continue
                premises = []
                for s in sorted(t.shared_descendants - {k}):
                    premises += [(s, k), (k, s)]
                premises += [(h, k) for h in sorted(self.d1[k] & members)]
                premises += [(h, i) for h in sorted(t.shared_descendants - {i, j})]
                if self.w[k][k] == 0:
                    # without a loop at k the diagonal step needs d_kk from elsewhere
                    premises.append((k, k))
                premises = list(dict.fromkeys(premises))
                if not self.all_known(premises):
                    continue
                wit = {"class": list(t.members), "k": k, "pair": [i, j], "premises": premises}
                fired |= self.conclude("ContainedDescendants", cells, wit)
        return fired

    def diagonal_from_offdiagonal(self) -> bool:
        n = self.n
        if all(self.known(i, i) for i in range(n)):
            return False
        if not all(self.known(i, j) for i in range(n) for j in range(n) if i != j):
            return False
        cycle = self.props.cycle
        return self.conclude("DiagonalFromOffdiagonal", [(i, i) for i in range(n)], {"cycle": list(cycle.vertices)})

    def run(self) -> ZeroPattern:
        table = {
            "TwinSeparation": self.twin_separation,
            "SoleTarget": self.sole_target,
            "RestrictedIntersection": self.restricted_intersection,
            "Determinant2x2": self.determinant_2x2,
            "GramDeterminant": self.gram,
            "TwinSymmetry": self.twin_symmetry,
            "SingletonLoop": self.singleton_loop,
            "LoopSplitNonsingular": self.loop_split_nonsingular,
            "LoopSplitDiagonal": self.loop_split_diagonal,
            "LoopFreeClassPropagation": self.loop_free_class,
            "ContainedDescendants": self.contained_descendants,
            "DiagonalFromOffdiagonal": self.diagonal_from_offdiagonal,
        }
        active = [
            table[r] for r in RULES if r in self.rules and (self.props.non_degenerate or r not in NEEDS_NON_DEGENERATE)
        ]
        progress = True
        while progress:
            progress = False
            for rule in active:
                if rule():
                    progress = True
                    break
        return ZeroPattern(self.n, dict(self.proven))


def infer_zero_pattern(
    a: EvolutionAlgebra,
    g: Optional[DirectedGraph] = None,
    p: Optional[TwinPartition] = None,
    start: Optional[ZeroPattern] = None,
    rules: Iterable[str] = RULES,
) -> ZeroPattern:
    """Least fixpoint of the rules, optionally continuing from ``start``.

    ``rules`` restricts the engine to a subset of :data:`RULES` (priority
    order is unchanged); the default runs all of them.
    """
    rules = tuple(rules)
    unknown = set(rules) - set(RULES)
    if unknown:
        raise ValueError(f"unknown rules: {sorted(unknown)}")
    if g is None:
        g = associated_graph(a)
    if p is None:
        p = twin_partition(g)
    return _Engine(a, g, p, start, rules).run()


# -- independent replay -----------------------------------------------------


class ReplayError(AssertionError):
    pass


def replay(a: EvolutionAlgebra, certs: Iterable[ZeroCertificate]) -> None:
    """Re-check every certificate from the structure matrix alone.

    Descendant sets and twin classes are recomputed here from the raw matrix
    rather than taken from the graph or twin modules. Premise cells must carry
    certificates from strictly earlier steps. Raises :class:`ReplayError` on
    the first certificate that fails.
    """
    certs = list(certs)
    w = a.structure
    n = a.n
    d1 = [frozenset(k for k in range(n) if w[i][k] != 0) for i in range(n)]
    non_degenerate = all(d1)
    step_of = {(c.row, c.col): c.step for c in certs}

    def fail(c: ZeroCertificate, why: str):
        raise ReplayError(f"{c.rule} certificate for ({c.row + 1},{c.col + 1}) failed: {why}")

    def twin_class(members) -> frozenset[int]:
        ms = frozenset(members)
        if not ms or any(d1[m] != d1[min(ms)] for m in ms):
            raise ValueError
        if any(d1[v] == d1[min(ms)] for v in range(n) if v not in ms):
            raise ValueError
        return ms

    for c in certs:
        wit = c.witnesses
        if c.rule in NEEDS_NON_DEGENERATE and not non_degenerate:
            fail(c, "rule requires a non-degenerate algebra")
        for pr in wit.get("premises", []):
            pr = tuple(pr)
            if pr not in step_of or step_of[pr] >= c.step:
                fail(c, f"premise cell {pr} not proven earlier")
        try:
            ok = _replay_one(c, w, n, d1, twin_class, step_of)
        except (KeyError, ValueError, TypeError, IndexError) as exc:
            fail(c, f"malformed witnesses ({exc!r})")
        if not ok:
            fail(c, "premise does not hold")


def _replay_one(c: ZeroCertificate, w, n, d1, twin_class, step_of) -> bool:
    r, col, wit = c.row, c.col, c.witnesses
    rule = c.rule
    if rule == "TwinSeparation":
        k = wit["k"]
        if d1[r] == d1[col]:
            return False
        if "common" not in wit:
            return w[col][k] != 0 and w[r][k] == 0
        m = wit["common"]
        return w[r][k] != 0 and w[col][k] == 0 and w[r][m] != 0 and w[col][m] != 0
    if rule == "Determinant2x2":
        base, k, l = wit["base"], wit["k"], wit["l"]
        other = col if base == r else r
        if {base, other} != {r, col} or r == col or k == l:
            return False
        if k not in d1[base] or l not in d1[base]:
            return False
        det = w[base][k] * w[other][l] - w[base][l] * w[other][k]
        return det != 0 and det == wit["determinant"]
    if rule == "GramDeterminant":
        g = gram_determinant(w, r, col)
        return n >= 3 and r != col and g != 0 and g == wit["gram"]
    if rule == "TwinSymmetry":
        k = wit["common"]
        return (
            r != col
            and d1[r] == d1[col]
            and w[col][k] != 0
            and [tuple(p) for p in wit["premises"]] == [(col, r)]
        )
    if rule == "SingletonLoop":
        t = twin_class([r])
        need = {(k, r) for k in d1[r] - {r}}
        return r == col and len(t) == 1 and w[r][r] != 0 and need <= {tuple(p) for p in wit["premises"]}
    if rule in ("LoopSplitDiagonal", "LoopSplitNonsingular"):
        t = twin_class(wit["class"])
        wl = [v for v in sorted(t) if w[v][v] != 0]
        if list(wit["with_loop"]) != wl or not wl:
            return False
        outside = sorted(d1[wl[0]] - t)
        need = {(a, b) for a in wl for b in wl if a != b} | {(k, j) for j in wl for k in outside}
        if rule == "LoopSplitDiagonal":
            return r == col and r in t and need <= {tuple(p) for p in wit["premises"]}
        nl = [v for v in sorted(t) if w[v][v] == 0]
        need |= {(k, j) for j in nl for k in outside}
        wmat = [[w[a][b] for b in wl] for a in wl]
        det = _det(wmat)
        return (
            r in t
            and col in t
            and (r in wl or col in wl)
            and need <= {tuple(p) for p in wit["premises"]}
            and [list(x) for x in wit["W"]] == wmat
            and det != 0
            and det == wit["determinant"]
        )
    if rule == "SoleTarget":
        t = twin_class(wit["class"])
        i = wit["target"]
        if i not in t or any(d1[j] != {i} for j in t):
            return False
        return (r, col) in {(i, i)} | {(i, j) for j in t} | {(j, i) for j in t} | {(j, j) for j in t}
    if rule == "RestrictedIntersection":
        t = twin_class(wit["class"])
        k, j = wit["k"], wit["j"]
        if d1[k] & t != {j}:
            return False
        if r == j and col in t and col != j:
            l = col
        elif col == j and r in t and r != j:
            l = r
            m = wit["common"]
            if w[j][m] == 0:
                return False
        else:
            return False
        need = {(m, l) for m in d1[k] - {j}}
        return need <= {tuple(p) for p in wit["premises"]}
    if rule == "ContainedDescendants":
        t = twin_class(wit["class"])
        k = wit["k"]
        i, j = wit["pair"]
        dt = d1[min(t)]
        if k not in dt or k in (i, j) or not d1[k] <= t | {k} or dt & t != {i, j}:
            return False
        need = set()
        for s in dt - {k}:
            need |= {(s, k), (k, s)}
        need |= {(h, k) for h in d1[k] & t}
        need |= {(h, i) for h in dt - {i, j}}
        if w[k][k] == 0:
            need.add((k, k))
        return (r, col) in {(i, j), (j, i), (i, i), (j, j), (k, k)} and need <= {tuple(p) for p in wit["premises"]}
    if rule == "LoopFreeClassPropagation":
        t = twin_class(wit["class"])
        j = wit["j"]
        dt = d1[min(t)]
        if any(w[v][v] != 0 for v in t) or j not in dt:
            return False
        # descendants pairwise in distinct twin classes
        if len({d1[x] for x in dt}) != len(dt):
            return False
        need = {(j, j)} | {(k, j) for k in dt - {j}}
        return r == col and r in t and need <= {tuple(p) for p in wit["premises"]}
    if rule == "DiagonalFromOffdiagonal":
        cyc = list(wit["cycle"])
        if not cyc or len(set(cyc)) != len(cyc):
            return False
        if any(w[cyc[t]][cyc[(t + 1) % len(cyc)]] == 0 for t in range(len(cyc))):
            return False
        off = [(x, y) for x in range(n) for y in range(n) if x != y]
        return r == col and all(p in step_of and step_of[p] < c.step for p in off)
    return False
