"""Exact row reduction over the rationals with sparse rows.

Rows are ``dict[int, Fraction]`` mapping column to a nonzero coefficient.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

SparseRow = dict[int, Fraction]


def sparse(vec: Sequence[Fraction]) -> SparseRow:
    return {c: Fraction(x) for c, x in enumerate(vec) if x}


def rref(rows: Iterable[SparseRow], ncols: int, column_order: Optional[Sequence[int]] = None):
    """Reduce ``rows`` to reduced row-echelon form.

    Columns are scanned in ``column_order`` (default ``0..ncols-1``); in each,
    the first remaining row with a nonzero entry becomes the pivot row. No
    magnitude pivoting: the arithmetic is exact.

    Returns ``(pivots, reduced)`` where ``reduced[t]`` is the normalized row
    whose pivot column is ``pivots[t]``.
    """
    order = list(range(ncols)) if column_order is None else list(column_order)
    pending = [dict(r) for r in rows if r]
    pivots: list[int] = []
    reduced: list[SparseRow] = []
    for col in order:
        hit = next((t for t, r in enumerate(pending) if col in r), None)
        if hit is None:
            continue
        row = pending.pop(hit)
        inv = 1 / row[col]
        row = {c: v * inv for c, v in row.items()}
        for others in (pending, reduced):
            for t, r in enumerate(others):
                f = r.get(col)
                if f:
                    merged = dict(r)
                    for c, v in row.items():
                        nv = merged.get(c, 0) - f * v
                        if nv:
                            merged[c] = nv
                        else:
                            merged.pop(c, None)
                    others[t] = merged
        pending = [r for r in pending if r]
        pivots.append(col)
        reduced.append(row)
    return pivots, reduced


def rank(rows: Iterable[Sequence[Fraction]]) -> int:
    rows = [sparse(r) for r in rows]
    ncols = max((max(r) + 1 for r in rows if r), default=0)
    return len(rref(rows, ncols)[0])


def in_span(vectors: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> bool:
    """Decide ``target ∈ span(vectors)`` by comparing ranks."""
    if not any(target):
        return True
    return rank(list(vectors) + [target]) == rank(vectors)
