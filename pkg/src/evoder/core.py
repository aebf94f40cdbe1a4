"""Exact scalars, the evolution-algebra model and the matrix file format.

Scalars are :class:`fractions.Fraction` values throughout. Every operation on
them is exact, so the zero tests that decide graph arrows never misfire.

Matrix files look like::

    # optional comment lines
    3
    2   1  0
    -1  0  3
    0   0  3

Entries are written ``p`` or ``p/q``. Indices are 0-based in memory and
1-based wherever they reach a user (reports, error messages).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

MAX_DIMENSION = 64

Matrix = tuple[tuple[Fraction, ...], ...]

_RATIONAL = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


class ParseError(ValueError):
    """Base class for problems in matrix input text."""


class MalformedHeader(ParseError):
    pass


class MalformedRational(ParseError):
    def __init__(self, token: str, row: int, entry: int):
        self.token = token
        self.row = row
        self.entry = entry
        super().__init__(f"malformed rational {token!r} at row {row} entry {entry}")


class ShapeMismatch(ValueError):
    pass


class DimensionTooLarge(ValueError):
    pass


def parse_rational(token: str) -> Fraction:
    """Parse ``p`` or ``p/q`` (q nonzero). Raises ``ValueError`` otherwise."""
    m = _RATIONAL.match(token)
    if m is None:
        raise ValueError(token)
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(token)
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    """``3/2`` for non-integers, ``2`` for integers, ``0`` for zero."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def to_matrix(rows: Iterable[Iterable[object]]) -> Matrix:
    """Coerce nested iterables of ints/strings/Fractions to an immutable square matrix."""
    out = []
    for row in rows:
        out.append(tuple(x if isinstance(x, Fraction) else (parse_rational(x) if isinstance(x, str) else Fraction(x)) for x in row))
    n = len(out)
    for i, row in enumerate(out):
        if len(row) != n:
            raise ShapeMismatch(f"row {i + 1} has {len(row)} entries, expected {n}")
    return tuple(out)


def zero_matrix(n: int) -> Matrix:
    return tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n))


@dataclass(frozen=True)
class EvolutionAlgebra:
    """An n-dimensional evolution algebra given by its structure matrix.

    Row ``i`` of ``structure`` holds the coordinates of ``e_i * e_i`` in the
    natural basis.
    """

    structure: Matrix

    def __post_init__(self):
        m = to_matrix(self.structure)
        n = len(m)
        if n == 0:
            raise ShapeMismatch("an algebra needs at least one basis element")
        if n > MAX_DIMENSION:
            raise DimensionTooLarge(f"dimension {n} exceeds the limit of {MAX_DIMENSION}")
        object.__setattr__(self, "structure", m)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]]) -> "EvolutionAlgebra":
        return cls(to_matrix(rows))

    @property
    def n(self) -> int:
        return len(self.structure)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.structure[i][j]

    def scaled(self, c: Fraction) -> "EvolutionAlgebra":
        return EvolutionAlgebra(tuple(tuple(c * x for x in row) for row in self.structure))

    def relabeled(self, perm: Sequence[int]) -> "EvolutionAlgebra":
        """Algebra whose basis element ``perm[i]`` is this algebra's ``e_i``."""
        n = self.n
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        return EvolutionAlgebra(tuple(tuple(self.structure[inv[a]][inv[b]] for b in range(n)) for a in range(n)))

    def product(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Multiply two vectors given in natural-basis coordinates."""
        out = [Fraction(0)] * self.n
        for k, (a, b) in enumerate(zip(u, v)):
            c = a * b
            if c:
                for t, w in enumerate(self.structure[k]):
                    if w:
                        out[t] += c * w
        return tuple(out)


def _significant_tokens(text: str) -> list[tuple[int, list[str]]]:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lines.append((lineno, stripped.split()))
    return lines


def parse_matrix(text: str) -> Matrix:
    """Parse a square matrix file; see the module docstring for the format."""
    lines = _significant_tokens(text)
    if not lines:
        raise MalformedHeader("empty input: expected the dimension n")
    _, first = lines[0]
    header = first[0]
    if not re.fullmatch(r"\+?\d+", header) or int(header) <= 0:
        raise MalformedHeader(f"first token {header!r} is not a positive integer")
    n = int(header)
    if n > MAX_DIMENSION:
        raise DimensionTooLarge(f"dimension {n} exceeds the limit of {MAX_DIMENSION}")
    # tokens after the header on the same line are not allowed: rows are line-based
    if len(first) > 1:
        raise ShapeMismatch("the header line must contain only the dimension")
    body = lines[1:]
    if len(body) != n:
        raise ShapeMismatch(f"expected {n} rows, found {len(body)}")
    rows = []
    for r, (_, tokens) in enumerate(body, start=1):
        if len(tokens) != n:
            raise ShapeMismatch(f"row {r} has {len(tokens)} entries, expected {n}")
        row = []
        for e, tok in enumerate(tokens, start=1):
            try:
                row.append(parse_rational(tok))
            except ValueError:
                raise MalformedRational(tok, r, e) from None
        rows.append(tuple(row))
    return tuple(rows)


def parse_algebra(text: str) -> EvolutionAlgebra:
    return EvolutionAlgebra(parse_matrix(text))


def serialize_matrix(m: Matrix, comment: str | None = None) -> str:
    """Inverse of :func:`parse_matrix`; columns are padded for readability."""
    cells = [[format_rational(x) for x in row] for row in m]
    width = max((len(c) for row in cells for c in row), default=1)
    lines = []
    if comment:
        lines.extend(f"# {line}" for line in comment.splitlines())
    lines.append(str(len(m)))
    lines.extend(" ".join(c.rjust(width) for c in row) for row in cells)
    return "\n".join(lines) + "\n"


def serialize_algebra(a: EvolutionAlgebra) -> str:
    return serialize_matrix(a.structure)
