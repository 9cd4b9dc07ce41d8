"""Matrix types for multi-level quasi-cyclic LDPC codes.

A K-level code is a J x L matrix whose entries are K-variate polynomials
with 0/1 coefficients; each coefficient is an exponent vector
(i_1, ..., i_K) with 0 <= i_k < p_k.  Expanding the outermost level
replaces every entry by a p_K x p_K block grid: the coefficient
x_K^{i_K} * (rest) contributes (rest) at block positions (R, C) with
C = (R + i_K) mod p_K.  That is the convention where the weight-one
circulant of shift 1 has the row-i one at column (i+1) mod p.  Expanding
all K levels yields the binary parity-check matrix; levels expand
outermost-first, so the binary row index is the mixed-radix word
(j; R_K, ..., R_1) with R_1 least significant.

A single-level code in which every entry has weight at most one is
equivalently described by a base matrix of circulant shifts, with -1
marking an all-zero block.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import prod
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import ParseError, PreconditionError

__all__ = [
    "LevelSpec",
    "PolyParityMatrix",
    "BaseMatrix",
    "BinaryParityMatrix",
    "WeightProfile",
    "expand_to_level",
    "expand_full",
    "base_matrix_of",
    "weight_profile",
    "poly_to_json",
    "poly_from_json",
    "parse_base_matrix",
    "format_base_matrix",
]

# Entry coefficients are stored as sorted tuples of exponent vectors,
# each vector ordered (i_1, ..., i_K): innermost level first.
Coeffs = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class LevelSpec:
    """Circulant sizes (p_1, ..., p_K), innermost level first."""

    ps: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.ps:
            raise PreconditionError("need at least one level")
        for p in self.ps:
            if not isinstance(p, int) or p < 2:
                raise PreconditionError(f"level sizes must be integers >= 2, got {p!r}")

    @property
    def num_levels(self) -> int:
        return len(self.ps)

    def __iter__(self) -> Iterator[int]:
        return iter(self.ps)

    def __getitem__(self, k: int) -> int:
        return self.ps[k]


def _normalize_coeffs(coeffs: Sequence[Sequence[int]], levels: LevelSpec) -> Coeffs:
    K = levels.num_levels
    seen = set()
    out = []
    for vec in coeffs:
        v = tuple(int(x) for x in vec)
        if len(v) != K:
            raise PreconditionError(
                f"exponent vector {v} has length {len(v)}, expected {K}"
            )
        for x, p in zip(v, levels.ps):
            if not 0 <= x < p:
                raise PreconditionError(f"exponent {x} out of range [0, {p})")
        if v in seen:
            raise PreconditionError(f"duplicate coefficient {v} in one entry")
        seen.add(v)
        out.append(v)
    return tuple(sorted(out))


@dataclass(frozen=True)
class PolyParityMatrix:
    """J x L matrix of K-variate 0/1-coefficient polynomials.

    ``entries`` holds only the nonzero entries, keyed by (row, col) in a
    canonical sorted order; each value is a sorted tuple of exponent
    vectors.  Instances are immutable and safe to share across threads.
    """

    levels: LevelSpec
    rows: int
    cols: int
    entries: tuple[tuple[int, int, Coeffs], ...]

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise PreconditionError("matrix dimensions must be positive")
        seen = set()
        norm = []
        for j, l, coeffs in self.entries:
            if not (0 <= j < self.rows and 0 <= l < self.cols):
                raise PreconditionError(f"entry position ({j}, {l}) out of range")
            if (j, l) in seen:
                raise PreconditionError(f"entry ({j}, {l}) listed twice")
            seen.add((j, l))
            if coeffs:
                norm.append((j, l, _normalize_coeffs(coeffs, self.levels)))
        object.__setattr__(self, "entries", tuple(sorted(norm)))

    @classmethod
    def from_dict(
        cls,
        levels: Sequence[int],
        rows: int,
        cols: int,
        entries: dict[tuple[int, int], Sequence[Sequence[int]]],
    ) -> "PolyParityMatrix":
        spec = LevelSpec(tuple(int(p) for p in levels))
        packed = tuple(
            (j, l, tuple(tuple(v) for v in coeffs))
            for (j, l), coeffs in entries.items()
        )
        return cls(spec, rows, cols, packed)

    @property
    def num_levels(self) -> int:
        return self.levels.num_levels

    @cached_property
    def _index(self) -> dict[tuple[int, int], Coeffs]:
        return {(j, l): c for j, l, c in self.entries}

    def entry(self, j: int, l: int) -> Coeffs:
        """Coefficients of entry (j, l); empty tuple for a zero entry."""
        return self._index.get((j, l), ())

    def support(self) -> Iterator[tuple[int, int]]:
        for j, l, _ in self.entries:
            yield (j, l)

    def weight(self, j: int, l: int) -> int:
        return len(self.entry(j, l))


@dataclass(frozen=True)
class WeightProfile:
    """Entry-weight summary of a polynomial matrix."""

    max_weight: int
    histogram: tuple[tuple[int, int], ...]  # (weight, count) over nonzero entries
    grid: tuple[tuple[int, ...], ...]  # per-position weights, zeros included

    @property
    def is_weight1(self) -> bool:
        return self.max_weight <= 1


def weight_profile(h: PolyParityMatrix) -> WeightProfile:
    grid = [[0] * h.cols for _ in range(h.rows)]
    hist: dict[int, int] = {}
    for j, l, coeffs in h.entries:
        w = len(coeffs)
        grid[j][l] = w
        hist[w] = hist.get(w, 0) + 1
    mx = max(hist) if hist else 0
    return WeightProfile(
        max_weight=mx,
        histogram=tuple(sorted(hist.items())),
        grid=tuple(tuple(r) for r in grid),
    )


def _mixed_radix(digits: Sequence[int], radices: Sequence[int]) -> int:
    # digits/radices run innermost-first; the outermost digit is most
    # significant in the result.
    r = 0
    for d, p in zip(reversed(digits), reversed(radices)):
        r = r * p + d
    return r


def _expanded_positions(
    h: PolyParityMatrix, level: int
) -> dict[tuple[int, int], list[tuple[int, ...]]]:
    """Block positions and residual exponent vectors after expanding
    levels level+1 .. K.  ``level`` may be 0 (expand everything)."""
    outer = h.levels.ps[level:]
    q = prod(outer)
    out: dict[tuple[int, int], list[tuple[int, ...]]] = {}
    ranges = [range(p) for p in outer]
    for j, l, coeffs in h.entries:
        for vec in coeffs:
            inner, shifts = vec[:level], vec[level:]
            for combo in product(*ranges):
                r = _mixed_radix(combo, outer)
                c = _mixed_radix(
                    tuple((x + s) % p for x, s, p in zip(combo, shifts, outer)), outer
                )
                out.setdefault((j * q + r, l * q + c), []).append(inner)
    return out


def expand_to_level(h: PolyParityMatrix, level: int) -> PolyParityMatrix:
    """Expand the outer levels, leaving a ``level``-variate matrix.

    ``level == h.num_levels`` returns ``h`` unchanged; ``level == 1``
    gives the single-variate (quasi-cyclic) view.
    """
    K = h.num_levels
    if not 1 <= level <= K:
        raise PreconditionError(f"level must be in [1, {K}], got {level}")
    if level == K:
        return h
    q = prod(h.levels.ps[level:])
    positions = _expanded_positions(h, level)
    entries = tuple(
        (j, l, tuple(sorted(vecs))) for (j, l), vecs in sorted(positions.items())
    )
    return PolyParityMatrix(
        LevelSpec(h.levels.ps[:level]), h.rows * q, h.cols * q, entries
    )


def expand_full(h: PolyParityMatrix) -> "BinaryParityMatrix":
    """Fully expanded binary parity-check matrix."""
    q = prod(h.levels.ps)
    positions = _expanded_positions(h, 0)
    rows: list[list[int]] = [[] for _ in range(h.rows * q)]
    for (r, c), vecs in positions.items():
        # Distinct coefficients of one entry never collide at a binary
        # position, so each list has exactly one (empty) residual vector.
        assert len(vecs) == 1
        rows[r].append(c)
    return BinaryParityMatrix(
        rows=h.rows * q,
        cols=h.cols * q,
        row_cols=tuple(tuple(sorted(r)) for r in rows),
    )


@dataclass(frozen=True)
class BaseMatrix:
    """Grid of circulant shifts for a weight-<=1 single-level code.

    ``grid[j][l]`` is the shift of the p x p circulant block, or -1 for
    an all-zero block.
    """

    p: int
    grid: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.p < 2:
            raise PreconditionError(f"circulant size must be >= 2, got {self.p}")
        if not self.grid or not self.grid[0]:
            raise PreconditionError("base matrix must be non-empty")
        width = len(self.grid[0])
        for row in self.grid:
            if len(row) != width:
                raise PreconditionError("ragged base matrix")
            for v in row:
                if v != -1 and not 0 <= v < self.p:
                    raise PreconditionError(
                        f"shift {v} out of range [0, {self.p}) (use -1 for zero blocks)"
                    )
        object.__setattr__(
            self, "grid", tuple(tuple(int(v) for v in row) for row in self.grid)
        )

    @property
    def rows(self) -> int:
        return len(self.grid)

    @property
    def cols(self) -> int:
        return len(self.grid[0])

    def to_poly(self) -> PolyParityMatrix:
        entries = tuple(
            (j, l, ((v,),))
            for j, row in enumerate(self.grid)
            for l, v in enumerate(row)
            if v != -1
        )
        return PolyParityMatrix(LevelSpec((self.p,)), self.rows, self.cols, entries)

    def expand(self) -> "BinaryParityMatrix":
        return expand_full(self.to_poly())

    def with_shift(self, j: int, l: int, value: int) -> "BaseMatrix":
        """Copy with one existing shift replaced (support is preserved)."""
        if self.grid[j][l] == -1:
            raise PreconditionError(f"entry ({j}, {l}) is a zero block")
        rows = [list(r) for r in self.grid]
        rows[j][l] = value
        return BaseMatrix(self.p, tuple(tuple(r) for r in rows))


def base_matrix_of(h: PolyParityMatrix) -> BaseMatrix:
    """Base matrix of ``h`` viewed at level 1.

    Requires every level-1 entry of the expanded view to have weight at
    most one; raises :class:`PreconditionError` otherwise.
    """
    h1 = expand_to_level(h, 1)
    grid = [[-1] * h1.cols for _ in range(h1.rows)]
    for j, l, coeffs in h1.entries:
        if len(coeffs) > 1:
            raise PreconditionError(
                f"entry ({j}, {l}) has weight {len(coeffs)}; no base matrix exists"
            )
        grid[j][l] = coeffs[0][0]
    return BaseMatrix(h1.levels.ps[0], tuple(tuple(r) for r in grid))


@dataclass(frozen=True)
class BinaryParityMatrix:
    """Sparse binary parity-check matrix (rows of sorted column indices)."""

    rows: int
    cols: int
    row_cols: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.row_cols) != self.rows:
            raise PreconditionError("row count mismatch")
        for r in self.row_cols:
            for c in r:
                if not 0 <= c < self.cols:
                    raise PreconditionError(f"column index {c} out of range")
            if list(r) != sorted(set(r)):
                raise PreconditionError("row positions must be sorted and distinct")

    @cached_property
    def col_rows(self) -> tuple[tuple[int, ...], ...]:
        cols: list[list[int]] = [[] for _ in range(self.cols)]
        for j, r in enumerate(self.row_cols):
            for c in r:
                cols[c].append(j)
        return tuple(tuple(c) for c in cols)

    @property
    def num_edges(self) -> int:
        return sum(len(r) for r in self.row_cols)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for j, r in enumerate(self.row_cols):
            out[j, list(r)] = 1
        return out

    def to_alist(self) -> str:
        """Serialize in alist format (0-padded rows, 1-based indices)."""
        col_rows = self.col_rows
        dv = max((len(c) for c in col_rows), default=0)
        dc = max((len(r) for r in self.row_cols), default=0)
        lines = [
            f"{self.cols} {self.rows}",
            f"{dv} {dc}",
            " ".join(str(len(c)) for c in col_rows),
            " ".join(str(len(r)) for r in self.row_cols),
        ]
        for c in col_rows:
            padded = [str(j + 1) for j in c] + ["0"] * (dv - len(c))
            lines.append(" ".join(padded))
        for r in self.row_cols:
            padded = [str(c + 1) for c in r] + ["0"] * (dc - len(r))
            lines.append(" ".join(padded))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_alist(cls, text: str) -> "BinaryParityMatrix":
        try:
            tokens = text.split()
            it = iter(tokens)
            n, m = int(next(it)), int(next(it))
            dv, dc = int(next(it)), int(next(it))
            col_deg = [int(next(it)) for _ in range(n)]
            row_deg = [int(next(it)) for _ in range(m)]
            cols = []
            for d in col_deg:
                vals = [int(next(it)) for _ in range(dv)]
                cols.append([v - 1 for v in vals[:d]])
                if any(v != 0 for v in vals[d:]):
                    raise ParseError("nonzero padding in alist column block")
            rows = []
            for d in row_deg:
                vals = [int(next(it)) for _ in range(dc)]
                rows.append(tuple(sorted(v - 1 for v in vals[:d])))
                if any(v != 0 for v in vals[d:]):
                    raise ParseError("nonzero padding in alist row block")
        except (StopIteration, ValueError) as exc:
            raise ParseError(f"malformed alist: {exc}") from exc
        mat = cls(rows=m, cols=n, row_cols=tuple(rows))
        if tuple(tuple(c) for c in cols) != mat.col_rows:
            raise ParseError("alist row and column blocks disagree")
        return mat


# ---------------------------------------------------------------------------
# Serialization


def poly_to_json(h: PolyParityMatrix) -> dict:
    return {
        "levels": list(h.levels.ps),
        "rows": h.rows,
        "cols": h.cols,
        "entries": [
            {"row": j, "col": l, "coeffs": [list(v) for v in coeffs]}
            for j, l, coeffs in h.entries
        ],
    }


def poly_from_json(data: dict) -> PolyParityMatrix:
    try:
        levels = LevelSpec(tuple(int(p) for p in data["levels"]))
        entries = tuple(
            (
                int(e["row"]),
                int(e["col"]),
                tuple(tuple(int(x) for x in v) for v in e["coeffs"]),
            )
            for e in data["entries"]
        )
        return PolyParityMatrix(levels, int(data["rows"]), int(data["cols"]), entries)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, PreconditionError):
            raise
        raise ParseError(f"malformed polynomial matrix JSON: {exc}") from exc


def parse_base_matrix(text: str) -> BaseMatrix:
    """Parse the plain-text base matrix format.

    First line: ``J L p``; then J lines of L integers, -1 for zero blocks.
    """
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty base matrix file")
    head = lines[0].split()
    if len(head) != 3:
        raise ParseError(f"header must be 'J L p', got {lines[0]!r}")
    try:
        rows, cols, p = (int(x) for x in head)
    except ValueError as exc:
        raise ParseError(f"non-integer header field: {exc}") from exc
    if len(lines) - 1 != rows:
        raise ParseError(f"expected {rows} matrix rows, found {len(lines) - 1}")
    grid = []
    for ln in lines[1:]:
        vals = ln.split()
        if len(vals) != cols:
            raise ParseError(f"expected {cols} values per row, got {len(vals)}")
        try:
            grid.append(tuple(int(v) for v in vals))
        except ValueError as exc:
            raise ParseError(f"non-integer matrix value: {exc}") from exc
    try:
        return BaseMatrix(p, tuple(grid))
    except PreconditionError as exc:
        raise ParseError(str(exc)) from exc


def format_base_matrix(b: BaseMatrix) -> str:
    width = max(len(str(v)) for row in b.grid for v in row)
    lines = [f"{b.rows} {b.cols} {b.p}"]
    for row in b.grid:
        lines.append(" ".join(str(v).rjust(width) for v in row))
    return "\n".join(lines) + "\n"
