"""Protograph-to-base-matrix design pipeline.

Starting from a small connectivity matrix C (entry = number of parallel
edges between a check type and a variable type), the pipeline:

1. ``inflate``: duplicates every row whose entries force unavoidable
   short cycles (two or more entries >= 2, or any entry >= 3), then every
   column with two or more entries >= 2 -- marks are decided on the
   original C.  Duplicates sit next to their originals.
2. ``direct_transform``: lifts the inflated connectivity to a two-level
   code with a big inner circulant (size p1, one x-shift per parallel
   edge) and an outer residue level of size p2 = 4 (one y-label per
   parallel edge, distinct within an entry).  Entries created by the
   same duplication share one y-label set, drawn once per duplication
   orbit; those y-edges are reported as tied so the optimizer keeps them
   equal.
3. girth optimization of the two-level code (see
   :func:`girthforge.optimizer.hill_climb_hqc`), tied y-edges frozen.
4. ``squash``: from the expanded-to-level-1 base matrix, keep residues
   {0, 1} of the first member and {2, 3} of the second member of every
   duplicated column pair, then the same for row pairs.  With tied
   y-sets this removes the unavoidable cycles the duplication was
   protecting against, and every kept row still has exactly C[a][b]
   blocks per cell, so the result instantiates the original protograph.

``design`` runs the whole chain with restarts and certifies the final
base matrix independently (cycle census plus protograph membership).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from ._flat import EdgeAddress
from .algebra import BaseMatrix, base_matrix_of
from .cycles import CycleReport, cycle_report
from .errors import ParseError, PreconditionError
from .optimizer import ClimbOutcome, CostWeights, hill_climb_hqc
from .trees import LabeledTree, TreeEdge, TreeMatrix, tree_to_poly
from .algebra import LevelSpec

__all__ = [
    "ConnectivityMatrix",
    "DuplicationMap",
    "InflateResult",
    "TwoLevelDesign",
    "DesignAttempt",
    "DesignResult",
    "parse_connectivity",
    "format_connectivity",
    "coupled_chain_connectivity",
    "inflate",
    "direct_transform",
    "squash",
    "validate_membership",
    "design",
]


@dataclass(frozen=True)
class ConnectivityMatrix:
    """Protograph connectivity: nonnegative edge multiplicities."""

    grid: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.grid or not self.grid[0]:
            raise PreconditionError("connectivity matrix must be non-empty")
        width = len(self.grid[0])
        for row in self.grid:
            if len(row) != width:
                raise PreconditionError("ragged connectivity matrix")
            for v in row:
                if v < 0:
                    raise PreconditionError("multiplicities must be >= 0")
        object.__setattr__(
            self, "grid", tuple(tuple(int(v) for v in row) for row in self.grid)
        )

    @property
    def rows(self) -> int:
        return len(self.grid)

    @property
    def cols(self) -> int:
        return len(self.grid[0])

    def max_entry(self) -> int:
        return max(v for row in self.grid for v in row)


def parse_connectivity(text: str) -> ConnectivityMatrix:
    """Parse the text format: header ``J L``, then J rows of L counts."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty connectivity file")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError(f"header must be 'J L', got {lines[0]!r}")
    try:
        rows, cols = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ParseError(f"non-integer header field: {exc}") from exc
    if len(lines) - 1 != rows:
        raise ParseError(f"expected {rows} rows, found {len(lines) - 1}")
    grid = []
    for ln in lines[1:]:
        vals = ln.split()
        if len(vals) != cols:
            raise ParseError(f"expected {cols} values per row, got {len(vals)}")
        try:
            grid.append(tuple(int(v) for v in vals))
        except ValueError as exc:
            raise ParseError(f"non-integer value: {exc}") from exc
        if any(v < 0 for v in grid[-1]):
            raise ParseError("multiplicities must be >= 0")
    return ConnectivityMatrix(tuple(grid))


def format_connectivity(c: ConnectivityMatrix) -> str:
    lines = [f"{c.rows} {c.cols}"]
    for row in c.grid:
        lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def coupled_chain_connectivity(n_checks: int) -> ConnectivityMatrix:
    """Chain-coupled protograph family with all variable degrees 3.

    ``n_checks`` check types connect 2*(n_checks-1) variable types: the
    first three rows open the chain (widths 2, 4, 6), interior rows slide
    a width-6 window two columns at a time, and the last row closes the
    chain with multiplicities 1,1,2,2 on the final four columns.
    """
    if n_checks < 3:
        raise PreconditionError("family needs at least 3 check types")
    n_v = 2 * (n_checks - 1)
    rows = []
    for i in range(n_checks):
        row = [0] * n_v
        if i == 0:
            row[0] = row[1] = 1
        elif i == n_checks - 1:
            row[n_v - 4] = row[n_v - 3] = 1
            row[n_v - 2] = row[n_v - 1] = 2
        elif i == 1:
            for c in range(4):
                row[c] = 1
        else:
            for c in range(2 * (i - 2), 2 * (i - 2) + 6):
                row[c] = 1
        rows.append(tuple(row))
    out = ConnectivityMatrix(tuple(rows))
    assert all(
        sum(out.grid[j][l] for j in range(out.rows)) == 3 for l in range(out.cols)
    )
    return out


# ---------------------------------------------------------------------------
# Inflation


@dataclass(frozen=True)
class DuplicationMap:
    """Where duplicates ended up, in inflated-matrix coordinates."""

    row_pairs: tuple[tuple[int, int], ...]
    col_pairs: tuple[tuple[int, int], ...]
    row_origin: tuple[int, ...]  # inflated row -> original row
    col_origin: tuple[int, ...]


@dataclass(frozen=True)
class InflateResult:
    original: ConnectivityMatrix
    row_inflated: ConnectivityMatrix  # rows duplicated only
    inflated: ConnectivityMatrix  # rows then columns duplicated
    dup: DuplicationMap


def _marked_rows(c: ConnectivityMatrix) -> list[int]:
    out = []
    for j, row in enumerate(c.grid):
        heavy = sum(1 for v in row if v >= 2)
        if heavy >= 2 or any(v >= 3 for v in row):
            out.append(j)
    return out


def _marked_cols(c: ConnectivityMatrix) -> list[int]:
    out = []
    for l in range(c.cols):
        heavy = sum(1 for j in range(c.rows) if c.grid[j][l] >= 2)
        if heavy >= 2:
            out.append(l)
    return out


def inflate(c: ConnectivityMatrix) -> InflateResult:
    """Duplicate rows and columns whose entries force unavoidable cycles.

    A row is duplicated when it has two or more entries >= 2 or any
    entry >= 3 (either pattern forces cycles no labeling removes); a
    column is duplicated when it has two or more entries >= 2.  Marks
    are taken on the original matrix; each duplicate is inserted right
    after its original.
    """
    marked_r = set(_marked_rows(c))
    marked_c = set(_marked_cols(c))
    rows = []
    row_origin = []
    row_pairs = []
    for j, row in enumerate(c.grid):
        if j in marked_r:
            row_pairs.append((len(rows), len(rows) + 1))
            rows.append(row)
            rows.append(row)
            row_origin += [j, j]
        else:
            rows.append(row)
            row_origin.append(j)
    c_rows = ConnectivityMatrix(tuple(rows))
    cols = []
    col_origin = []
    col_pairs = []
    for l in range(c.cols):
        if l in marked_c:
            col_pairs.append((len(cols), len(cols) + 1))
            cols.append(l)
            cols.append(l)
            col_origin += [l, l]
        else:
            cols.append(l)
            col_origin.append(l)
    full = ConnectivityMatrix(
        tuple(tuple(row[l] for l in cols) for row in c_rows.grid)
    )
    dup = DuplicationMap(
        tuple(row_pairs), tuple(col_pairs), tuple(row_origin), tuple(col_origin)
    )
    return InflateResult(c, c_rows, full, dup)


# ---------------------------------------------------------------------------
# Direct transform to a two-level code


@dataclass(frozen=True)
class TwoLevelDesign:
    """Random two-level lift of an inflated connectivity matrix."""

    tree: TreeMatrix
    p1: int
    p2: int
    dup: DuplicationMap
    tied: tuple[EdgeAddress, ...]  # outer-level edges the optimizer must freeze


def _duplication_orbits(
    c: ConnectivityMatrix, dup: DuplicationMap
) -> list[list[tuple[int, int]]]:
    # union-find over nonzero entry positions
    parent: dict[tuple[int, int], tuple[int, int]] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for j in range(c.rows):
        for l in range(c.cols):
            if c.grid[j][l]:
                parent[(j, l)] = (j, l)
    for r1, r2 in dup.row_pairs:
        for l in range(c.cols):
            if c.grid[r1][l]:
                union((r1, l), (r2, l))
    for c1, c2 in dup.col_pairs:
        for j in range(c.rows):
            if c.grid[j][c1]:
                union((j, c1), (j, c2))
    orbits: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for pos in parent:
        orbits.setdefault(find(pos), []).append(pos)
    return [sorted(v) for _, v in sorted(orbits.items())]


def direct_transform(
    inflated: ConnectivityMatrix,
    dup: DuplicationMap,
    p1: int,
    p2: int = 4,
    seed: Optional[int] = None,
    rng: Optional[random.Random] = None,
) -> TwoLevelDesign:
    """Random restricted two-level code over an inflated connectivity.

    Every entry of multiplicity w becomes w terms x^{a_i} y^{A_i} with
    the y-labels distinct; entries related by duplication share one
    y-label set so squashing can later cancel the duplicated structure.
    Requires w < p2 (larger multiplicities cannot carry distinct sibling
    labels, inflate the protograph further instead).
    """
    if p2 < 2:
        raise PreconditionError("outer level size must be >= 2")
    mx = inflated.max_entry()
    if mx >= p2:
        raise PreconditionError(
            f"entry multiplicity {mx} needs at least p2 = {mx + 1}; got {p2}"
        )
    r = rng if rng is not None else random.Random(seed)
    spec = LevelSpec((p1, p2))
    # one y-label set per duplication orbit
    orbits = _duplication_orbits(inflated, dup)
    y_sets: dict[tuple[int, int], tuple[int, ...]] = {}
    tied_positions: set[tuple[int, int]] = set()
    for orbit in orbits:
        w = inflated.grid[orbit[0][0]][orbit[0][1]]
        assert all(inflated.grid[j][l] == w for j, l in orbit)
        ys = tuple(sorted(r.sample(range(p2), w)))
        for pos in orbit:
            y_sets[pos] = ys
        if len(orbit) > 1:
            tied_positions.update(orbit)
    grid: list[list[Optional[LabeledTree]]] = [
        [None] * inflated.cols for _ in range(inflated.rows)
    ]
    tied: list[EdgeAddress] = []
    for j in range(inflated.rows):
        for l in range(inflated.cols):
            w = inflated.grid[j][l]
            if w == 0:
                continue
            ys = y_sets[(j, l)]
            edges = tuple(
                TreeEdge(y, (TreeEdge(r.randrange(p1)),)) for y in ys
            )
            grid[j][l] = LabeledTree(spec, edges)
            if (j, l) in tied_positions:
                tied.extend(EdgeAddress(j, l, 2, i) for i in range(w))
    tm = TreeMatrix(spec, tuple(tuple(row) for row in grid))
    return TwoLevelDesign(tm, p1, p2, dup, tuple(tied))


# ---------------------------------------------------------------------------
# Squash


def squash(b: BaseMatrix, dup: DuplicationMap, p2: int = 4) -> BaseMatrix:
    """Merge duplicated row/column pairs back to single protograph types.

    For every duplicated column pair keep block-columns {0, 1} of the
    left member and {2, 3} of the right member; then the same for row
    pairs.  Requires p2 = 4: the two kept halves partition the residues.
    """
    if p2 != 4:
        raise PreconditionError("squash is defined for p2 = 4")
    n_rt = b.rows // p2
    n_ct = b.cols // p2
    if n_rt * p2 != b.rows or n_ct * p2 != b.cols:
        raise PreconditionError("base matrix dimensions are not multiples of p2")
    for r1, r2 in dup.row_pairs:
        if not (0 <= r1 < r2 < n_rt):
            raise PreconditionError(f"row pair ({r1}, {r2}) out of range")
    for c1, c2 in dup.col_pairs:
        if not (0 <= c1 < c2 < n_ct):
            raise PreconditionError(f"column pair ({c1}, {c2}) out of range")
    left_col = {c1 for c1, _ in dup.col_pairs}
    right_col = {c2 for _, c2 in dup.col_pairs}
    keep_cols = []
    for ct in range(n_ct):
        if ct in left_col:
            keep_cols += [p2 * ct, p2 * ct + 1]
        elif ct in right_col:
            keep_cols += [p2 * ct + 2, p2 * ct + 3]
        else:
            keep_cols += list(range(p2 * ct, p2 * ct + p2))
    left_row = {r1 for r1, _ in dup.row_pairs}
    right_row = {r2 for _, r2 in dup.row_pairs}
    keep_rows = []
    for rt in range(n_rt):
        if rt in left_row:
            keep_rows += [p2 * rt, p2 * rt + 1]
        elif rt in right_row:
            keep_rows += [p2 * rt + 2, p2 * rt + 3]
        else:
            keep_rows += list(range(p2 * rt, p2 * rt + p2))
    grid = tuple(
        tuple(b.grid[r][c] for c in keep_cols) for r in keep_rows
    )
    return BaseMatrix(b.p, grid)


def validate_membership(
    b: BaseMatrix, c: ConnectivityMatrix, p2: int = 4
) -> bool:
    """Does ``b`` instantiate protograph ``c`` with p2 x p2 cells?

    True iff dimensions match and, within every cell, each row carries
    exactly C[a][b] nonzero blocks.
    """
    if b.rows != c.rows * p2 or b.cols != c.cols * p2:
        return False
    for a in range(c.rows):
        for v in range(c.cols):
            want = c.grid[a][v]
            for r in range(p2):
                got = sum(
                    1
                    for cc in range(p2)
                    if b.grid[a * p2 + r][v * p2 + cc] != -1
                )
                if got != want:
                    return False
    return True


# ---------------------------------------------------------------------------
# Full design loop


@dataclass(frozen=True)
class DesignAttempt:
    seed: int
    iterations: int
    terminated_by: str
    final_cost: float
    final_removable: float
    two_level_girth: int  # residual girth of the optimized two-level code
    squashed_girth: Optional[int]  # smallest cycle in squashed base, None if >= target
    membership_ok: bool
    certified: bool
    seconds: float


@dataclass(frozen=True)
class DesignResult:
    connectivity: ConnectivityMatrix
    inflated: ConnectivityMatrix
    dup: DuplicationMap
    p1: int
    p2: int
    girth: int
    certified: bool
    base: Optional[BaseMatrix]
    two_level: Optional[TreeMatrix]
    report: Optional[CycleReport]
    attempts: tuple[DesignAttempt, ...]


def design(
    connectivity: ConnectivityMatrix,
    p1: int,
    girth: int = 10,
    p2: int = 4,
    seed: int = 0,
    restarts: int = 8,
    weights: Optional[CostWeights] = None,
    max_iters: int = 10_000,
    threads: int = 1,
) -> DesignResult:
    """Inflate, lift, optimize and squash, then certify; retry on failure.

    Every attempt draws a fresh random lift and climbs with the tied
    y-edges frozen.  An attempt succeeds when the squashed base matrix
    has no cycle shorter than ``girth`` (verified by an independent
    cycle census) and instantiates the original protograph.  Attempt
    ``i`` uses the deterministic seed ``seed * 1000003 + i``.
    """
    inf = inflate(connectivity)
    attempts: list[DesignAttempt] = []
    for i in range(max(1, restarts)):
        run_seed = seed * 1000003 + i
        rng = random.Random(run_seed)
        t0 = time.perf_counter()
        lift = direct_transform(inf.inflated, inf.dup, p1, p2, rng=rng)
        outcome = hill_climb_hqc(
            lift.tree,
            girth=girth,
            weights=weights,
            seed=run_seed,
            frozen=lift.tied,
            max_iters=max_iters,
            rng=rng,
        )
        squashed = squash(base_matrix_of(tree_to_poly(outcome.code)), inf.dup, p2)
        report = cycle_report(squashed, cap=girth - 2, threads=threads)
        member = validate_membership(squashed, connectivity, p2)
        ok = report.girth is None and member
        dt = time.perf_counter() - t0
        attempts.append(
            DesignAttempt(
                seed=run_seed,
                iterations=outcome.iterations,
                terminated_by=outcome.terminated_by,
                final_cost=outcome.final_cost,
                final_removable=outcome.final_removable,
                two_level_girth=outcome.girth_reached,
                squashed_girth=report.girth,
                membership_ok=member,
                certified=ok,
                seconds=dt,
            )
        )
        if ok:
            return DesignResult(
                connectivity=connectivity,
                inflated=inf.inflated,
                dup=inf.dup,
                p1=p1,
                p2=p2,
                girth=girth,
                certified=True,
                base=squashed,
                two_level=outcome.code,
                report=report,
                attempts=tuple(attempts),
            )
    return DesignResult(
        connectivity=connectivity,
        inflated=inf.inflated,
        dup=inf.dup,
        p1=p1,
        p2=p2,
        girth=girth,
        certified=False,
        base=None,
        two_level=None,
        report=None,
        attempts=tuple(attempts),
    )
