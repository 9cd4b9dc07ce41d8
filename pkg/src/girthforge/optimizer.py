"""Greedy girth maximization by single-label hill climbing.

One move changes one tree-edge label (for single-level weight-one codes:
one circulant shift).  The cost of a labeling is the weighted count of
cycles shorter than the target girth, shorter lengths weighted
geometrically heavier so that trading one short cycle for several longer
ones still lowers the cost.  ``cost_table`` reports, exactly, how the
cost changes for every possible single move; the climb repeatedly takes
a move with the largest strict improvement (ties broken by the seeded
generator) and stops when either no removable weighted cycles remain
("zero-cost") or no single move improves ("local-minimum").

Hierarchical codes honor two side constraints: sibling edges must keep
distinct labels (moves onto a sibling's label are excluded), and callers
may freeze selected edges, e.g. labels tied across duplicated rows and
columns by the design pipeline.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import count as _count
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from . import kernel
from ._flat import EdgeAddress, FlatCode, flat_of
from .algebra import BaseMatrix, LevelSpec, PolyParityMatrix
from .cycles import CycleCount
from .errors import PreconditionError
from .trees import TreeMatrix, TreeTopology, random_labeling

__all__ = [
    "CostWeights",
    "CostTable",
    "ClimbOutcome",
    "GuessAndTestResult",
    "cost_table",
    "hill_climb_weight1",
    "hill_climb_hqc",
    "guess_and_test",
    "random_base_matrix",
]


@dataclass(frozen=True)
class CostWeights:
    """Per-length weights for cycles shorter than the target girth."""

    girth: int
    by_length: tuple[tuple[int, float], ...]

    @classmethod
    def default(cls, girth: int) -> "CostWeights":
        if girth < 6 or girth % 2:
            raise PreconditionError("target girth must be even and >= 6")
        lengths = range(4, girth - 1, 2)
        return cls(
            girth,
            tuple((n, float(4 ** ((girth - 2 - n) // 2))) for n in lengths),
        )

    def as_dict(self) -> dict[int, float]:
        return dict(self.by_length)


@dataclass(frozen=True)
class CostTable:
    """Exact cost deltas of every single-label move.

    ``tables[k][e, z]`` is the change of the weighted short-cycle count
    when the level-(k+1) edge ``e`` takes label ``z``; the column of the
    current label is exactly zero.  ``w_total`` is the current weighted
    count and ``w_removable`` the portion of it some single move could
    break.  Arrays are owned by this object; treat them as read-only.
    """

    girth: int
    w_total: float
    w_removable: float
    counts: tuple[tuple[int, CycleCount], ...]
    tables: tuple[np.ndarray, ...]
    addresses: tuple[tuple[EdgeAddress, ...], ...]

    def gamma(self, level: int, edge: int, z: int) -> float:
        """Weighted short-cycle count after setting the label to ``z``."""
        return self.w_total + float(self.tables[level - 1][edge, z])


def _pack_counts(counts: dict[int, list[int]]) -> tuple[tuple[int, CycleCount], ...]:
    return tuple(
        (n, CycleCount(*counts[n])) for n in sorted(counts)
    )


def _residual_girth(counts: dict[int, list[int]], girth: int) -> int:
    for n in sorted(counts):
        if counts[n][0]:
            return n
    return girth


def cost_table(
    code: Union[BaseMatrix, TreeMatrix, PolyParityMatrix, FlatCode],
    girth: int,
    weights: Optional[CostWeights] = None,
) -> CostTable:
    flat = flat_of(code)
    w = weights or CostWeights.default(girth)
    if w.girth != girth:
        raise PreconditionError("weights built for a different target girth")
    w_total, w_rem, counts, tables = kernel.cost_tables(flat, girth, w.as_dict())
    return CostTable(
        girth,
        w_total,
        w_rem,
        _pack_counts(counts),
        tuple(tables),
        tuple(tuple(a) for a in flat.addresses),
    )


@dataclass(frozen=True)
class ClimbOutcome:
    """Result of one hill-climbing run."""

    code: Union[BaseMatrix, TreeMatrix]
    girth_target: int
    girth_reached: int  # smallest residual cycle length, girth_target if none
    terminated_by: str  # "zero-cost" | "local-minimum" | "max-iters"
    iterations: int
    final_cost: float
    final_removable: float
    residual: tuple[tuple[int, CycleCount], ...]
    seed: Optional[int]
    history: tuple[float, ...]  # weighted cost before each iteration

    @property
    def reached_target(self) -> bool:
        return self.girth_reached >= self.girth_target


def _frozen_ids(flat: FlatCode, frozen: Iterable[EdgeAddress]) -> set[tuple[int, int]]:
    out = set()
    for addr in frozen:
        kk = addr.level - 1
        out.add((kk, flat.edge_id(addr)))
    return out


def _climb(
    flat: FlatCode,
    girth: int,
    weights: CostWeights,
    rng: random.Random,
    frozen: set[tuple[int, int]],
    max_iters: int,
) -> tuple[str, int, float, float, dict[int, list[int]], list[float]]:
    wdict = weights.as_dict()
    history: list[float] = []
    K = flat.num_levels
    for it in _count():
        w_total, w_rem, counts, tables = kernel.cost_tables(flat, girth, wdict)
        history.append(w_total)
        if w_rem == 0.0:
            return "zero-cost", it, w_total, w_rem, counts, history
        # sanity: the current label's column carries no delta
        for k in range(K):
            cur = tables[k][np.arange(tables[k].shape[0]), flat.labels[k]]
            assert np.all(np.abs(cur) < 1e-9)
        best_val = 0.0
        cands: list[tuple[int, int, int]] = []
        for k in range(K):
            t = tables[k].copy()
            for group in flat.sibling_groups[k]:
                labs = [int(flat.labels[k][e]) for e in group]
                for e in group:
                    others = [z for z in labs if z != int(flat.labels[k][e])]
                    t[e, others] = np.inf
            for kk, e in frozen:
                if kk == k:
                    t[e, :] = np.inf
            mn = t.min()
            if mn > best_val:
                continue
            if mn < best_val:
                best_val = mn
                cands = []
            if mn == best_val and mn < 0.0:
                es, zs = np.nonzero(t == mn)
                cands.extend((k, int(e), int(z)) for e, z in zip(es, zs))
        if not cands or best_val >= 0.0:
            return "local-minimum", it, w_total, w_rem, counts, history
        if it >= max_iters:
            return "max-iters", it, w_total, w_rem, counts, history
        k, e, z = cands[rng.randrange(len(cands))]
        flat.set_label(k + 1, e, z)
    raise AssertionError("unreachable")


def hill_climb_weight1(
    base: BaseMatrix,
    girth: int,
    weights: Optional[CostWeights] = None,
    seed: Optional[int] = 0,
    max_iters: int = 10_000,
    rng: Optional[random.Random] = None,
) -> ClimbOutcome:
    """Greedy shift optimization of a weight-one base matrix."""
    w = weights or CostWeights.default(girth)
    r = rng if rng is not None else random.Random(seed)
    flat = flat_of(base)
    term, iters, cost, rem, counts, hist = _climb(flat, girth, w, r, set(), max_iters)
    return ClimbOutcome(
        code=flat.to_base_matrix(),
        girth_target=girth,
        girth_reached=_residual_girth(counts, girth),
        terminated_by=term,
        iterations=iters,
        final_cost=cost,
        final_removable=rem,
        residual=_pack_counts(counts),
        seed=seed,
        history=tuple(hist),
    )


def hill_climb_hqc(
    start: Union[TreeMatrix, TreeTopology],
    levels: Optional[Sequence[int]] = None,
    girth: int = 10,
    weights: Optional[CostWeights] = None,
    seed: Optional[int] = 0,
    frozen: Iterable[EdgeAddress] = (),
    max_iters: int = 10_000,
    rng: Optional[random.Random] = None,
) -> ClimbOutcome:
    """Greedy label optimization of a hierarchical code.

    ``start`` is either an initial tree matrix or a bare topology; a
    topology is labeled uniformly at random (sibling-distinct, drawn
    top-down without replacement) from the same generator that breaks
    ties later.  ``frozen`` edges keep their initial labels.
    """
    w = weights or CostWeights.default(girth)
    r = rng if rng is not None else random.Random(seed)
    if isinstance(start, TreeTopology):
        if levels is None:
            raise PreconditionError("level sizes required when starting from a topology")
        tm = random_labeling(start, levels, rng=r)
    else:
        tm = start
        if levels is not None and tuple(levels) != tm.levels.ps:
            raise PreconditionError("levels disagree with the tree matrix")
    flat = flat_of(tm)
    term, iters, cost, rem, counts, hist = _climb(
        flat, girth, w, r, _frozen_ids(flat, frozen), max_iters
    )
    return ClimbOutcome(
        code=flat.to_tree_matrix(),
        girth_target=girth,
        girth_reached=_residual_girth(counts, girth),
        terminated_by=term,
        iterations=iters,
        final_cost=cost,
        final_removable=rem,
        residual=_pack_counts(counts),
        seed=seed,
        history=tuple(hist),
    )


def random_base_matrix(
    rows: int,
    cols: int,
    p: int,
    seed: Optional[int] = None,
    rng: Optional[random.Random] = None,
    support: Optional[Sequence[Sequence[bool]]] = None,
    fix_first_row_col: bool = False,
) -> BaseMatrix:
    """Uniform random base matrix on the given support (default: full)."""
    r = rng if rng is not None else random.Random(seed)
    grid = []
    for j in range(rows):
        row = []
        for l in range(cols):
            present = True if support is None else bool(support[j][l])
            if not present:
                row.append(-1)
            elif fix_first_row_col and (j == 0 or l == 0):
                row.append(0)
            else:
                row.append(r.randrange(p))
        grid.append(tuple(row))
    return BaseMatrix(p, tuple(grid))


@dataclass(frozen=True)
class GuessAndTestResult:
    trials: int
    successes: int
    examples: tuple[BaseMatrix, ...]

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0


def guess_and_test(
    rows: int,
    cols: int,
    p: int,
    girth: int,
    trials: int,
    seed: Optional[int] = 0,
    fix_first_row_col: bool = True,
    support: Optional[Sequence[Sequence[bool]]] = None,
    max_examples: int = 3,
) -> GuessAndTestResult:
    """Count how often uniform random shifts already meet the girth.

    Draws ``trials`` independent base matrices (optionally with the first
    row and column pinned to shift 0, which costs no generality up to
    graph isomorphism) and tests each for the absence of cycles shorter
    than ``girth``.
    """
    rng = random.Random(seed)
    b0 = random_base_matrix(
        rows, cols, p, rng=rng, support=support, fix_first_row_col=fix_first_row_col
    )
    flat = flat_of(b0)
    labels = flat.labels[0]
    # entry of each level-1 edge, for the pinned first row/column
    ent = flat.edge_entry[0]
    ej = flat.ent_row[ent]
    el = flat.ent_col[ent]
    free = ~((ej == 0) | (el == 0)) if fix_first_row_col else np.ones(len(labels), bool)
    free_idx = np.nonzero(free)[0]
    if fix_first_row_col:
        labels[~free] = 0
    successes = 0
    examples: list[BaseMatrix] = []
    for _ in range(trials):
        for e in free_idx:
            labels[e] = rng.randrange(p)
        if kernel.girth_upper(flat, girth - 2) == 0:
            successes += 1
            if len(examples) < max_examples:
                examples.append(flat.to_base_matrix())
    return GuessAndTestResult(trials, successes, tuple(examples))
