"""Cycle and girth analysis for multi-level quasi-cyclic codes.

Cycles in the fully expanded binary matrix correspond to closed
alternating paths over the nonzero polynomial entries.  A path of even
length n visits coefficients (entry plus exponent vector) at positions
t = 0..n-1; positions 2i and 2i+1 share a column, positions 2i+1 and
2i+2 (wrapping) share a row, and consecutive visits to the same entry
must use different coefficients, including the wrap pair.  Position t
carries sign -1 for even t, +1 for odd t; the path corresponds to a
cycle iff for every level k the signed sum of level-k exponents is 0
modulo p_k.  Girth g means no such satisfied path of length < g exists.

Two index transforms keep those conditions intact: rotation by an even
offset and reflection about an odd offset.  Counting is therefore up to
this symmetry group (2 * (n/2) transforms); each equivalence class is
reported once.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from . import kernel
from ._flat import FlatCode, flat_of
from .algebra import (
    BaseMatrix,
    BinaryParityMatrix,
    LevelSpec,
    PolyParityMatrix,
)
from .errors import PreconditionError
from .trees import TreeMatrix, tree_to_poly

__all__ = [
    "Path",
    "PathElement",
    "CycleCount",
    "CycleReport",
    "InevitableCycle",
    "alternating_sums",
    "is_cycle",
    "validate_path",
    "multiplicities",
    "canonical_path",
    "enumerate_paths",
    "cycle_report",
    "brute_force_girth",
    "inevitable_cycles",
]

CodeLike = Union[PolyParityMatrix, BaseMatrix, TreeMatrix, FlatCode]


@dataclass(frozen=True)
class Path:
    """Closed alternating path: per-position entry and exponent vector."""

    entries: tuple[tuple[int, int], ...]
    coeffs: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.entries)
        if n != len(self.coeffs):
            raise PreconditionError("entries and coeffs lengths differ")
        if n < 4 or n % 2:
            raise PreconditionError(f"path length must be even and >= 4, got {n}")

    @property
    def length(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class PathElement:
    """One distinct element of a path and its signed occurrence count."""

    entry: tuple[int, int]
    coeff: tuple[int, ...]
    kappa: int


def alternating_sums(path: Path) -> tuple[int, ...]:
    """Signed exponent sums per level (sign -1 at even positions)."""
    K = len(path.coeffs[0])
    sums = [0] * K
    for t, vec in enumerate(path.coeffs):
        s = -1 if t % 2 == 0 else 1
        for k in range(K):
            sums[k] += s * vec[k]
    return tuple(sums)


def is_cycle(path: Path, levels: Sequence[int] | LevelSpec) -> bool:
    ps = tuple(levels)
    sums = alternating_sums(path)
    if len(sums) != len(ps):
        raise PreconditionError("level count mismatch between path and sizes")
    return all(s % p == 0 for s, p in zip(sums, ps))


def validate_path(h: PolyParityMatrix, path: Path) -> None:
    """Raise :class:`PreconditionError` unless the path is structurally
    valid over ``h`` (membership, alternation, closure, repeat rules)."""
    n = path.length
    for t, ((j, l), vec) in enumerate(zip(path.entries, path.coeffs)):
        if vec not in h.entry(j, l):
            raise PreconditionError(
                f"position {t}: coefficient {vec} not in entry ({j}, {l})"
            )
    for t in range(0, n, 2):
        if path.entries[t][1] != path.entries[t + 1][1]:
            raise PreconditionError(f"positions {t},{t + 1} must share a column")
    for t in range(1, n, 2):
        u = (t + 1) % n
        if path.entries[t][0] != path.entries[u][0]:
            raise PreconditionError(f"positions {t},{u} must share a row")
    for t in range(n):
        u = (t + 1) % n
        if path.entries[t] == path.entries[u] and path.coeffs[t] == path.coeffs[u]:
            raise PreconditionError(
                f"positions {t},{u} repeat the same coefficient of one entry"
            )


def multiplicities(path: Path) -> tuple[PathElement, ...]:
    """Distinct elements with their signed counts, in first-visit order."""
    order: list[tuple[tuple[int, int], tuple[int, ...]]] = []
    kap: dict[tuple, int] = {}
    for t, (ent, vec) in enumerate(zip(path.entries, path.coeffs)):
        key = (ent, vec)
        if key not in kap:
            kap[key] = 0
            order.append(key)
        kap[key] += -1 if t % 2 == 0 else 1
    return tuple(PathElement(ent, vec, kap[(ent, vec)]) for ent, vec in order)


def canonical_path(path: Path) -> Path:
    """Least representative under even rotations and odd reflections."""
    n = path.length
    seq = list(zip(path.entries, path.coeffs))
    best = seq
    for r in range(2, n, 2):
        cand = [seq[(i + r) % n] for i in range(n)]
        if cand < best:
            best = cand
    for r in range(1, n, 2):
        cand = [seq[(r - i) % n] for i in range(n)]
        if cand < best:
            best = cand
    return Path(tuple(e for e, _ in best), tuple(v for _, v in best))


# ---------------------------------------------------------------------------
# Reference enumeration (independent of the kernels; used as an oracle).


def enumerate_paths(
    h: PolyParityMatrix, length: int, only_cycles: bool = False
) -> Iterator[Path]:
    """Yield canonical closed paths of exactly ``length`` over ``h``.

    Straightforward recursive search; intended for small inputs and for
    cross-checking the kernels, not for production analysis.
    """
    if length < 4 or length % 2:
        raise PreconditionError("length must be even and >= 4")
    ps = h.levels.ps
    # element = (j, l, vec); ordering of these keys fixes the canonical
    # representative of each symmetry class
    row_elems: dict[int, list] = {}
    col_elems: dict[int, list] = {}
    for j, l, coeffs in h.entries:
        for vec in coeffs:
            el = (j, l, vec)
            row_elems.setdefault(j, []).append(el)
            col_elems.setdefault(l, []).append(el)
    all_elems = sorted(e for els in row_elems.values() for e in els)

    seq: list = [None] * length

    def canonical(n: int) -> bool:
        for r in range(2, n, 2):
            cand = [seq[(i + r) % n] for i in range(n)]
            if cand < seq[:n]:
                return False
        for r in range(1, n, 2):
            cand = [seq[(r - i) % n] for i in range(n)]
            if cand < seq[:n]:
                return False
        return True

    def rec(t: int) -> Iterator[Path]:
        first = seq[0]
        prev = seq[t - 1]
        if t % 2 == 1:
            cands = col_elems.get(prev[1], ())
        else:
            cands = row_elems.get(prev[0], ())
        for el in cands:
            if el < first or el == prev:
                continue
            seq[t] = el
            if t == length - 1:
                # wrap: share the starting row, and when the wrap pair
                # lands on the starting entry it must use another coeff
                if el[0] != first[0] or el == first:
                    continue
                if not canonical(length):
                    continue
                p = Path(
                    tuple((e[0], e[1]) for e in seq),
                    tuple(e[2] for e in seq),
                )
                if only_cycles and not is_cycle(p, ps):
                    continue
                yield p
            else:
                yield from rec(t + 1)

    for start in all_elems:
        seq[0] = start
        yield from rec(1)


# ---------------------------------------------------------------------------
# Kernel-backed reporting


@dataclass(frozen=True)
class CycleCount:
    total: int
    locked: int  # no single level-k label change can break them (mod p_k)
    inevitable: int  # cycles for every labeling and every level size


@dataclass(frozen=True)
class CycleReport:
    cap: int
    counts: tuple[tuple[int, CycleCount], ...]  # (length, counts), ascending
    girth: Optional[int]  # smallest cycle length found, None if none <= cap
    witnesses: tuple[Path, ...]

    @property
    def girth_at_least(self) -> int:
        return self.girth if self.girth is not None else self.cap + 2

    def count(self, length: int) -> CycleCount:
        for n, c in self.counts:
            if n == length:
                return c
        raise KeyError(length)


def _count_chunk(args):
    flat, cap, max_wit, lo, hi = args
    return kernel.count_cycles(flat, cap, max_wit, lo, hi)


def cycle_report(
    code: CodeLike,
    cap: int = 12,
    max_witnesses: int = 0,
    threads: int = 1,
) -> CycleReport:
    """Count cycles of each even length 4..cap, with classification.

    ``threads > 1`` partitions the search by starting coefficient across
    processes; results are identical to the single-process run.
    """
    flat = flat_of(code)
    if threads <= 1 or flat.n_coeffs < 4 * threads:
        counts, wits = kernel.count_cycles(flat, cap, max_witnesses)
    else:
        bounds = [
            (flat.n_coeffs * i) // threads for i in range(threads + 1)
        ]
        jobs = [
            (flat, cap, max_witnesses, bounds[i], bounds[i + 1])
            for i in range(threads)
            if bounds[i] < bounds[i + 1]
        ]
        counts = {n: [0, 0, 0] for n in range(4, cap - cap % 2 + 1, 2)}
        wits = {n: [] for n in counts}
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for c_part, w_part in pool.map(_count_chunk, jobs):
                for n, row in c_part.items():
                    counts[n] = [a + b for a, b in zip(counts[n], row)]
                for n, lst in w_part.items():
                    wits[n].extend(lst)
        if max_witnesses:
            wits = {n: lst[:max_witnesses] for n, lst in wits.items()}
    girth = None
    packed = []
    for n in sorted(counts):
        tot, lck, inev = counts[n]
        packed.append((n, CycleCount(tot, lck, inev)))
        if tot and girth is None:
            girth = n
    witness_paths = tuple(
        _path_from_ids(flat, ids) for n in sorted(wits) for ids in wits[n]
    )
    return CycleReport(cap, tuple(packed), girth, witness_paths)


def _path_from_ids(flat: FlatCode, ids: Sequence[int]) -> Path:
    entries = []
    coeffs = []
    for c in ids:
        e = int(flat.coeff_entry[c])
        entries.append((int(flat.ent_row[e]), int(flat.ent_col[e])))
        coeffs.append(flat.exponent_vector(c))
    return Path(tuple(entries), tuple(coeffs))


def brute_force_girth(
    h: BinaryParityMatrix, cap: Optional[int] = None
) -> Optional[int]:
    """Exact girth of the Tanner graph by breadth-first search.

    Vertices are checks then variables; returns None when the graph is
    acyclic (or has no cycle of length <= cap when ``cap`` is given).
    Meant for modest sizes; cost grows as checks x edges.
    """
    m, n = h.rows, h.cols
    adj: list[list[int]] = [[] for _ in range(m + n)]
    for j, row in enumerate(h.row_cols):
        for c in row:
            adj[j].append(m + c)
            adj[m + c].append(j)
    best: float = cap + 1 if cap is not None else float("inf")
    for s in range(m):
        dist = {s: 0}
        parent = {s: -1}
        q = deque([s])
        while q:
            u = q.popleft()
            du = dist[u]
            if 2 * du + 1 >= best:
                continue
            for w in adj[u]:
                if w == parent[u]:
                    continue
                if w in dist:
                    cand = du + dist[w] + 1
                    if cand < best:
                        best = cand
                else:
                    dist[w] = du + 1
                    parent[w] = u
                    q.append(w)
    if cap is not None:
        return int(best) if best <= cap else None
    return int(best) if best != float("inf") else None


# ---------------------------------------------------------------------------
# Structurally unavoidable cycles


@dataclass(frozen=True)
class InevitableCycle:
    """A cycle present for every labeling and all level sizes."""

    kind: str  # "weight3_entry" | "row_pair" | "column_pair"
    entries: tuple[tuple[int, int], ...]
    witness: Path


def _as_poly(code: CodeLike) -> PolyParityMatrix:
    if isinstance(code, PolyParityMatrix):
        return code
    if isinstance(code, BaseMatrix):
        return code.to_poly()
    if isinstance(code, TreeMatrix):
        return tree_to_poly(code)
    if isinstance(code, FlatCode):
        return tree_to_poly(code.to_tree_matrix())
    raise PreconditionError(f"unsupported code description {type(code).__name__}")


def inevitable_cycles(code: CodeLike) -> tuple[InevitableCycle, ...]:
    """Diagnose cycle structures no relabeling can remove.

    An entry with three or more coefficients forces a 6-cycle; two
    entries of weight >= 2 sharing a row or a column force an 8-cycle.
    Every returned witness has all signed element counts equal to zero,
    so it satisfies the cycle condition for arbitrary labels and sizes.
    """
    h = _as_poly(code)
    out: list[InevitableCycle] = []
    heavy_by_row: dict[int, list] = {}
    heavy_by_col: dict[int, list] = {}
    for j, l, coeffs in h.entries:
        if len(coeffs) >= 3:
            a1, a2, a3 = coeffs[0], coeffs[1], coeffs[2]
            w = Path(
                tuple([(j, l)] * 6),
                (a1, a2, a3, a1, a2, a3),
            )
            out.append(InevitableCycle("weight3_entry", ((j, l),), w))
        if len(coeffs) >= 2:
            heavy_by_row.setdefault(j, []).append((j, l, coeffs))
            heavy_by_col.setdefault(l, []).append((j, l, coeffs))
    for j, ents in sorted(heavy_by_row.items()):
        for i in range(len(ents)):
            for k in range(i + 1, len(ents)):
                (j1, l1, ca), (j2, l2, cb) = ents[i], ents[k]
                a1, a2 = ca[0], ca[1]
                b1, b2 = cb[0], cb[1]
                e1, e2 = (j1, l1), (j2, l2)
                w = Path(
                    (e1, e1, e2, e2, e1, e1, e2, e2),
                    (a1, a2, b1, b2, a2, a1, b2, b1),
                )
                out.append(InevitableCycle("row_pair", (e1, e2), w))
    for l, ents in sorted(heavy_by_col.items()):
        for i in range(len(ents)):
            for k in range(i + 1, len(ents)):
                (j1, l1, ca), (j2, l2, cb) = ents[i], ents[k]
                a1, a2 = ca[0], ca[1]
                b1, b2 = cb[0], cb[1]
                e1, e2 = (j1, l1), (j2, l2)
                w = Path(
                    (e1, e2, e2, e1, e1, e2, e2, e1),
                    (a1, b1, b2, a1, a2, b2, b1, a2),
                )
                out.append(InevitableCycle("column_pair", (e1, e2), w))
    for diag in out:
        validate_path(h, diag.witness)
        assert all(el.kappa == 0 for el in multiplicities(diag.witness))
    return tuple(out)
