"""Flattened array form of a code, shared by both analysis kernels.

The public types (:class:`~girthforge.algebra.PolyParityMatrix`,
:class:`~girthforge.trees.TreeMatrix`, :class:`~girthforge.algebra.BaseMatrix`)
are immutable.  Kernels instead work on a :class:`FlatCode`: numpy arrays
indexing entries, coefficients (tree leaves) and tree edges.  Edge and
coefficient ids are assigned once at build time -- entry-major
(row-major over the grid), then parent-major, then label-minor within a
sibling group -- and stay fixed while an optimizer rewrites labels in
place.  The per-entry edge index used in public addresses is the
position of the edge in that same enumeration restricted to its entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import BaseMatrix, LevelSpec, PolyParityMatrix
from .errors import PreconditionError
from .trees import LabeledTree, TreeEdge, TreeMatrix, poly_to_tree

__all__ = ["FlatCode", "EdgeAddress", "flat_from_tree_matrix", "flat_from_base", "flat_of"]


@dataclass(frozen=True)
class EdgeAddress:
    """Stable public name for one tree edge.

    ``index`` counts level-``level`` edges of entry (row, col) in build
    order (parent-major, label-minor at build time); it does not change
    when labels do.
    """

    row: int
    col: int
    level: int  # 1-based
    index: int


# Skeleton node: (edge_id, children) with children a tuple of nodes.
_Node = tuple[int, tuple]


class FlatCode:
    """Mutable array view of a code.  Internal to the package."""

    __slots__ = (
        "num_levels",
        "ps",
        "rows",
        "cols",
        "n_entries",
        "n_coeffs",
        "ent_row",
        "ent_col",
        "coeff_ptr",
        "coeff_entry",
        "edge_of",
        "labels",
        "edge_entry",
        "sibling_groups",
        "rowc_ptr",
        "rowc",
        "colc_ptr",
        "colc",
        "skeletons",
        "addresses",
        "_addr_to_edge",
    )

    def __init__(self) -> None:
        self.edge_of: list[np.ndarray] = []
        self.labels: list[np.ndarray] = []
        self.edge_entry: list[np.ndarray] = []
        self.sibling_groups: list[list[tuple[int, ...]]] = []
        self.skeletons: dict[tuple[int, int], tuple[_Node, ...]] = {}
        self.addresses: list[list[EdgeAddress]] = []
        self._addr_to_edge: dict[EdgeAddress, tuple[int, int]] = {}

    # -- addressing ----------------------------------------------------

    def edge_id(self, addr: EdgeAddress) -> int:
        try:
            return self._addr_to_edge[addr][1]
        except KeyError:
            raise PreconditionError(f"no such edge: {addr}") from None

    def address_of(self, level: int, edge: int) -> EdgeAddress:
        return self.addresses[level - 1][edge]

    def label_of(self, addr: EdgeAddress) -> int:
        return int(self.labels[addr.level - 1][self.edge_id(addr)])

    def set_label(self, level: int, edge: int, value: int) -> None:
        self.labels[level - 1][edge] = value

    def siblings_of(self, level: int, edge: int) -> tuple[int, ...]:
        for group in self.sibling_groups[level - 1]:
            if edge in group:
                return group
        return (edge,)

    # -- reconstruction -------------------------------------------------

    def to_tree_matrix(self) -> TreeMatrix:
        """Tree matrix with the current labels (canonical sibling order)."""
        spec = LevelSpec(tuple(self.ps))
        grid: list[list[Optional[LabeledTree]]] = [
            [None] * self.cols for _ in range(self.rows)
        ]

        def build(node: _Node, level: int) -> TreeEdge:
            edge_id, children = node
            label = int(self.labels[level - 1][edge_id])
            return TreeEdge(
                label, tuple(build(ch, level - 1) for ch in children)
            )

        for (j, l), tops in self.skeletons.items():
            edges = tuple(build(n, self.num_levels) for n in tops)
            grid[j][l] = LabeledTree(spec, edges)
        return TreeMatrix(spec, tuple(tuple(r) for r in grid))

    def to_base_matrix(self) -> BaseMatrix:
        if self.num_levels != 1:
            raise PreconditionError("only single-level codes have a base matrix here")
        grid = [[-1] * self.cols for _ in range(self.rows)]
        for e in range(self.n_entries):
            lo, hi = self.coeff_ptr[e], self.coeff_ptr[e + 1]
            if hi - lo != 1:
                raise PreconditionError("entry weight above one; no base matrix")
            c = lo
            grid[self.ent_row[e]][self.ent_col[e]] = int(
                self.labels[0][self.edge_of[0][c]]
            )
        return BaseMatrix(int(self.ps[0]), tuple(tuple(r) for r in grid))

    def exponent_vector(self, coeff: int) -> tuple[int, ...]:
        return tuple(
            int(self.labels[k][self.edge_of[k][coeff]])
            for k in range(self.num_levels)
        )

    def clone(self) -> "FlatCode":
        out = FlatCode()
        for name in self.__slots__:
            if name in ("edge_of", "labels", "edge_entry"):
                setattr(out, name, [a.copy() for a in getattr(self, name)])
            elif name == "sibling_groups":
                out.sibling_groups = [list(g) for g in self.sibling_groups]
            else:
                setattr(out, name, getattr(self, name))
        return out


def flat_from_tree_matrix(tm: TreeMatrix) -> FlatCode:
    K = tm.levels.num_levels
    f = FlatCode()
    f.num_levels = K
    f.ps = [int(p) for p in tm.levels.ps]
    f.rows, f.cols = tm.rows, tm.cols

    ent_row: list[int] = []
    ent_col: list[int] = []
    coeff_ptr = [0]
    coeff_entry: list[int] = []
    edge_of: list[list[int]] = [[] for _ in range(K)]
    labels: list[list[int]] = [[] for _ in range(K)]
    edge_entry: list[list[int]] = [[] for _ in range(K)]
    groups: list[list[tuple[int, ...]]] = [[] for _ in range(K)]
    per_entry_counts = [0] * K  # running per-entry edge index, reset per entry
    f.addresses = [[] for _ in range(K)]

    def new_edge(level: int, label: int, entry: int, j: int, l: int) -> int:
        kk = level - 1
        eid = len(labels[kk])
        labels[kk].append(label)
        edge_entry[kk].append(entry)
        addr = EdgeAddress(j, l, level, per_entry_counts[kk])
        per_entry_counts[kk] += 1
        f.addresses[kk].append(addr)
        f._addr_to_edge[addr] = (kk, eid)
        return eid

    entry_id = 0
    for j in range(tm.rows):
        for l in range(tm.cols):
            t = tm.tree(j, l)
            if t is None:
                continue
            ent_row.append(j)
            ent_col.append(l)
            per_entry_counts = [0] * K

            def walk(edges: tuple[TreeEdge, ...], level: int, above: list[int]) -> tuple:
                nodes = []
                ids = []
                for e in edges:
                    eid = new_edge(level, e.label, entry_id, j, l)
                    ids.append(eid)
                    chain = above + [eid]
                    if level == 1:
                        c = len(coeff_entry)
                        coeff_entry.append(entry_id)
                        # chain holds edge ids from level K down to 1
                        for kk, ed in enumerate(reversed(chain)):
                            edge_of[kk].append(ed)
                        nodes.append((eid, ()))
                    else:
                        children = walk(e.children, level - 1, chain)
                        nodes.append((eid, children))
                if len(ids) > 1:
                    groups[level - 1].append(tuple(ids))
                return tuple(nodes)

            f.skeletons[(j, l)] = walk(t.edges, K, [])
            coeff_ptr.append(len(coeff_entry))
            entry_id += 1

    f.n_entries = entry_id
    f.n_coeffs = len(coeff_entry)
    if f.n_entries == 0:
        raise PreconditionError("code has no nonzero entries")
    f.ent_row = np.asarray(ent_row, dtype=np.int32)
    f.ent_col = np.asarray(ent_col, dtype=np.int32)
    f.coeff_ptr = np.asarray(coeff_ptr, dtype=np.int32)
    f.coeff_entry = np.asarray(coeff_entry, dtype=np.int32)
    f.edge_of = [np.asarray(a, dtype=np.int32) for a in edge_of]
    f.labels = [np.asarray(a, dtype=np.int64) for a in labels]
    f.edge_entry = [np.asarray(a, dtype=np.int32) for a in edge_entry]
    f.sibling_groups = groups

    # Coefficients of a row/column, in ascending id order.
    rowc: list[list[int]] = [[] for _ in range(f.rows)]
    colc: list[list[int]] = [[] for _ in range(f.cols)]
    for c in range(f.n_coeffs):
        e = coeff_entry[c]
        rowc[ent_row[e]].append(c)
        colc[ent_col[e]].append(c)
    f.rowc_ptr = np.asarray(
        np.cumsum([0] + [len(r) for r in rowc]), dtype=np.int32
    )
    f.rowc = np.asarray([c for r in rowc for c in r], dtype=np.int32)
    f.colc_ptr = np.asarray(
        np.cumsum([0] + [len(c) for c in colc]), dtype=np.int32
    )
    f.colc = np.asarray([x for c in colc for x in c], dtype=np.int32)
    return f


def flat_from_base(b: BaseMatrix) -> FlatCode:
    return flat_from_tree_matrix(poly_to_tree(b.to_poly()))


def flat_of(obj) -> FlatCode:
    """Flatten any of the public code descriptions."""
    if isinstance(obj, FlatCode):
        return obj
    if isinstance(obj, BaseMatrix):
        return flat_from_base(obj)
    if isinstance(obj, TreeMatrix):
        return flat_from_tree_matrix(obj)
    if isinstance(obj, PolyParityMatrix):
        return flat_from_tree_matrix(poly_to_tree(obj))
    raise PreconditionError(f"cannot flatten {type(obj).__name__}")
