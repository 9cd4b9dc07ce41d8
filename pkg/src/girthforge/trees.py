"""Labeled trees describing the coefficients of hierarchical entries.

Every nonzero entry of a K-level polynomial matrix is equivalently a
depth-K tree: edges directly under the root carry level-K labels, their
children carry level-(K-1) labels, and so on down to the leaf edges at
level 1.  Each root-to-leaf label path (e_1, ..., e_K), read leaf-first,
is one coefficient exponent vector.  Sibling edges must carry distinct
labels drawn from [0, p_k), so a node at level k has at most p_k
children; the restricted design pipeline imposes its tighter weight
bounds separately.

The tree for a polynomial is built by least-factored clustering: group
coefficients by their level-K exponent, create one level-K edge per
group, and recurse on the reduced vectors.  ``poly_to_tree`` and
``tree_to_poly`` are mutually inverse up to canonical sibling order.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import LevelSpec, PolyParityMatrix
from .errors import ParseError, PreconditionError

__all__ = [
    "TreeEdge",
    "LabeledTree",
    "TreeMatrix",
    "TreeTopology",
    "poly_to_tree",
    "tree_to_poly",
    "topology_of",
    "random_labeling",
    "tree_matrix_to_json",
    "tree_matrix_from_json",
    "topology_to_json",
    "topology_from_json",
]


@dataclass(frozen=True)
class TreeEdge:
    """One edge and the subtree hanging from its lower endpoint."""

    label: int
    children: tuple["TreeEdge", ...] = ()

    def depth(self) -> int:
        return 1 + (self.children[0].depth() if self.children else 0)


def _validate_edges(
    edges: tuple[TreeEdge, ...], level: int, ps: tuple[int, ...]
) -> None:
    # ``level`` is 1-based; edges here carry level ``level`` labels.
    p = ps[level - 1]
    if not edges:
        raise PreconditionError("tree node with no children")
    labels = [e.label for e in edges]
    if len(set(labels)) != len(labels):
        raise PreconditionError(f"repeated sibling label at level {level}")
    for e in edges:
        if not 0 <= e.label < p:
            raise PreconditionError(
                f"label {e.label} out of range [0, {p}) at level {level}"
            )
        if level == 1:
            if e.children:
                raise PreconditionError("leaf edges may not have children")
        else:
            _validate_edges(e.children, level - 1, ps)


@dataclass(frozen=True)
class LabeledTree:
    """A labeled coefficient tree for one matrix entry.

    ``edges`` are the level-K edges under the root.  The tree is stored
    canonically: every sibling list sorted by label.
    """

    levels: LevelSpec
    edges: tuple[TreeEdge, ...]

    def __post_init__(self) -> None:
        _validate_edges(self.edges, self.levels.num_levels, self.levels.ps)
        object.__setattr__(self, "edges", _canonical_edges(self.edges))

    def leaves(self) -> tuple[tuple[int, ...], ...]:
        """All coefficient vectors (i_1, ..., i_K), sorted."""
        out: list[tuple[int, ...]] = []

        def walk(edge: TreeEdge, suffix: tuple[int, ...]) -> None:
            path = (edge.label,) + suffix
            if edge.children:
                for ch in edge.children:
                    walk(ch, path)
            else:
                out.append(path)

        for top in self.edges:
            walk(top, ())
        return tuple(sorted(out))

    def num_leaves(self) -> int:
        return len(self.leaves())


def _canonical_edges(edges: tuple[TreeEdge, ...]) -> tuple[TreeEdge, ...]:
    return tuple(
        sorted(
            (TreeEdge(e.label, _canonical_edges(e.children)) for e in edges),
            key=lambda e: e.label,
        )
    )


@dataclass(frozen=True)
class TreeMatrix:
    """J x L grid of labeled trees; ``None`` marks a zero entry."""

    levels: LevelSpec
    trees: tuple[tuple[Optional[LabeledTree], ...], ...]

    def __post_init__(self) -> None:
        if not self.trees or not self.trees[0]:
            raise PreconditionError("tree matrix must be non-empty")
        width = len(self.trees[0])
        for row in self.trees:
            if len(row) != width:
                raise PreconditionError("ragged tree matrix")
            for t in row:
                if t is not None and t.levels != self.levels:
                    raise PreconditionError("tree level sizes disagree with matrix")

    @property
    def rows(self) -> int:
        return len(self.trees)

    @property
    def cols(self) -> int:
        return len(self.trees[0])

    def tree(self, j: int, l: int) -> Optional[LabeledTree]:
        return self.trees[j][l]


def tree_to_poly(tm: TreeMatrix) -> PolyParityMatrix:
    entries = tuple(
        (j, l, t.leaves())
        for j, row in enumerate(tm.trees)
        for l, t in enumerate(row)
        if t is not None
    )
    return PolyParityMatrix(tm.levels, tm.rows, tm.cols, entries)


def _cluster(vectors: Sequence[tuple[int, ...]], level: int) -> tuple[TreeEdge, ...]:
    # ``vectors`` have length ``level``; cluster on the level-th exponent
    # (the last component) and recurse on the reductions.
    if level == 1:
        return tuple(TreeEdge(v[0]) for v in sorted(vectors))
    groups: dict[int, list[tuple[int, ...]]] = {}
    for v in vectors:
        groups.setdefault(v[-1], []).append(v[:-1])
    return tuple(
        TreeEdge(top, _cluster(sub, level - 1)) for top, sub in sorted(groups.items())
    )


def poly_to_tree(h: PolyParityMatrix) -> TreeMatrix:
    """Least-factored tree form of every entry."""
    grid: list[list[Optional[LabeledTree]]] = [
        [None] * h.cols for _ in range(h.rows)
    ]
    for j, l, coeffs in h.entries:
        grid[j][l] = LabeledTree(h.levels, _cluster(coeffs, h.num_levels))
    return TreeMatrix(h.levels, tuple(tuple(r) for r in grid))


# ---------------------------------------------------------------------------
# Topologies: tree shape with the labels forgotten.

# An edge shape is the sorted tuple of its child shapes; a tree shape is
# the sorted tuple of its top-edge shapes.
Shape = tuple


def _edge_shape(edge: TreeEdge) -> Shape:
    return tuple(sorted(_edge_shape(ch) for ch in edge.children))


def _shape_depth(shape: Shape) -> int:
    return 1 + (_shape_depth(shape[0]) if shape else 0)


@dataclass(frozen=True)
class TreeTopology:
    """Shapes of all entry trees; labels and level sizes are not fixed."""

    num_levels: int
    shapes: tuple[tuple[Optional[Shape], ...], ...]

    def __post_init__(self) -> None:
        for row in self.shapes:
            for s in row:
                if s is None:
                    continue
                for top in s:
                    if _shape_depth(top) != self.num_levels:
                        raise PreconditionError("tree depths disagree within topology")

    @property
    def rows(self) -> int:
        return len(self.shapes)

    @property
    def cols(self) -> int:
        return len(self.shapes[0])


def topology_of(tm: TreeMatrix) -> TreeTopology:
    shapes = tuple(
        tuple(
            None if t is None else tuple(sorted(_edge_shape(e) for e in t.edges))
            for t in row
        )
        for row in tm.trees
    )
    return TreeTopology(tm.levels.num_levels, shapes)


def _label_shape(
    shape: Shape, level: int, ps: tuple[int, ...], rng: random.Random
) -> tuple[TreeEdge, ...]:
    p = ps[level - 1]
    n = len(shape)
    if n > p:
        raise PreconditionError(
            f"topology needs {n} sibling labels at level {level}, only {p} fit"
        )
    labels = rng.sample(range(p), n)
    return tuple(
        TreeEdge(lab, _label_shape(child, level - 1, ps, rng) if child else ())
        for lab, child in zip(labels, shape)
    )


def random_labeling(
    topology: TreeTopology,
    levels: Sequence[int] | LevelSpec,
    seed: int | None = None,
    rng: random.Random | None = None,
) -> TreeMatrix:
    """Uniform random valid labeling of a topology.

    Labels are drawn top-down, each sibling group sampled without
    replacement from [0, p_k).  Deterministic for a given seed.
    """
    spec = levels if isinstance(levels, LevelSpec) else LevelSpec(tuple(int(p) for p in levels))
    if spec.num_levels != topology.num_levels:
        raise PreconditionError(
            f"topology has {topology.num_levels} levels, got {spec.num_levels} sizes"
        )
    if rng is None:
        rng = random.Random(seed)
    K = spec.num_levels
    grid = []
    for row in topology.shapes:
        out_row = []
        for shape in row:
            if shape is None:
                out_row.append(None)
            else:
                out_row.append(LabeledTree(spec, _label_shape(shape, K, spec.ps, rng)))
        grid.append(tuple(out_row))
    return TreeMatrix(spec, tuple(grid))


# ---------------------------------------------------------------------------
# Serialization


def _edge_to_json(edge: TreeEdge) -> dict:
    out: dict = {"label": edge.label}
    if edge.children:
        out["children"] = [_edge_to_json(ch) for ch in edge.children]
    return out


def _edge_from_json(data: dict) -> TreeEdge:
    children = tuple(_edge_from_json(ch) for ch in data.get("children", ()))
    return TreeEdge(int(data["label"]), children)


def tree_matrix_to_json(tm: TreeMatrix) -> dict:
    return {
        "levels": list(tm.levels.ps),
        "rows": tm.rows,
        "cols": tm.cols,
        "trees": [
            [None if t is None else [_edge_to_json(e) for e in t.edges] for t in row]
            for row in tm.trees
        ],
    }


def tree_matrix_from_json(data: dict) -> TreeMatrix:
    try:
        spec = LevelSpec(tuple(int(p) for p in data["levels"]))
        grid = []
        for row in data["trees"]:
            out_row = []
            for t in row:
                if t is None:
                    out_row.append(None)
                else:
                    out_row.append(
                        LabeledTree(spec, tuple(_edge_from_json(e) for e in t))
                    )
            grid.append(tuple(out_row))
        tm = TreeMatrix(spec, tuple(grid))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, PreconditionError):
            raise
        raise ParseError(f"malformed tree matrix JSON: {exc}") from exc
    if tm.rows != int(data.get("rows", tm.rows)) or tm.cols != int(
        data.get("cols", tm.cols)
    ):
        raise ParseError("tree matrix JSON dimensions disagree with grid")
    return tm


def _shape_to_json(shape: Shape) -> list:
    return [_shape_to_json(ch) for ch in shape]


def _shape_from_json(data: list) -> Shape:
    return tuple(sorted(_shape_from_json(ch) for ch in data))


def topology_to_json(t: TreeTopology) -> dict:
    return {
        "num_levels": t.num_levels,
        "shapes": [
            [None if s is None else _shape_to_json(list(s)) for s in row]
            for row in t.shapes
        ],
    }


def topology_from_json(data: dict) -> TreeTopology:
    try:
        shapes = tuple(
            tuple(None if s is None else _shape_from_json(s) for s in row)
            for row in data["shapes"]
        )
        return TreeTopology(int(data["num_levels"]), shapes)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, PreconditionError):
            raise
        raise ParseError(f"malformed topology JSON: {exc}") from exc
