"""Shared test helpers: packaged fixtures and random code generators."""

from __future__ import annotations

import json
import random
from importlib import resources

import girthforge as gf


# ---------------------------------------------------------------------------
# Packaged fixture loading


def fixture_text(name: str) -> str:
    return (
        resources.files("girthforge.fixtures").joinpath(name).read_text(encoding="utf-8")
    )


def fixture_bytes(name: str) -> bytes:
    return resources.files("girthforge.fixtures").joinpath(name).read_bytes()


def fixture_json(name: str) -> dict:
    return json.loads(fixture_text(name))


def load_base(name: str) -> gf.BaseMatrix:
    return gf.parse_base_matrix(fixture_text(name))


def load_poly(name: str) -> gf.PolyParityMatrix:
    return gf.poly_from_json(fixture_json(name))


def load_tree(name: str) -> gf.TreeMatrix:
    return gf.tree_matrix_from_json(fixture_json(name))


def load_connectivity(name: str) -> gf.ConnectivityMatrix:
    return gf.parse_connectivity(fixture_text(name))


# ---------------------------------------------------------------------------
# Random code generators (plain `random.Random`, deterministic per seed)


def random_weight1_poly(
    rng: random.Random,
    rows: int,
    cols: int,
    p: int,
    density: float = 1.0,
) -> gf.PolyParityMatrix:
    """Random single-level matrix with weight 0/1 entries."""
    entries = {}
    for j in range(rows):
        for l in range(cols):
            if rng.random() < density:
                entries[(j, l)] = [(rng.randrange(p),)]
    if not entries:
        entries[(0, 0)] = [(rng.randrange(p),)]
    return gf.PolyParityMatrix.from_dict([p], rows, cols, entries)


def random_hqc_poly(
    rng: random.Random,
    rows: int,
    cols: int,
    p1: int,
    p2: int,
    max_weight: int = 2,
    density: float = 0.9,
) -> gf.PolyParityMatrix:
    """Random two-level matrix with entry weights up to ``max_weight``.

    Coefficient vectors inside one entry are distinct by construction
    (sampled without replacement from the full exponent grid).
    """
    all_vecs = [(a, b) for a in range(p1) for b in range(p2)]
    entries = {}
    for j in range(rows):
        for l in range(cols):
            if rng.random() >= density:
                continue
            w = rng.randint(1, max_weight)
            entries[(j, l)] = rng.sample(all_vecs, w)
    if not entries:
        entries[(0, 0)] = [all_vecs[0]]
    return gf.PolyParityMatrix.from_dict([p1, p2], rows, cols, entries)


def report_girth(report: gf.CycleReport) -> int | None:
    """Girth implied by a census, None when no cycle was found under the cap."""
    return report.girth
