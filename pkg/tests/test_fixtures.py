"""Packaged reference fixtures: drift detection and mutual consistency.

The shipped files form two documented chains:

* a three-level code that partially expands to its printed two-level and
  single-level forms and fully expands to a printed binary matrix;
* a 2x3 protograph whose inflation, optimized two-level lift, and
  squashed base matrix are all shipped and must reproduce one another.
"""

from __future__ import annotations

import hashlib

import girthforge as gf
from girthforge.pipeline import DuplicationMap

from conftest import (
    fixture_bytes,
    load_base,
    load_connectivity,
    load_poly,
    load_tree,
)

# sha256 of every shipped fixture; any edit must be deliberate and reviewed
PINNED = {
    "base12x12_p200.txt": "3f27932724da9ea5aaa36b6520e5a0c716d527c79f1128a5212029f3e906f55e",
    "base12x16_p200.txt": "62f052e18c219eea85781de95f5457094798978514d9b2991234e12b47ab10b3",
    "base16x24_p1000.txt": "5f5b9cc5915fabbdb769c375fdd7502d2ece91bce761f6a4d0904db379c152b9",
    "base44x80_p100.txt": "b585e7181017e65333e29f69a36f34ef20e79215e1832330633546b89dc6816b",
    "base8x12_p200.txt": "a45a4343ef66225c9f755fbb56f1e647c3c6f7cc879884ffdb666ee684e22255",
    "bin6x9.alist": "9f5f345f8608cb539da82c92011865cf8b327d056c2dacbcda3872b493d1a489",
    "conn11x20.txt": "424e3cdbe68aa8c5be5d8d2c9c1e37588a86dca1e8d4b7e02668df3c6d61dafa",
    "conn2x3.txt": "e6a512c5f714b8214a52e0fa46538b1adbaec5e17f9a81a4e0b41df8f02de490",
    "conn3x4_inflated.txt": "17f9e8b69a7a63af3700eedcc5198d7363e46a4687cf03c63e51139c667ea5af",
    "conn4x6.txt": "4492dec76239c1293aaa5e7e6c78b73ef25359794be2e1af58ef3109ff0a4d1d",
    "hqc1x2_p8x3x2.json": "0fd43d24bec32e0301c5788f1558a43cbe6feafa219693c7f2697f0b5def6898",
    "hqc2x4_p8x3.json": "be5bca5a55f0bac9d1e015f3847e9d9fa83e70c43dc9bf02123987caacd39956",
    "hqc3x4_p200x4.json": "5d8fdd701d6d4f01e6495b532f1c74aae49c7f456aeb0a91ff2b099ddbf9db6f",
    "poly2x3_p3.json": "cbb865c7595d3dc9c28841b3879fed20451cbc8afffbb1964597ae82b478cead",
    "poly6x12_p8.json": "09d19a9e73086c20577cef1d6813fa83fd7d83cf84960f59756e2f5cc01222b9",
}


def test_fixture_bytes_are_pinned():
    for name, want in PINNED.items():
        got = hashlib.sha256(fixture_bytes(name)).hexdigest()
        assert got == want, f"{name} drifted"


def test_no_unpinned_fixture_files():
    from importlib import resources

    shipped = {
        entry.name
        for entry in resources.files("girthforge.fixtures").iterdir()
        if entry.is_file() and not entry.name.startswith("__")
    }
    assert shipped == set(PINNED)


# ---------------------------------------------------------------------------
# Three-level chain


def test_three_level_chain_expansions_are_consistent():
    deep = gf.tree_to_poly(load_tree("hqc1x2_p8x3x2.json"))
    assert deep.levels.ps == (8, 3, 2)
    assert gf.expand_to_level(deep, 2) == load_poly("hqc2x4_p8x3.json")
    assert gf.expand_to_level(deep, 1) == load_poly("poly6x12_p8.json")


def test_single_level_fixture_expands_to_binary_fixture():
    h = load_poly("poly2x3_p3.json")
    alist = gf.BinaryParityMatrix.from_alist(
        fixture_bytes("bin6x9.alist").decode("ascii")
    )
    assert gf.expand_full(h) == alist


# ---------------------------------------------------------------------------
# Protograph chain


def test_protograph_chain_reproduces_itself():
    conn = load_connectivity("conn2x3.txt")
    inf = gf.inflate(conn)
    assert inf.inflated == load_connectivity("conn3x4_inflated.txt")

    optimized = load_tree("hqc3x4_p200x4.json")
    b_two_level = gf.base_matrix_of(
        gf.expand_to_level(gf.tree_to_poly(optimized), 1)
    )
    assert b_two_level == load_base("base12x16_p200.txt")

    # squashing the columns and then the rows reproduces both shipped stages
    cols_only = DuplicationMap(
        row_pairs=(),
        col_pairs=inf.dup.col_pairs,
        row_origin=tuple(range(inf.inflated.rows)),
        col_origin=inf.dup.col_origin,
    )
    assert gf.squash(b_two_level, cols_only) == load_base("base12x12_p200.txt")
    squashed = gf.squash(b_two_level, inf.dup)
    assert squashed == load_base("base8x12_p200.txt")
    assert gf.validate_membership(squashed, conn)


def test_chain_connectivity_helper_matches_fixture():
    assert gf.coupled_chain_connectivity(11) == load_connectivity("conn11x20.txt")
