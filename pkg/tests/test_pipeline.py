"""Protograph pipeline: inflate, lift, squash, membership, full design."""

from __future__ import annotations

import pytest

import girthforge as gf
from girthforge.errors import ParseError, PreconditionError
from girthforge.pipeline import DuplicationMap

from conftest import load_base, load_connectivity


CHAIN = gf.parse_connectivity("2 3\n3 2 1\n0 2 1\n")


# ---------------------------------------------------------------------------
# Connectivity matrices


def test_connectivity_text_round_trip():
    text = gf.format_connectivity(CHAIN)
    assert gf.parse_connectivity(text) == CHAIN
    assert CHAIN.rows == 2 and CHAIN.cols == 3 and CHAIN.max_entry() == 3


@pytest.mark.parametrize(
    "bad",
    ["", "2 2\n1 1\n", "1 2\n1 1 1\n", "1 1\n-1\n", "1 1\nx\n"],
)
def test_connectivity_parser_rejects_malformed_text(bad):
    with pytest.raises(ParseError):
        gf.parse_connectivity(bad)


def test_coupled_chain_family_matches_fixture():
    assert gf.coupled_chain_connectivity(11) == load_connectivity("conn11x20.txt")


def test_coupled_chain_family_scales():
    for n in (3, 4, 5):
        c = gf.coupled_chain_connectivity(n)
        assert c.rows == n
        # banded: every variable type touches at most a few check types
        for l in range(c.cols):
            assert sum(1 for j in range(c.rows) if c.grid[j][l]) >= 1


# ---------------------------------------------------------------------------
# Inflation


def test_inflate_duplicates_marked_rows_and_columns():
    inf = gf.inflate(CHAIN)
    assert inf.original == CHAIN
    # row 0 has an entry >= 3, row 1 has only one entry >= 2
    assert inf.dup.row_pairs == ((0, 1),)
    # column 1 is the only column with two entries >= 2
    assert inf.dup.col_pairs == ((1, 2),)
    assert inf.dup.row_origin == (0, 0, 1)
    assert inf.dup.col_origin == (0, 1, 1, 2)
    assert inf.inflated == load_connectivity("conn3x4_inflated.txt")


def test_inflate_row_marking_rules():
    # two entries >= 2 marks a row even without an entry >= 3
    c = gf.parse_connectivity("2 3\n2 2 0\n1 1 1\n")
    inf = gf.inflate(c)
    assert inf.dup.row_pairs == ((0, 1),)
    # a single >= 3 entry marks a row too
    c2 = gf.parse_connectivity("1 3\n3 1 0\n")
    assert gf.inflate(c2).dup.row_pairs == ((0, 1),)


def test_inflate_leaves_clean_matrices_alone():
    c = gf.parse_connectivity("2 3\n1 2 1\n1 0 1\n")
    inf = gf.inflate(c)
    assert inf.inflated == c
    assert inf.dup.row_pairs == () and inf.dup.col_pairs == ()


def test_inflate_column_rule_needs_two_heavy_entries():
    # single column entry of 2: no column mark; the row is not marked either
    c = gf.parse_connectivity("2 2\n2 1\n0 1\n")
    inf = gf.inflate(c)
    assert inf.dup.col_pairs == ()


# ---------------------------------------------------------------------------
# Direct transform


def test_direct_transform_produces_restricted_two_level_lift():
    inf = gf.inflate(CHAIN)
    lift = gf.direct_transform(inf.inflated, inf.dup, p1=50, p2=4, seed=0)
    tm = lift.tree
    assert tm.levels.ps == (50, 4)
    for j in range(inf.inflated.rows):
        for l in range(inf.inflated.cols):
            w = inf.inflated.grid[j][l]
            t = tm.tree(j, l)
            if w == 0:
                assert t is None
                continue
            # restricted form: w outer edges with one leaf each
            assert len(t.edges) == w
            assert all(len(e.children) == 1 for e in t.edges)


def test_direct_transform_shares_outer_labels_across_duplicates():
    inf = gf.inflate(CHAIN)
    lift = gf.direct_transform(inf.inflated, inf.dup, p1=50, p2=4, seed=5)
    tm = lift.tree

    def yset(j, l):
        t = tm.tree(j, l)
        return None if t is None else tuple(e.label for e in t.edges)

    r1, r2 = inf.dup.row_pairs[0]
    for l in range(inf.inflated.cols):
        assert yset(r1, l) == yset(r2, l)
    c1, c2 = inf.dup.col_pairs[0]
    for j in range(inf.inflated.rows):
        assert yset(j, c1) == yset(j, c2)
    # every duplicated position appears among the tied (frozen) addresses
    tied_positions = {(a.row, a.col) for a in lift.tied}
    for l in range(inf.inflated.cols):
        if yset(r1, l) is not None:
            assert (r1, l) in tied_positions and (r2, l) in tied_positions


def test_direct_transform_rejects_multiplicity_at_or_above_outer_size():
    inf = gf.inflate(CHAIN)  # keeps the weight-3 entries of row 0
    with pytest.raises(PreconditionError):
        gf.direct_transform(inf.inflated, inf.dup, p1=50, p2=3, seed=0)
    with pytest.raises(PreconditionError):
        gf.direct_transform(inf.inflated, inf.dup, p1=50, p2=1, seed=0)


def test_direct_transform_is_deterministic_per_seed():
    inf = gf.inflate(CHAIN)
    a = gf.direct_transform(inf.inflated, inf.dup, p1=50, p2=4, seed=9)
    b = gf.direct_transform(inf.inflated, inf.dup, p1=50, p2=4, seed=9)
    assert a.tree == b.tree and a.tied == b.tied


# ---------------------------------------------------------------------------
# Squash


def test_squash_keeps_left_and_right_halves_of_duplicated_pairs():
    # 4x8 base: one row type, two duplicated column types; values encode
    # (row, col) so the selection is visible
    p2 = 4
    grid = tuple(
        tuple(100 * r + c for c in range(8)) for r in range(4)
    )
    b = gf.BaseMatrix(1000, grid)
    dup = DuplicationMap(
        row_pairs=(), col_pairs=((0, 1),), row_origin=(0,), col_origin=(0, 0)
    )
    out = gf.squash(b, dup, p2=p2)
    assert out.rows == 4 and out.cols == 4
    # left member keeps block-columns {0,1}, right member keeps {2,3}
    assert [v % 100 for v in out.grid[0]] == [0, 1, 6, 7]


def test_squash_applies_row_rule_after_columns():
    grid = tuple(tuple(100 * r + c for c in range(4)) for r in range(8))
    b = gf.BaseMatrix(1000, grid)
    dup = DuplicationMap(
        row_pairs=((0, 1),), col_pairs=(), row_origin=(0, 0), col_origin=(0,)
    )
    out = gf.squash(b, dup, p2=4)
    assert out.rows == 4 and out.cols == 4
    assert [row[0] // 100 for row in out.grid] == [0, 1, 6, 7]


def test_squash_validates_inputs():
    b = gf.BaseMatrix(7, tuple(tuple(0 for _ in range(8)) for _ in range(4)))
    empty = DuplicationMap((), (), (0,), (0, 0))
    with pytest.raises(PreconditionError):
        gf.squash(b, empty, p2=3)
    bad_pair = DuplicationMap((), ((0, 5),), (0,), (0, 0))
    with pytest.raises(PreconditionError):
        gf.squash(b, bad_pair, p2=4)
    ragged = gf.BaseMatrix(7, ((0, 1, 2),))
    with pytest.raises(PreconditionError):
        gf.squash(ragged, empty, p2=4)


# ---------------------------------------------------------------------------
# Membership


def test_membership_of_published_bases_in_their_protographs():
    assert gf.validate_membership(load_base("base8x12_p200.txt"), CHAIN)
    assert gf.validate_membership(
        load_base("base44x80_p100.txt"), load_connectivity("conn11x20.txt")
    )
    assert gf.validate_membership(
        load_base("base16x24_p1000.txt"), load_connectivity("conn4x6.txt")
    )


def test_membership_rejects_wrong_shape_or_row_weights():
    b = load_base("base8x12_p200.txt")
    assert not gf.validate_membership(b, gf.parse_connectivity("2 2\n1 1\n1 1\n"))
    # knock one block out of the first row: row weight no longer matches
    grid = [list(r) for r in b.grid]
    col = next(c for c, v in enumerate(grid[0]) if v != -1)
    grid[0][col] = -1
    broken = gf.BaseMatrix(b.p, tuple(tuple(r) for r in grid))
    assert not gf.validate_membership(broken, CHAIN)


# ---------------------------------------------------------------------------
# End-to-end design


def test_design_certifies_small_chain_protograph():
    res = gf.design(CHAIN, p1=100, girth=10, seed=0, restarts=8)
    assert res.certified
    assert res.base is not None and res.report is not None
    assert res.report.girth is None
    assert gf.validate_membership(res.base, CHAIN)
    assert res.base.rows == CHAIN.rows * 4 and res.base.cols == CHAIN.cols * 4
    # independent certification on the expanded Tanner graph
    assert gf.brute_force_girth(res.base.expand(), cap=8) is None
    assert res.attempts[-1].certified
    assert all(a.seed == res.attempts[0].seed + i for i, a in enumerate(res.attempts))


def test_design_reports_failure_without_fabricating_a_result():
    res = gf.design(CHAIN, p1=100, girth=10, seed=0, restarts=1, max_iters=1)
    assert not res.certified
    assert res.base is None and res.two_level is None and res.report is None
    assert len(res.attempts) == 1
    assert not res.attempts[0].certified
