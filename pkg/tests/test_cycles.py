"""Closed alternating paths, cycle censuses and the BFS girth oracle."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import girthforge as gf
from girthforge.cycles import multiplicities
from girthforge.errors import PreconditionError

from conftest import load_poly, random_hqc_poly, random_weight1_poly


SQUARE = gf.PolyParityMatrix.from_dict(
    [2], 2, 2, {(0, 0): [(0,)], (0, 1): [(0,)], (1, 0): [(0,)], (1, 1): [(0,)]}
)


def square_path(shifts, p=2):
    """Length-4 path around a full 2x2 support with the given shifts.

    Positions 2i, 2i+1 share a column and 2i+1, 2i+2 share a row, so the
    walk is (0,0) -> (1,0) -> (1,1) -> (0,1) and back.
    """
    return gf.Path(
        ((0, 0), (1, 0), (1, 1), (0, 1)),
        tuple((s,) for s in shifts),
    )


# ---------------------------------------------------------------------------
# Path conditions


def test_alternating_sums_sign_convention():
    path = gf.Path(((0, 0), (1, 0), (1, 1), (0, 1)), ((1,), (4,), (2,), (0,)))
    assert gf.alternating_sums(path) == (-1 + 4 - 2 + 0,)


def test_is_cycle_checks_every_level_modulus():
    path = gf.Path(
        ((0, 0), (1, 0), (1, 1), (0, 1)),
        ((1, 0), (4, 2), (2, 0), (0, 1)),
    )
    # sums: (1, 3)
    assert gf.is_cycle(path, (1_000_003, 3)) is False  # level 1 misses
    assert gf.is_cycle(path, (7, 3)) is False  # 1 % 7 != 0
    assert gf.is_cycle(path, (7, 2)) is False
    shifted = gf.Path(path.entries, ((1, 0), (4, 2), (2, 2), (0, 0)))
    # sums: (1, 0): level 2 satisfied, level 1 not
    assert gf.is_cycle(shifted, (7, 3)) is False
    closed = gf.Path(path.entries, ((1, 0), (4, 2), (3, 2), (0, 0)))
    # sums: (0, 0)
    assert gf.is_cycle(closed, (7, 3)) is True


def test_is_cycle_rejects_level_count_mismatch():
    path = square_path([0, 0, 0, 0])
    with pytest.raises(PreconditionError):
        gf.is_cycle(path, (2, 2))


def test_four_cycle_matches_expanded_graph():
    assert gf.is_cycle(square_path([0, 0, 0, 0]), (2,))
    assert gf.brute_force_girth(gf.expand_full(SQUARE)) == 4
    skew = gf.PolyParityMatrix.from_dict(
        [2], 2, 2, {(0, 0): [(0,)], (0, 1): [(0,)], (1, 0): [(0,)], (1, 1): [(1,)]}
    )
    assert not gf.is_cycle(square_path([0, 0, 1, 0]), (2,))
    assert gf.brute_force_girth(gf.expand_full(skew), cap=4) is None


def test_validate_path_accepts_a_real_cycle():
    gf.validate_path(SQUARE, square_path([0, 0, 0, 0]))


@pytest.mark.parametrize(
    "entries, coeffs",
    [
        # coefficient not present in the entry
        (((0, 0), (1, 0), (1, 1), (0, 1)), ((1,), (0,), (0,), (0,))),
        # positions 0,1 do not share a column
        (((0, 0), (1, 1), (1, 0), (0, 1)), ((0,), (0,), (0,), (0,))),
        # positions 1,2 do not share a row
        (((0, 0), (1, 0), (0, 1), (1, 1)), ((0,), (0,), (0,), (0,))),
        # consecutive repeat of one coefficient of one entry
        (((0, 0), (0, 0), (0, 1), (0, 1)), ((0,), (0,), (0,), (0,))),
    ],
)
def test_validate_path_rejects_malformed_paths(entries, coeffs):
    with pytest.raises(PreconditionError):
        gf.validate_path(SQUARE, gf.Path(entries, coeffs))


def test_path_length_must_be_even_and_at_least_four():
    with pytest.raises(PreconditionError):
        gf.Path(((0, 0), (0, 1)), ((0,), (0,)))
    with pytest.raises(PreconditionError):
        gf.Path(((0, 0),) * 5, ((0,),) * 5)


def test_multiplicities_signed_counts():
    path = gf.Path(
        ((0, 0), (0, 0), (1, 0), (1, 0), (0, 0), (0, 0)),
        ((0,), (1,), (2,), (3,), (0,), (1,)),
    )
    kappa = {(el.entry, el.coeff): el.kappa for el in multiplicities(path)}
    # (0,0)/x^0 appears at positions 0 and 4 (both even): kappa -2
    assert kappa[((0, 0), (0,))] == -2
    assert kappa[((0, 0), (1,))] == 2
    assert kappa[((1, 0), (2,))] == -1
    assert kappa[((1, 0), (3,))] == 1


def test_canonical_path_invariant_under_even_rotation_and_odd_reflection():
    rng = random.Random(5)
    h = random_weight1_poly(rng, 3, 4, 8)
    paths = list(gf.enumerate_paths(h, 6))
    assert paths, "expected some closed paths on a full 3x4 support"
    for path in paths[:20]:
        n = path.length
        seq = list(zip(path.entries, path.coeffs))
        rot = seq[2:] + seq[:2]
        refl = [seq[(3 - i) % n] for i in range(n)]
        for variant in (rot, refl):
            vp = gf.Path(tuple(e for e, _ in variant), tuple(v for _, v in variant))
            assert gf.canonical_path(vp) == gf.canonical_path(path) == path


# ---------------------------------------------------------------------------
# Census vs. reference enumeration and the BFS oracle


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_census_equals_reference_enumeration_weight1(seed):
    rng = random.Random(seed)
    h = random_weight1_poly(rng, 3, 4, rng.randint(4, 9), density=0.9)
    report = gf.cycle_report(h, cap=8)
    for n in (4, 6, 8):
        ref = sum(1 for _ in gf.enumerate_paths(h, n, only_cycles=True))
        assert report.count(n).total == ref


@pytest.mark.parametrize("seed", [3, 4])
def test_census_equals_reference_enumeration_two_level(seed):
    rng = random.Random(seed)
    h = random_hqc_poly(rng, 2, 3, rng.randint(3, 6), rng.randint(2, 4), max_weight=2)
    report = gf.cycle_report(h, cap=8)
    for n in (4, 6, 8):
        ref = sum(1 for _ in gf.enumerate_paths(h, n, only_cycles=True))
        assert report.count(n).total == ref


def test_enumerated_paths_are_canonical_and_distinct():
    rng = random.Random(9)
    h = random_weight1_poly(rng, 2, 3, 5)
    seen = set()
    for path in gf.enumerate_paths(h, 6):
        assert gf.canonical_path(path) == path
        gf.validate_path(h, path)
        assert path not in seen
        seen.add(path)


@pytest.mark.parametrize("seed", [10, 11, 12, 13])
def test_census_girth_matches_bfs_oracle(seed):
    rng = random.Random(seed)
    h = random_weight1_poly(rng, rng.randint(2, 3), rng.randint(3, 5), rng.randint(3, 8))
    report = gf.cycle_report(h, cap=12)
    assert report.girth == gf.brute_force_girth(gf.expand_full(h), cap=12)


def test_girth_at_least_reflects_the_cap():
    b = gf.BaseMatrix(7, ((0, 1), (0, 3)))
    report = gf.cycle_report(b, cap=4)
    if report.girth is None:
        assert report.girth_at_least == 6
    report12 = gf.cycle_report(b, cap=12)
    assert report12.girth == gf.brute_force_girth(b.expand(), cap=12)


def test_count_raises_on_unknown_length():
    report = gf.cycle_report(SQUARE, cap=6)
    with pytest.raises(KeyError):
        report.count(10)


def test_witnesses_are_valid_cycles():
    rng = random.Random(2)
    h = random_weight1_poly(rng, 3, 4, 5)
    report = gf.cycle_report(h, cap=8, max_witnesses=2)
    assert report.witnesses
    per_len: dict[int, int] = {}
    for w in report.witnesses:
        gf.validate_path(h, w)
        assert gf.is_cycle(w, h.levels)
        per_len[w.length] = per_len.get(w.length, 0) + 1
    assert all(v <= 2 for v in per_len.values())


def test_multiprocess_census_matches_single_process():
    h = load_poly("poly6x12_p8.json")
    a = gf.cycle_report(h, cap=8, threads=1)
    b = gf.cycle_report(h, cap=8, threads=2)
    assert a.counts == b.counts and a.girth == b.girth


# ---------------------------------------------------------------------------
# Classification: locked and inevitable cycles


def test_locked_but_not_inevitable_eight_cycle():
    # One entry offset by a shift of 1 at p = 2: the doubled square closes
    # (signed sums are even) and every per-edge aggregate is 0 mod 2, yet
    # the integer aggregates are nonzero, so a larger p breaks the cycle.
    b = gf.BaseMatrix(2, ((0, 0), (0, 1)))
    report = gf.cycle_report(b, cap=8)
    assert report.count(4).total == 0
    eight = report.count(8)
    assert eight.total >= 1
    assert eight.locked == eight.total
    assert eight.inevitable == 0


def test_inevitable_eight_cycle_from_row_pair():
    h = gf.PolyParityMatrix.from_dict(
        [8, 3], 1, 2, {(0, 0): [(0, 0), (1, 1)], (0, 1): [(0, 0), (2, 1)]}
    )
    report = gf.cycle_report(h, cap=8)
    assert report.count(8).inevitable >= 1
    # inevitable cycles are locked for every level size
    assert report.count(8).locked >= report.count(8).inevitable


def test_inevitable_diagnoses_weight3_entry():
    h = gf.PolyParityMatrix.from_dict(
        [8, 4], 1, 1, {(0, 0): [(0, 0), (1, 1), (2, 2)]}
    )
    diags = gf.inevitable_cycles(h)
    kinds = {d.kind for d in diags}
    assert "weight3_entry" in kinds
    w = next(d for d in diags if d.kind == "weight3_entry").witness
    assert w.length == 6
    assert all(el.kappa == 0 for el in multiplicities(w))
    gf.validate_path(h, w)
    # zero signed counts make the sums vanish identically, so the cycle
    # survives arbitrary level sizes
    for ps in [(8, 4), (7, 2), (100, 3)]:
        assert gf.is_cycle(w, ps)


def test_inevitable_diagnoses_row_and_column_pairs():
    h = gf.PolyParityMatrix.from_dict(
        [8, 3],
        2,
        2,
        {
            (0, 0): [(0, 0), (1, 1)],
            (0, 1): [(2, 0), (3, 1)],
            (1, 0): [(4, 0), (5, 2)],
        },
    )
    diags = gf.inevitable_cycles(h)
    kinds = sorted(d.kind for d in diags)
    assert kinds == ["column_pair", "row_pair"]
    for d in diags:
        assert d.witness.length == 8
        assert all(el.kappa == 0 for el in multiplicities(d.witness))
        gf.validate_path(h, d.witness)
        assert gf.is_cycle(d.witness, (8, 3))


def test_no_inevitable_structures_in_weight1_codes():
    rng = random.Random(1)
    h = random_weight1_poly(rng, 3, 5, 16)
    assert gf.inevitable_cycles(h) == ()


# ---------------------------------------------------------------------------
# Property: satisfied paths survive relabeling exactly when kappa vanishes


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_zero_kappa_paths_are_satisfied_for_every_labeling(seed):
    rng = random.Random(seed)
    h = random_hqc_poly(rng, 2, 2, 6, 3, max_weight=2)
    for path in gf.enumerate_paths(h, 8):
        if all(el.kappa == 0 for el in multiplicities(path)):
            assert gf.is_cycle(path, h.levels.ps)
            assert gf.is_cycle(path, (13, 5))
