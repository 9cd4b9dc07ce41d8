"""Pure-Python and compiled kernels must be interchangeable bit for bit."""

from __future__ import annotations

import random

import numpy as np
import pytest

import girthforge as gf
from girthforge import _pykernel
from girthforge._flat import flat_of
from girthforge.simulator import Decoder

from conftest import random_hqc_poly, random_weight1_poly

_cykernel = pytest.importorskip(
    "girthforge._cykernel", reason="compiled kernel not built"
)


def sample_codes():
    rng = random.Random(42)
    codes = []
    for _ in range(6):
        codes.append(random_weight1_poly(rng, rng.randint(2, 4), rng.randint(3, 6), rng.randint(3, 16), 0.9))
    for _ in range(6):
        codes.append(random_hqc_poly(rng, 2, 3, rng.randint(3, 8), rng.randint(2, 4), max_weight=3))
    return codes


@pytest.mark.parametrize("cap", [6, 8, 10])
def test_count_cycles_agrees(cap):
    for h in sample_codes():
        flat = flat_of(h)
        c_py, w_py = _pykernel.count_cycles(flat, cap, 3)
        c_cy, w_cy = _cykernel.count_cycles(flat, cap, 3)
        assert c_py == c_cy
        assert w_py == w_cy


def test_girth_upper_agrees():
    for h in sample_codes():
        flat = flat_of(h)
        for cap in (4, 8, 12):
            assert _pykernel.girth_upper(flat, cap) == _cykernel.girth_upper(flat, cap)


def test_cost_tables_agree_exactly():
    weights = gf.CostWeights.default(10).as_dict()
    for h in sample_codes():
        flat = flat_of(h)
        wt_py, wr_py, c_py, t_py = _pykernel.cost_tables(flat, 10, weights)
        wt_cy, wr_cy, c_cy, t_cy = _cykernel.cost_tables(flat, 10, weights)
        assert wt_py == wt_cy and wr_py == wr_cy
        assert c_py == c_cy
        assert len(t_py) == len(t_cy)
        for a, b in zip(t_py, t_cy):
            assert np.array_equal(a, b)


def test_gallager_b_agrees():
    rng = np.random.default_rng(7)
    b = gf.BaseMatrix(
        11,
        (
            (0, 2, 5, 1, -1, 7),
            (3, -1, 4, 9, 6, 0),
            (8, 1, -1, 2, 10, 4),
        ),
    )
    dec = Decoder.from_matrix(b.expand())
    for _ in range(50):
        word = (rng.random(dec.cols) < 0.05).astype(np.uint8)
        out_py = _pykernel.gallager_b(
            dec.chk_ptr, dec.chk_var, dec.var_ptr, dec.vm_perm, word, 200
        )
        out_cy = _cykernel.gallager_b(
            dec.chk_ptr, dec.chk_var, dec.var_ptr, dec.vm_perm, word, 200
        )
        assert np.array_equal(out_py[0], out_cy[0])
        assert out_py[1:] == out_cy[1:]


def test_backend_tags_differ():
    assert _pykernel.BACKEND == "python"
    assert _cykernel.BACKEND == "compiled"
    assert gf.KERNEL_BACKEND in ("python", "compiled")
