#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-Python twin.

Run from a checkout:  python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import statistics
import time

import numpy as np

import girthforge as gf
from girthforge import _pykernel
from girthforge._flat import flat_of

try:
    from girthforge import _cykernel
except ImportError:
    _cykernel = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def row(label, py_s, cy_s):
    speedup = f"{py_s / cy_s:7.1f}x" if cy_s else "      -"
    cy_txt = f"{cy_s * 1e3:10.2f}" if cy_s else "         -"
    print(f"{label:<34} {py_s * 1e3:10.2f} {cy_txt} {speedup}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    print(f"compiled kernel available: {_cykernel is not None}")
    print(f"{'benchmark':<34} {'python ms':>10} {'compiled ms':>10} {'speedup':>8}")

    # 1) cycle census, mid-sized weight-I code
    b = gf.random_base_matrix(4, 12, 64, seed=1)
    flat = flat_of(b)
    py, _ = best_of(lambda: _pykernel.count_cycles(flat, 10, 0), args.repeat)
    cy = None
    if _cykernel:
        cy, _ = best_of(lambda: _cykernel.count_cycles(flat, 10, 0), args.repeat)
        assert _pykernel.count_cycles(flat, 10, 0) == _cykernel.count_cycles(flat, 10, 0)
    row("census 4x12 p=64 cap=10", py, cy)

    # 2) cycle census on a published 44x80 girth-10 design
    import importlib.resources as ir

    text = (ir.files("girthforge") / "fixtures" / "base44x80_p100.txt").read_text()
    big = flat_of(gf.parse_base_matrix(text))
    py, _ = best_of(lambda: _pykernel.count_cycles(big, 8, 0), args.repeat)
    cy = None
    if _cykernel:
        cy, _ = best_of(lambda: _cykernel.count_cycles(big, 8, 0), args.repeat)
    row("census 44x80 p=100 cap=8", py, cy)

    # 3) cost tables for the hill climber
    wts = gf.CostWeights.default(10).as_dict()
    py, _ = best_of(lambda: _pykernel.cost_tables(flat, 10, wts), args.repeat)
    cy = None
    if _cykernel:
        cy, _ = best_of(lambda: _cykernel.cost_tables(flat, 10, wts), args.repeat)
    row("cost tables 4x12 p=64 g=10", py, cy)

    # 4) decoding throughput
    dec = gf.Decoder.from_matrix(gf.random_base_matrix(3, 6, 128, seed=2).expand())
    rng = np.random.default_rng(0)
    words = [(rng.random(dec.cols) < 0.03).astype(np.uint8) for _ in range(200)]

    def run(kern):
        for w in words:
            kern.gallager_b(dec.chk_ptr, dec.chk_var, dec.var_ptr, dec.vm_perm, w, 50)

    py, _ = best_of(lambda: run(_pykernel), args.repeat)
    cy = None
    if _cykernel:
        cy, _ = best_of(lambda: run(_cykernel), args.repeat)
    row("decode 200 words n=768", py, cy)


if __name__ == "__main__":
    main()
