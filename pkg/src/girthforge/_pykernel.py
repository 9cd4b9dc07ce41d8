"""Pure-Python analysis kernel.

Reference implementation of the hot operations; :mod:`girthforge._cykernel`
is a compiled drop-in replacement with identical results.  Selection
happens in :mod:`girthforge.kernel`.

Closed alternating paths of even length n visit coefficients
c_0, ..., c_{n-1} where consecutive even/odd positions share a column,
odd/even positions share a row (wrapping around), position t carries
sign -1 for even t and +1 for odd t, and two consecutive positions on
the same entry must use different coefficients (including the wrap
pair).  A path is a cycle in the fully expanded binary matrix iff every
level's signed label sum vanishes modulo that level's circulant size.
Counting is up to rotation by an even offset and reflection about an
odd offset: exactly the index transforms that preserve the alternation
pattern.  Each equivalence class is counted once, at its
lexicographically least coefficient sequence.
"""

from __future__ import annotations

from math import gcd
from typing import Optional

import numpy as np

BACKEND = "python"


def _is_canonical(seq: list[int], n: int) -> bool:
    # least among even rotations and odd reflections of the id sequence
    for r in range(2, n, 2):
        for i in range(n):
            a = seq[(i + r) % n]
            b = seq[i]
            if a != b:
                if a < b:
                    return False
                break
    for r in range(1, n, 2):
        for i in range(n):
            a = seq[(r - i) % n]
            b = seq[i]
            if a != b:
                if a < b:
                    return False
                break
    return True


def _unpack(flat):
    K = flat.num_levels
    lab = [flat.labels[k][flat.edge_of[k]].tolist() for k in range(K)]
    eof = [flat.edge_of[k].tolist() for k in range(K)]
    rowc = [
        flat.rowc[flat.rowc_ptr[j] : flat.rowc_ptr[j + 1]].tolist()
        for j in range(flat.rows)
    ]
    colc = [
        flat.colc[flat.colc_ptr[l] : flat.colc_ptr[l + 1]].tolist()
        for l in range(flat.cols)
    ]
    return (
        K,
        list(flat.ps),
        flat.coeff_entry.tolist(),
        flat.ent_row.tolist(),
        flat.ent_col.tolist(),
        lab,
        eof,
        rowc,
        colc,
    )


def count_cycles(
    flat,
    cap: int,
    max_witnesses: int = 0,
    start_lo: int = 0,
    start_hi: Optional[int] = None,
):
    """Canonical cycle counts by length.

    Returns ``(counts, witnesses)`` where ``counts[n] = [total, locked,
    inevitable]`` for n = 4, 6, ..., cap and ``witnesses[n]`` holds up to
    ``max_witnesses`` coefficient-id sequences.  ``start_lo``/``start_hi``
    restrict the starting coefficient id (for work partitioning).
    """
    counts = {n: [0, 0, 0] for n in range(4, cap + 1, 2)}
    wits: dict[int, list[tuple[int, ...]]] = {n: [] for n in range(4, cap + 1, 2)}
    if cap < 4:
        return counts, wits
    cap -= cap % 2
    K, ps, ce, er, ec, lab, eof, rowc, colc = _unpack(flat)
    hi = flat.n_coeffs if start_hi is None else start_hi

    seq = [0] * cap
    sums = [0] * K

    def close(n: int) -> None:
        for k in range(K):
            if sums[k] % ps[k]:
                return
        if not _is_canonical(seq, n):
            return
        locked = True
        inevitable = True
        for k in range(K):
            agg: dict[int, int] = {}
            ek = eof[k]
            sgn = -1
            for t in range(n):
                ed = ek[seq[t]]
                agg[ed] = agg.get(ed, 0) + sgn
                sgn = -sgn
            p = ps[k]
            for m_int in agg.values():
                if m_int != 0:
                    inevitable = False
                if m_int % p != 0:
                    locked = False
        row = counts[n]
        row[0] += 1
        if locked:
            row[1] += 1
        if inevitable:
            row[2] += 1
        if max_witnesses and len(wits[n]) < max_witnesses:
            wits[n].append(tuple(seq[:n]))

    def rec(t: int, c0: int, j0: int, e0: int) -> None:
        prev = seq[t - 1]
        pe = ce[prev]
        odd = t & 1
        cands = colc[ec[pe]] if odd else rowc[er[pe]]
        s = 1 if odd else -1
        more = t + 1 < cap
        for c in cands:
            if c < c0 or c == prev:
                continue
            e = ce[c]
            seq[t] = c
            for k in range(K):
                sums[k] += s * lab[k][c]
            if odd and t >= 3 and er[e] == j0 and not (e == e0 and c == c0):
                close(t + 1)
            if more:
                rec(t + 1, c0, j0, e0)
            for k in range(K):
                sums[k] -= s * lab[k][c]

    for c0 in range(start_lo, hi):
        e0 = ce[c0]
        seq[0] = c0
        for k in range(K):
            sums[k] -= lab[k][c0]
        rec(1, c0, er[e0], e0)
        for k in range(K):
            sums[k] += lab[k][c0]
    return counts, wits


def girth_upper(flat, cap: int) -> int:
    """Smallest cycle length in [4, cap], or 0 when none exists."""
    if cap < 4:
        return 0
    K, ps, ce, er, ec, lab, eof, rowc, colc = _unpack(flat)
    seq = [0] * (cap - cap % 2)
    sums = [0] * K

    def rec(t: int, n: int, c0: int, j0: int, e0: int) -> bool:
        prev = seq[t - 1]
        pe = ce[prev]
        odd = t & 1
        cands = colc[ec[pe]] if odd else rowc[er[pe]]
        s = 1 if odd else -1
        last = t == n - 1
        for c in cands:
            if c < c0 or c == prev:
                continue
            e = ce[c]
            if last:
                if er[e] != j0 or (e == e0 and c == c0):
                    continue
                ok = True
                for k in range(K):
                    if (sums[k] + s * lab[k][c]) % ps[k]:
                        ok = False
                        break
                if ok:
                    return True
                continue
            seq[t] = c
            for k in range(K):
                sums[k] += s * lab[k][c]
            if rec(t + 1, n, c0, j0, e0):
                return True
            for k in range(K):
                sums[k] -= s * lab[k][c]
        return False

    for n in range(4, cap + 1, 2):
        for c0 in range(flat.n_coeffs):
            e0 = ce[c0]
            seq[0] = c0
            for k in range(K):
                sums[k] -= lab[k][c0]
            hit = rec(1, n, c0, er[e0], e0)
            for k in range(K):
                sums[k] += lab[k][c0]
            if hit:
                return n
    return 0


def _coset_add(row, m: int, rhs: int, p: int, w: float) -> None:
    # add w at every z with m*z == rhs (mod p); no solutions when
    # gcd(m, p) does not divide rhs
    d = gcd(m, p)
    if rhs % d:
        return
    pd = p // d
    z0 = ((rhs // d) * pow(m // d, -1, pd)) % pd
    for i in range(d):
        row[z0 + i * pd] += w

def cost_tables(flat, girth: int, weights_by_len: dict[int, float]):
    """Weighted short-cycle cost of every single-label change.

    For target girth g, a satisfied closed path of length n < g counts
    with weight ``weights_by_len[n]``.  Returns ``(w_total, w_removable,
    counts, tables)``: ``w_total`` is the weighted count over the current
    labels, ``w_removable`` the part carried by paths some single level-k
    label change could break, ``counts`` as in :func:`count_cycles`, and
    ``tables[k][e, z]`` the exact change of the weighted count when edge
    e's level-(k+1) label is set to z.  ``tables[k][e, current] == 0``.
    """
    cap = girth - 2
    counts = {n: [0, 0, 0] for n in range(4, cap + 1, 2)}
    K = flat.num_levels
    tables = [
        np.zeros((len(flat.labels[k]), flat.ps[k]), dtype=np.float64)
        for k in range(K)
    ]
    if cap < 4:
        return 0.0, 0.0, counts, tables
    K, ps, ce, er, ec, lab, eof, rowc, colc = _unpack(flat)
    labels = [flat.labels[k].tolist() for k in range(K)]
    D = [t_ for t_ in tables]
    U = [np.zeros(len(flat.labels[k]), dtype=np.float64) for k in range(K)]
    totals = [0.0, 0.0]  # w_total, w_removable

    seq = [0] * cap
    sums = [0] * K

    def close(n: int) -> None:
        alphas = [sums[k] % ps[k] for k in range(K)]
        nz = [k for k in range(K) if alphas[k]]
        if len(nz) > 1:
            return
        if not _is_canonical(seq, n):
            return
        w = weights_by_len[n]
        if nz:
            # one level misses; a level-k label change can complete a cycle
            k = nz[0]
            p = ps[k]
            alpha = alphas[k]
            agg: dict[int, int] = {}
            ek = eof[k]
            sgn = -1
            for t in range(n):
                ed = ek[seq[t]]
                agg[ed] = agg.get(ed, 0) + sgn
                sgn = -sgn
            dk = D[k]
            for ed, m_int in agg.items():
                m = m_int % p
                if m == 0:
                    continue
                _coset_add(dk[ed], m, (m * labels[k][ed] - alpha) % p, p, w)
            return
        # current cycle: every label change either keeps or breaks it
        removable = False
        locked = True
        inevitable = True
        for k in range(K):
            p = ps[k]
            agg = {}
            ek = eof[k]
            sgn = -1
            for t in range(n):
                ed = ek[seq[t]]
                agg[ed] = agg.get(ed, 0) + sgn
                sgn = -sgn
            dk = D[k]
            uk = U[k]
            for ed, m_int in agg.items():
                if m_int != 0:
                    inevitable = False
                m = m_int % p
                if m == 0:
                    continue
                locked = False
                removable = True
                uk[ed] += w
                _coset_add(dk[ed], m, (m * labels[k][ed]) % p, p, w)
        totals[0] += w
        if removable:
            totals[1] += w
        row = counts[n]
        row[0] += 1
        if locked:
            row[1] += 1
        if inevitable:
            row[2] += 1

    def rec(t: int, c0: int, j0: int, e0: int) -> None:
        prev = seq[t - 1]
        pe = ce[prev]
        odd = t & 1
        cands = colc[ec[pe]] if odd else rowc[er[pe]]
        s = 1 if odd else -1
        more = t + 1 < cap
        for c in cands:
            if c < c0 or c == prev:
                continue
            e = ce[c]
            seq[t] = c
            for k in range(K):
                sums[k] += s * lab[k][c]
            if odd and t >= 3 and er[e] == j0 and not (e == e0 and c == c0):
                close(t + 1)
            if more:
                rec(t + 1, c0, j0, e0)
            for k in range(K):
                sums[k] -= s * lab[k][c]

    for c0 in range(flat.n_coeffs):
        e0 = ce[c0]
        seq[0] = c0
        for k in range(K):
            sums[k] -= lab[k][c0]
        rec(1, c0, er[e0], e0)
        for k in range(K):
            sums[k] += lab[k][c0]

    for k in range(K):
        tables[k] -= U[k][:, None]
    return totals[0], totals[1], counts, tables


def gallager_b(
    chk_ptr: np.ndarray,
    chk_var: np.ndarray,
    var_ptr: np.ndarray,
    vm_perm: np.ndarray,
    received: np.ndarray,
    max_iters: int,
):
    """Hard-decision bit-flipping decode of one word.

    Variable-to-check messages start as the channel bits; a message
    flips when at least ceil(d_v / 2) of the other neighbouring checks
    disagree with the channel bit.  The running estimate is the majority
    of the channel bit plus all check votes, ties resolved toward the
    channel bit.  Decoding stops when the estimate satisfies all checks;
    the received word itself is tested before any iteration.
    Returns ``(estimate, converged, iterations)``.
    """
    m_checks = len(chk_ptr) - 1
    n_vars = len(var_ptr) - 1
    r = received.astype(np.uint8, copy=False)
    starts = chk_ptr[:-1]
    if not np.bitwise_xor.reduceat(r[chk_var], starts).any():
        return r.copy(), True, 0
    deg = np.diff(var_ptr)
    check_of_edge = np.repeat(np.arange(m_checks), np.diff(chk_ptr))
    var_of_vm = np.repeat(np.arange(n_vars), deg)
    bthr = (deg + 1) // 2  # ceil(deg / 2)
    r_vm = r[var_of_vm]
    msgs = r[chk_var].copy()
    est = r.copy()
    for it in range(1, max_iters + 1):
        par = np.bitwise_xor.reduceat(msgs, starts)
        u = par[check_of_edge] ^ msgs
        u_vm = u[vm_perm]
        ones = np.add.reduceat(u_vm.astype(np.int64), var_ptr[:-1])
        dis_total = np.where(r == 1, deg - ones, ones)
        dis_edge = dis_total[var_of_vm] - (u_vm != r_vm)
        flip = dis_edge >= bthr[var_of_vm]
        msgs[vm_perm] = np.where(flip, r_vm ^ 1, r_vm).astype(np.uint8)
        votes_one = 2 * (ones + r)
        total = deg + 1
        est = np.where(
            votes_one > total, 1, np.where(votes_one < total, 0, r)
        ).astype(np.uint8)
        if not np.bitwise_xor.reduceat(est[chk_var], starts).any():
            return est, True, it
    return est, False, max_iters
