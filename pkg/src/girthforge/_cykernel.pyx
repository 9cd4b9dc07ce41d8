# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled analysis kernel; drop-in replacement for girthforge._pykernel.

See that module for the semantics.  The implementations are kept in
lockstep: both enumerate the same closed alternating paths, apply the
same canonical-representative rule and produce identical numbers.
"""

import numpy as np

BACKEND = "compiled"

ctypedef long long i64
ctypedef int i32


cdef inline i64 _pos_mod(i64 a, i64 p):
    cdef i64 r = a % p
    if r < 0:
        r += p
    return r


cdef i64 _gcd(i64 a, i64 b):
    cdef i64 t
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef i64 _modinv(i64 a, i64 m):
    # inverse of a modulo m for gcd(a, m) == 1, a >= 0, m >= 2
    cdef i64 g = m, x = 0, x1 = 1, a1 = a % m, q, t
    while a1:
        q = g // a1
        t = g - q * a1
        g = a1
        a1 = t
        t = x - q * x1
        x = x1
        x1 = t
    return _pos_mod(x, m)


cdef class _Code:
    cdef int K, cap, n_coeffs, n_agg
    cdef i64[::1] ps
    cdef i32[::1] ce, er, ec
    cdef i64[:, ::1] lab
    cdef i32[:, ::1] eof
    cdef i32[::1] rowc_ptr, rowc, colc_ptr, colc
    cdef i64[::1] sums
    cdef i32[::1] seq
    cdef i32[::1] agg_ed
    cdef i64[::1] agg_m
    # counting state
    cdef i64[::1] tot, lck, inev
    cdef int max_wit
    cdef list wits
    # cost state
    cdef double[::1] wlen
    cdef double w_total, w_removable
    cdef double[::1] tabflat, uflat
    cdef i64[::1] tab_off, u_off
    cdef i64[::1] label_flat

    cdef bint _canonical(self, int n):
        cdef int r, i
        cdef i32 a, b
        for r in range(2, n, 2):
            for i in range(n):
                a = self.seq[(i + r) % n]
                b = self.seq[i]
                if a != b:
                    if a < b:
                        return False
                    break
        for r in range(1, n, 2):
            for i in range(n):
                a = self.seq[(r - i + n) % n]
                b = self.seq[i]
                if a != b:
                    if a < b:
                        return False
                    break
        return True

    cdef void _aggregate(self, int k, int n):
        cdef int t, i, nd = 0, found
        cdef i32 ed
        cdef i64 s
        for t in range(n):
            ed = self.eof[k, self.seq[t]]
            s = -1 if t % 2 == 0 else 1
            found = -1
            for i in range(nd):
                if self.agg_ed[i] == ed:
                    found = i
                    break
            if found < 0:
                self.agg_ed[nd] = ed
                self.agg_m[nd] = s
                nd += 1
            else:
                self.agg_m[found] += s
        self.n_agg = nd

    # ---- counting ----------------------------------------------------

    cdef void _close_count(self, int n):
        cdef int k, i, idx
        cdef i64 m, p
        cdef bint locked = True, inevitable = True
        cdef list lst
        for k in range(self.K):
            if _pos_mod(self.sums[k], self.ps[k]) != 0:
                return
        if not self._canonical(n):
            return
        for k in range(self.K):
            self._aggregate(k, n)
            p = self.ps[k]
            for i in range(self.n_agg):
                m = self.agg_m[i]
                if m != 0:
                    inevitable = False
                if _pos_mod(m, p) != 0:
                    locked = False
        idx = n // 2 - 2
        self.tot[idx] += 1
        if locked:
            self.lck[idx] += 1
        if inevitable:
            self.inev[idx] += 1
        if self.max_wit > 0:
            lst = <list> self.wits[idx]
            if len(lst) < self.max_wit:
                lst.append(tuple([self.seq[t] for t in range(n)]))

    cdef void _rec_count(self, int t, int c0, int j0, int e0):
        cdef int prev = self.seq[t - 1]
        cdef int pe = self.ce[prev]
        cdef bint odd = t & 1
        cdef bint more = (t + 1) < self.cap
        cdef int lo, hi, i, c, e, k
        cdef i64 s = 1 if odd else -1
        if odd:
            lo = self.colc_ptr[self.ec[pe]]
            hi = self.colc_ptr[self.ec[pe] + 1]
        else:
            lo = self.rowc_ptr[self.er[pe]]
            hi = self.rowc_ptr[self.er[pe] + 1]
        for i in range(lo, hi):
            c = self.colc[i] if odd else self.rowc[i]
            if c < c0 or c == prev:
                continue
            e = self.ce[c]
            self.seq[t] = c
            for k in range(self.K):
                self.sums[k] += s * self.lab[k, c]
            if odd and t >= 3 and self.er[e] == j0 and not (e == e0 and c == c0):
                self._close_count(t + 1)
            if more:
                self._rec_count(t + 1, c0, j0, e0)
            for k in range(self.K):
                self.sums[k] -= s * self.lab[k, c]

    cdef void _run_count(self, int lo, int hi):
        cdef int c0, k, e0
        for c0 in range(lo, hi):
            e0 = self.ce[c0]
            self.seq[0] = c0
            for k in range(self.K):
                self.sums[k] -= self.lab[k, c0]
            self._rec_count(1, c0, self.er[e0], e0)
            for k in range(self.K):
                self.sums[k] += self.lab[k, c0]

    # ---- smallest cycle length ----------------------------------------

    cdef bint _rec_exists(self, int t, int n, int c0, int j0, int e0):
        cdef int prev = self.seq[t - 1]
        cdef int pe = self.ce[prev]
        cdef bint odd = t & 1
        cdef bint last = t == n - 1
        cdef int lo, hi, i, c, e, k
        cdef bint ok
        cdef i64 s = 1 if odd else -1
        if odd:
            lo = self.colc_ptr[self.ec[pe]]
            hi = self.colc_ptr[self.ec[pe] + 1]
        else:
            lo = self.rowc_ptr[self.er[pe]]
            hi = self.rowc_ptr[self.er[pe] + 1]
        for i in range(lo, hi):
            c = self.colc[i] if odd else self.rowc[i]
            if c < c0 or c == prev:
                continue
            e = self.ce[c]
            if last:
                if self.er[e] != j0 or (e == e0 and c == c0):
                    continue
                ok = True
                for k in range(self.K):
                    if _pos_mod(self.sums[k] + s * self.lab[k, c], self.ps[k]) != 0:
                        ok = False
                        break
                if ok:
                    return True
                continue
            self.seq[t] = c
            for k in range(self.K):
                self.sums[k] += s * self.lab[k, c]
            if self._rec_exists(t + 1, n, c0, j0, e0):
                return True
            for k in range(self.K):
                self.sums[k] -= s * self.lab[k, c]
        return False

    # ---- cost tables ---------------------------------------------------

    cdef void _coset_add(self, int k, i32 ed, i64 m, i64 rhs, i64 p, double w):
        # add w at every z with m*z == rhs (mod p)
        cdef i64 d = _gcd(m, p), pd, z0, i, base
        if rhs % d != 0:
            return
        pd = p // d
        z0 = (((rhs // d) % pd) * _modinv(m // d, pd)) % pd
        base = self.tab_off[k] + (<i64> ed) * p
        for i in range(d):
            self.tabflat[base + z0 + i * pd] += w

    cdef void _close_cost(self, int n):
        cdef int k, i, nzk = -1, idx
        cdef i32 ed
        cdef i64 a, alpha_k = 0, p, m, s_cur, rhs
        cdef double w
        cdef bint removable = False, locked = True, inevitable = True
        for k in range(self.K):
            a = _pos_mod(self.sums[k], self.ps[k])
            if a != 0:
                if nzk >= 0:
                    return
                nzk = k
                alpha_k = a
        if not self._canonical(n):
            return
        w = self.wlen[n // 2 - 2]
        if nzk >= 0:
            p = self.ps[nzk]
            self._aggregate(nzk, n)
            for i in range(self.n_agg):
                m = _pos_mod(self.agg_m[i], p)
                if m == 0:
                    continue
                ed = self.agg_ed[i]
                s_cur = self.label_flat[self.u_off[nzk] + ed]
                rhs = _pos_mod(m * s_cur - alpha_k, p)
                self._coset_add(nzk, ed, m, rhs, p, w)
            return
        self.w_total += w
        for k in range(self.K):
            p = self.ps[k]
            self._aggregate(k, n)
            for i in range(self.n_agg):
                if self.agg_m[i] != 0:
                    inevitable = False
                m = _pos_mod(self.agg_m[i], p)
                if m == 0:
                    continue
                locked = False
                removable = True
                ed = self.agg_ed[i]
                self.uflat[self.u_off[k] + ed] += w
                s_cur = self.label_flat[self.u_off[k] + ed]
                rhs = _pos_mod(m * s_cur, p)
                self._coset_add(k, ed, m, rhs, p, w)
        if removable:
            self.w_removable += w
        idx = n // 2 - 2
        self.tot[idx] += 1
        if locked:
            self.lck[idx] += 1
        if inevitable:
            self.inev[idx] += 1

    cdef void _rec_cost(self, int t, int c0, int j0, int e0):
        cdef int prev = self.seq[t - 1]
        cdef int pe = self.ce[prev]
        cdef bint odd = t & 1
        cdef bint more = (t + 1) < self.cap
        cdef int lo, hi, i, c, e, k
        cdef i64 s = 1 if odd else -1
        if odd:
            lo = self.colc_ptr[self.ec[pe]]
            hi = self.colc_ptr[self.ec[pe] + 1]
        else:
            lo = self.rowc_ptr[self.er[pe]]
            hi = self.rowc_ptr[self.er[pe] + 1]
        for i in range(lo, hi):
            c = self.colc[i] if odd else self.rowc[i]
            if c < c0 or c == prev:
                continue
            e = self.ce[c]
            self.seq[t] = c
            for k in range(self.K):
                self.sums[k] += s * self.lab[k, c]
            if odd and t >= 3 and self.er[e] == j0 and not (e == e0 and c == c0):
                self._close_cost(t + 1)
            if more:
                self._rec_cost(t + 1, c0, j0, e0)
            for k in range(self.K):
                self.sums[k] -= s * self.lab[k, c]

    cdef void _run_cost(self):
        cdef int c0, k, e0
        for c0 in range(self.n_coeffs):
            e0 = self.ce[c0]
            self.seq[0] = c0
            for k in range(self.K):
                self.sums[k] -= self.lab[k, c0]
            self._rec_cost(1, c0, self.er[e0], e0)
            for k in range(self.K):
                self.sums[k] += self.lab[k, c0]


def _make(flat, int cap):
    cdef _Code w = _Code.__new__(_Code)
    K = flat.num_levels
    nC = flat.n_coeffs
    w.K = K
    w.cap = cap
    w.n_coeffs = nC
    w.ps = np.ascontiguousarray(flat.ps, dtype=np.int64)
    w.ce = np.ascontiguousarray(flat.coeff_entry, dtype=np.int32)
    w.er = np.ascontiguousarray(flat.ent_row, dtype=np.int32)
    w.ec = np.ascontiguousarray(flat.ent_col, dtype=np.int32)
    lab = np.empty((K, nC), dtype=np.int64)
    eof = np.empty((K, nC), dtype=np.int32)
    for k in range(K):
        lab[k] = flat.labels[k][flat.edge_of[k]]
        eof[k] = flat.edge_of[k]
    w.lab = lab
    w.eof = eof
    w.rowc_ptr = np.ascontiguousarray(flat.rowc_ptr, dtype=np.int32)
    w.rowc = np.ascontiguousarray(flat.rowc, dtype=np.int32)
    w.colc_ptr = np.ascontiguousarray(flat.colc_ptr, dtype=np.int32)
    w.colc = np.ascontiguousarray(flat.colc, dtype=np.int32)
    w.sums = np.zeros(K, dtype=np.int64)
    size = cap if cap >= 4 else 4
    w.seq = np.zeros(size, dtype=np.int32)
    w.agg_ed = np.zeros(size, dtype=np.int32)
    w.agg_m = np.zeros(size, dtype=np.int64)
    w.max_wit = 0
    return w


def count_cycles(flat, int cap, int max_witnesses=0, int start_lo=0, start_hi=None):
    """See girthforge._pykernel.count_cycles."""
    counts = {n: [0, 0, 0] for n in range(4, cap + 1, 2)}
    wits = {n: [] for n in range(4, cap + 1, 2)}
    if cap < 4:
        return counts, wits
    cap -= cap % 2
    cdef _Code w = _make(flat, cap)
    nlens = cap // 2 - 1
    tot = np.zeros(nlens, dtype=np.int64)
    lck = np.zeros(nlens, dtype=np.int64)
    inev = np.zeros(nlens, dtype=np.int64)
    w.tot = tot
    w.lck = lck
    w.inev = inev
    w.max_wit = max_witnesses
    w.wits = [[] for _ in range(nlens)]
    cdef int hi = flat.n_coeffs if start_hi is None else <int> start_hi
    w._run_count(start_lo, hi)
    for n in range(4, cap + 1, 2):
        idx = n // 2 - 2
        counts[n] = [int(tot[idx]), int(lck[idx]), int(inev[idx])]
        wits[n] = w.wits[idx]
    return counts, wits


def girth_upper(flat, int cap):
    """See girthforge._pykernel.girth_upper."""
    if cap < 4:
        return 0
    cdef _Code w = _make(flat, cap - cap % 2)
    cdef int n, c0, k, e0
    cdef bint hit
    for n in range(4, cap + 1, 2):
        if n % 2:
            continue
        for c0 in range(w.n_coeffs):
            e0 = w.ce[c0]
            w.seq[0] = c0
            for k in range(w.K):
                w.sums[k] -= w.lab[k, c0]
            hit = w._rec_exists(1, n, c0, w.er[e0], e0)
            for k in range(w.K):
                w.sums[k] += w.lab[k, c0]
            if hit:
                return n
    return 0


def cost_tables(flat, int girth, dict weights_by_len):
    """See girthforge._pykernel.cost_tables."""
    cdef int cap = girth - 2
    counts = {n: [0, 0, 0] for n in range(4, cap + 1, 2)}
    K = flat.num_levels
    tables = [
        np.zeros((len(flat.labels[k]), flat.ps[k]), dtype=np.float64)
        for k in range(K)
    ]
    if cap < 4:
        return 0.0, 0.0, counts, tables
    cap -= cap % 2
    cdef _Code w = _make(flat, cap)
    nlens = cap // 2 - 1
    tot = np.zeros(nlens, dtype=np.int64)
    lck = np.zeros(nlens, dtype=np.int64)
    inev = np.zeros(nlens, dtype=np.int64)
    w.tot = tot
    w.lck = lck
    w.inev = inev
    wlen = np.zeros(nlens, dtype=np.float64)
    for n in range(4, cap + 1, 2):
        wlen[n // 2 - 2] = float(weights_by_len[n])
    w.wlen = wlen
    # flattened per-level layouts
    n_edges = [len(flat.labels[k]) for k in range(K)]
    ps = [int(p) for p in flat.ps]
    tab_off = np.zeros(K, dtype=np.int64)
    u_off = np.zeros(K, dtype=np.int64)
    t_acc = 0
    u_acc = 0
    for k in range(K):
        tab_off[k] = t_acc
        u_off[k] = u_acc
        t_acc += n_edges[k] * ps[k]
        u_acc += n_edges[k]
    tabflat = np.zeros(t_acc, dtype=np.float64)
    uflat = np.zeros(u_acc, dtype=np.float64)
    label_flat = np.concatenate([np.asarray(flat.labels[k], dtype=np.int64) for k in range(K)])
    w.tabflat = tabflat
    w.uflat = uflat
    w.tab_off = tab_off
    w.u_off = u_off
    w.label_flat = label_flat
    w.w_total = 0.0
    w.w_removable = 0.0
    w._run_cost()
    for k in range(K):
        dk = tabflat[int(tab_off[k]) : int(tab_off[k]) + n_edges[k] * ps[k]].reshape(
            n_edges[k], ps[k]
        )
        uk = uflat[int(u_off[k]) : int(u_off[k]) + n_edges[k]]
        tables[k][:, :] = dk - uk[:, None]
    for n in range(4, cap + 1, 2):
        idx = n // 2 - 2
        counts[n] = [int(tot[idx]), int(lck[idx]), int(inev[idx])]
    return float(w.w_total), float(w.w_removable), counts, tables


def gallager_b(chk_ptr_in, chk_var_in, var_ptr_in, vm_perm_in, received_in, int max_iters):
    """See girthforge._pykernel.gallager_b."""
    cdef i32[::1] chk_ptr = np.ascontiguousarray(chk_ptr_in, dtype=np.int32)
    cdef i32[::1] chk_var = np.ascontiguousarray(chk_var_in, dtype=np.int32)
    cdef i32[::1] var_ptr = np.ascontiguousarray(var_ptr_in, dtype=np.int32)
    cdef i32[::1] vperm = np.ascontiguousarray(vm_perm_in, dtype=np.int32)
    r_np = np.ascontiguousarray(received_in, dtype=np.uint8)
    cdef unsigned char[::1] r = r_np
    cdef int M = chk_ptr.shape[0] - 1
    cdef int N = var_ptr.shape[0] - 1
    cdef int E = chk_var.shape[0]
    cdef int m, e, v, i, it, par, ok, deg, ones, dis_total, b, dis_e, votes
    cdef unsigned char rv, u
    ok = 1
    for m in range(M):
        par = 0
        for e in range(chk_ptr[m], chk_ptr[m + 1]):
            par ^= r[chk_var[e]]
        if par:
            ok = 0
            break
    if ok:
        return r_np.copy(), True, 0
    coe_np = np.empty(E, dtype=np.int32)
    cdef i32[::1] coe = coe_np
    for m in range(M):
        for e in range(chk_ptr[m], chk_ptr[m + 1]):
            coe[e] = m
    msgs_np = np.empty(E, dtype=np.uint8)
    cdef unsigned char[::1] msgs = msgs_np
    for e in range(E):
        msgs[e] = r[chk_var[e]]
    par_np = np.empty(M, dtype=np.uint8)
    cdef unsigned char[::1] parr = par_np
    est_np = r_np.copy()
    cdef unsigned char[::1] est = est_np
    ubuf_np = np.empty(E, dtype=np.uint8)
    cdef unsigned char[::1] ubuf = ubuf_np
    for it in range(1, max_iters + 1):
        for m in range(M):
            par = 0
            for e in range(chk_ptr[m], chk_ptr[m + 1]):
                par ^= msgs[e]
            parr[m] = <unsigned char> par
        for v in range(N):
            deg = var_ptr[v + 1] - var_ptr[v]
            rv = r[v]
            ones = 0
            for i in range(var_ptr[v], var_ptr[v + 1]):
                e = vperm[i]
                u = parr[coe[e]] ^ msgs[e]
                ubuf[i] = u
                ones += u
            dis_total = (deg - ones) if rv else ones
            b = (deg + 1) >> 1
            for i in range(var_ptr[v], var_ptr[v + 1]):
                e = vperm[i]
                dis_e = dis_total - (1 if ubuf[i] != rv else 0)
                msgs[e] = (rv ^ 1) if dis_e >= b else rv
            votes = 2 * (ones + rv)
            if votes > deg + 1:
                est[v] = 1
            elif votes < deg + 1:
                est[v] = 0
            else:
                est[v] = rv
        ok = 1
        for m in range(M):
            par = 0
            for e in range(chk_ptr[m], chk_ptr[m + 1]):
                par ^= est[chk_var[e]]
            if par:
                ok = 0
                break
        if ok:
            return est_np, True, it
    return est_np, False, max_iters
