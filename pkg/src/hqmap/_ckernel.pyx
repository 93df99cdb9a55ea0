# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled gate scheduler. Semantics must match _pykernel.run_ops exactly."""

from libc.stdint cimport int64_t


def run_ops(const int64_t[::1] kind, const int64_t[::1] qa, const int64_t[::1] qb,
            const int64_t[::1] code, const int64_t[::1] dur, const int64_t[::1] tag,
            Py_ssize_t lo, Py_ssize_t hi,
            int64_t[::1] pos, int64_t[::1] occ, int64_t[::1] free, int64_t[::1] cyc,
            Py_ssize_t W, int64_t swap_time, int64_t swap_w, int64_t op_swap, int64_t op_move,
            int64_t[::1] o_start, int64_t[::1] o_dur, int64_t[::1] o_op,
            int64_t[::1] o_c1, int64_t[::1] o_c2, int64_t[::1] o_tag, int64_t[::1] o_kind,
            Py_ssize_t reserve, int64_t[::1] stats):
    cdef Py_ssize_t i = lo, n = 0, cap = o_start.shape[0]
    cdef int64_t a, b, ca, cb, nc, o, t, c, d, xa, ya, xb, yb, max_end = stats[0], max_cyc = stats[1]
    while i < hi:
        if n + reserve > cap:
            break
        a = qa[i]
        ca = pos[a]
        if kind[i] == 1:
            t = free[ca]
            d = dur[i]
            c = cyc[ca] + 1
            free[ca] = t + d
            cyc[ca] = c
            o_start[n] = t; o_dur[n] = d; o_op[n] = code[i]; o_c1[n] = ca; o_c2[n] = -1
            o_tag[n] = tag[i]; o_kind[n] = 0
            n += 1
            if t + d > max_end:
                max_end = t + d
            if c > max_cyc:
                max_cyc = c
        else:
            b = qb[i]
            cb = pos[b]
            while True:
                xa = ca % W; ya = ca // W; xb = cb % W; yb = cb // W
                if (xa - xb if xa > xb else xb - xa) + (ya - yb if ya > yb else yb - ya) <= 1:
                    break
                if xa != xb:
                    nc = ca + 1 if xb > xa else ca - 1
                else:
                    nc = ca + W if yb > ya else ca - W
                o = occ[nc]
                t = free[ca] if free[ca] > free[nc] else free[nc]
                if o >= 0:
                    c = (cyc[ca] if cyc[ca] > cyc[nc] else cyc[nc]) + swap_w
                    cyc[ca] = c
                    pos[o] = ca
                    occ[ca] = o
                    o_op[n] = op_swap
                else:
                    c = cyc[ca] + swap_w
                    occ[ca] = -1
                    o_op[n] = op_move
                cyc[nc] = c
                occ[nc] = a
                pos[a] = nc
                free[ca] = t + swap_time
                free[nc] = t + swap_time
                o_start[n] = t; o_dur[n] = swap_time; o_c1[n] = ca; o_c2[n] = nc
                o_tag[n] = tag[i]; o_kind[n] = 1
                n += 1
                if t + swap_time > max_end:
                    max_end = t + swap_time
                if c > max_cyc:
                    max_cyc = c
                ca = nc
            t = free[ca] if free[ca] > free[cb] else free[cb]
            d = dur[i]
            c = (cyc[ca] if cyc[ca] > cyc[cb] else cyc[cb]) + 1
            free[ca] = t + d; free[cb] = t + d
            cyc[ca] = c; cyc[cb] = c
            o_start[n] = t; o_dur[n] = d; o_op[n] = code[i]; o_c1[n] = ca; o_c2[n] = cb
            o_tag[n] = tag[i]; o_kind[n] = 0
            n += 1
            if t + d > max_end:
                max_end = t + d
            if c > max_cyc:
                max_cyc = c
        i += 1
    stats[0] = max_end
    stats[1] = max_cyc
    return i, n
