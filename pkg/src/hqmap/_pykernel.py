"""Pure-Python gate scheduler, the fallback for the compiled kernel.

Same signature and semantics as ``_ckernel.run_ops``: schedule ops
``lo..hi`` onto the grid, routing 2-qubit operands together with a
row-first SWAP chain, and write records into the output buffers until
fewer than ``reserve`` slots remain.
"""


def run_ops(kind, qa, qb, code, dur, tag, lo, hi, pos, occ, free, cyc, W,
            swap_time, swap_w, op_swap, op_move,
            o_start, o_dur, o_op, o_c1, o_c2, o_tag, o_kind, reserve, stats):
    cap = len(o_start)
    stop = min(hi, lo + cap)
    kind_l = kind[lo:stop].tolist()
    qa_l = qa[lo:stop].tolist()
    qb_l = qb[lo:stop].tolist()
    code_l = code[lo:stop].tolist()
    dur_l = dur[lo:stop].tolist()
    tag_l = tag[lo:stop].tolist()
    pos_l = pos.tolist()
    occ_l = occ.tolist()
    free_l = free.tolist()
    cyc_l = cyc.tolist()
    out = ([], [], [], [], [], [], [])
    s_app, d_app, op_app, c1_app, c2_app, t_app, k_app = (lst.append for lst in out)
    max_end, max_cyc = int(stats[0]), int(stats[1])
    n = 0
    i = 0
    count = stop - lo
    while i < count:
        if n + reserve > cap:
            break
        a = qa_l[i]
        ca = pos_l[a]
        if kind_l[i] == 1:
            t = free_l[ca]
            d = dur_l[i]
            c = cyc_l[ca] + 1
            free_l[ca] = t + d
            cyc_l[ca] = c
            s_app(t); d_app(d); op_app(code_l[i]); c1_app(ca); c2_app(-1); t_app(tag_l[i]); k_app(0)
            n += 1
            max_end = max(max_end, t + d)
            max_cyc = max(max_cyc, c)
        else:
            b = qb_l[i]
            cb = pos_l[b]
            while True:
                ya, xa = divmod(ca, W)
                yb, xb = divmod(cb, W)
                if abs(xa - xb) + abs(ya - yb) <= 1:
                    break
                if xa != xb:
                    nc = ca + 1 if xb > xa else ca - 1
                else:
                    nc = ca + W if yb > ya else ca - W
                o = occ_l[nc]
                t = max(free_l[ca], free_l[nc])
                if o >= 0:
                    c = max(cyc_l[ca], cyc_l[nc]) + swap_w
                    cyc_l[ca] = c
                    pos_l[o] = ca
                    occ_l[ca] = o
                    op_app(op_swap)
                else:
                    c = cyc_l[ca] + swap_w
                    occ_l[ca] = -1
                    op_app(op_move)
                cyc_l[nc] = c
                occ_l[nc] = a
                pos_l[a] = nc
                free_l[ca] = free_l[nc] = t + swap_time
                s_app(t); d_app(swap_time); c1_app(ca); c2_app(nc); t_app(tag_l[i]); k_app(1)
                n += 1
                max_end = max(max_end, t + swap_time)
                max_cyc = max(max_cyc, c)
                ca = nc
            t = max(free_l[ca], free_l[cb])
            d = dur_l[i]
            c = max(cyc_l[ca], cyc_l[cb]) + 1
            free_l[ca] = free_l[cb] = t + d
            cyc_l[ca] = cyc_l[cb] = c
            s_app(t); d_app(d); op_app(code_l[i]); c1_app(ca); c2_app(cb); t_app(tag_l[i]); k_app(0)
            n += 1
            max_end = max(max_end, t + d)
            max_cyc = max(max_cyc, c)
        i += 1
    pos[:] = pos_l
    occ[:] = occ_l
    free[:] = free_l
    cyc[:] = cyc_l
    for buf, vals in zip((o_start, o_dur, o_op, o_c1, o_c2, o_tag, o_kind), out):
        buf[:n] = vals
    stats[0] = max_end
    stats[1] = max_cyc
    return lo + i, n
