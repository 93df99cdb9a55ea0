"""Hierarchical mapping of a modular program onto slots above a bus.

Each module is mapped once in an isolated world whose own region sits at
slot 0. The result, a ModuleProfile, is a relocatable template: record
times relative to the call's start, x relative to the callee's slot. A
call site passes its arguments over the bus, instantiates the callee's
template at the current time and slot, and passes the arguments back.

Timing is tracked per cell (``free``: the time a cell is next available)
and per lane of the bus. Depth is tracked per cell as the cycle count of
the last record on it; a record's cycle is the maximum over its cells
plus its weight (1 for gates, ``swap_cycle_weight`` for SWAP/MOVE), and a
MOVE into an empty cell takes the source cell's count. Because every
update is a max/plus of earlier values, a template's effect on cycle
counts is a max-plus linear map, which the profile stores as a matrix
over the cells it touches.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import kernel
from .arch import (
    ArchConfig,
    Cell,
    LayoutState,
    ModuleRegion,
    allocate_region,
    deallocate_region,
)
from .placement import Placement, place_module
from .qasm import Call, Gate1, Gate2, Program, topo_order
from .syscode import (
    OP_ID,
    OP_MOVE,
    OP_SWAP,
    ROUTE,
    Block,
    CallSegment,
    PassRecords,
    Repeat,
    SystemCode,
)

NEG = -(1 << 40)


@dataclass
class ModuleProfile:
    """Memoized outcome of mapping a module once."""

    name: str
    region: ModuleRegion
    placement: Placement
    internal_time: int
    internal_cycle: int
    internal_swaps: int
    internal_gates: Counter
    final_param_cells: list[Cell]
    final_local_cells: dict[str, Cell]
    code: SystemCode
    footprint: tuple[int, int]
    peak_area: int
    touched: np.ndarray = field(repr=False)      # (k, 2) cells, x relative to own slot
    touched_end: np.ndarray = field(repr=False)  # relative time each touched cell is released
    lane_end: dict[int, int] = field(repr=False)
    entry: np.ndarray | None = field(default=None, repr=False)         # (m, 2) cells
    transfer: np.ndarray | None = field(default=None, repr=False)      # (m, m) max-plus matrix
    transfer_max: np.ndarray | None = field(default=None, repr=False)  # (m,) max record cycle

    @property
    def region_shape(self) -> tuple[int, int, int, int, int]:
        r = self.region
        return (r.width, r.height, len(r.param_cells), len(r.local_cells), len(r.null_cells))


class GlobalTable(dict):
    """Module name -> ModuleProfile, with time[M] / cycle[M] accessors."""

    def time(self, name: str) -> int:
        return self[name].internal_time

    def cycle(self, name: str) -> int:
        return self[name].internal_cycle


@dataclass
class MappingResult:
    system_code: SystemCode
    global_table: GlobalTable
    exec_time: int
    depth: int
    computing_qubits: int
    bus_qubits: int
    footprint: tuple[int, int]
    wallclock: float
    mode: str
    program: Program | None = field(default=None, repr=False)
    call_counts: dict[str, int] = field(default_factory=dict)
    cfg: ArchConfig | None = field(default=None, repr=False)
    _report: object = field(default=None, repr=False)

    @property
    def report(self):
        if self._report is None:
            from .report import build_report
            self._report = build_report(self)
        return self._report


def default_bandwidth(p: Program) -> int:
    return max([1] + [len(p.modules[n].params) for n in topo_order(p)])


class _Frame:
    __slots__ = ("code", "ids", "module", "n_own", "name", "pos", "region", "stats", "world")

    def __init__(self, name, module, world, pos, ids, stats, code, region):
        self.name = name
        self.module = module
        self.world = world
        self.pos = pos
        self.ids = ids
        self.stats = stats
        self.code = code
        self.region = region
        self.n_own = len(ids)


class HierarchicalMapper:
    def __init__(self, program: Program, cfg: ArchConfig | None = None, *, compress: bool = True,
                 backend: str | None = None, placements: dict[str, Placement] | None = None):
        self.p = program
        self.cfg = cfg or ArchConfig()
        self.bw = self.cfg.bus_bandwidth or default_bandwidth(program)
        self.compress = compress
        self.backend = backend
        self.w = self.cfg.swap_cycle_weight
        self.table = GlobalTable()
        self.builds: Counter = Counter()
        self._layouts: dict[str, tuple[ModuleRegion, Placement]] = {}
        for name, pl in (placements or {}).items():
            m = program.modules[name]
            self._layouts[name] = (ModuleRegion.build(0, (0, 0), len(m.params), len(m.local_qubits)), pl)
        self._ops: dict[str, kernel.OpArrays] = {}
        self._footprints: dict[str, tuple[int, int, int]] = {}

    # -- static per-module data ------------------------------------------------

    def layout_of(self, name: str) -> tuple[ModuleRegion, Placement]:
        if name not in self._layouts:
            m = self.p.modules[name]
            region = ModuleRegion.build(0, (0, 0), len(m.params), len(m.local_qubits))
            self._layouts[name] = (region, place_module(m, region, self.cfg.placement_mode,
                                                        self.cfg.placement_budget))
        return self._layouts[name]

    def footprint(self, name: str) -> tuple[int, int, int]:
        """(width, height, peak stacked region area) over all call paths below ``name``."""
        if name not in self._footprints:
            region, _ = self.layout_of(name)
            fw, fh, area = 0, 0, 0
            for callee in {ins.callee for ins in self.p.modules[name].body if isinstance(ins, Call)}:
                cw, ch, ca = self.footprint(callee)
                fw, fh, area = max(fw, cw + 1), max(fh, ch), max(area, ca)
            self._footprints[name] = (region.width + fw, max(region.height, fh),
                                      region.width * region.height + area)
        return self._footprints[name]

    def ops_of(self, name: str) -> kernel.OpArrays:
        if name not in self._ops:
            m = self.p.modules[name]
            ids = {q: i for i, q in enumerate(m.qubits)}
            gt = self.cfg.gate_time
            cols: tuple[list, ...] = ([], [], [], [], [], [])
            for idx, ins in enumerate(m.body):
                if isinstance(ins, Gate1):
                    row = (1, ids[ins.q], 0, OP_ID[ins.op], gt[ins.op], idx)
                elif isinstance(ins, Gate2):
                    row = (2, ids[ins.a], ids[ins.b], OP_ID[ins.op], gt[ins.op], idx)
                else:
                    row = (0, 0, 0, 0, 0, idx)
                for c, v in zip(cols, row):
                    c.append(v)
            self._ops[name] = kernel.OpArrays.from_lists(*cols)
        return self._ops[name]

    # -- profiles --------------------------------------------------------------

    def profile(self, name: str) -> ModuleProfile:
        if self.cfg.memoize and name in self.table:
            return self.table[name]
        prof = self._map_isolated(name, need_transfer=name != self.p.main)
        self.table[name] = prof
        self.builds[name] += 1
        return prof

    def _map_isolated(self, name: str, need_transfer: bool) -> ModuleProfile:
        m = self.p.modules[name]
        region, placement = self.layout_of(name)
        fw, fh, area = self.footprint(name)
        world = LayoutState(self.bw, fw, fh)
        allocate_region(world, len(m.params), len(m.local_qubits))
        qubits = m.qubits
        ids = {q: i for i, q in enumerate(qubits)}
        extra = max([0] + [len(self.p.modules[i.callee].qubits) for i in m.body if isinstance(i, Call)])
        pos = np.full(len(qubits) + extra, -1, dtype=np.int64)
        for q, i in ids.items():
            idx = world.index(*placement.assign[q])
            pos[i] = idx
            world.occ[idx] = i
        stats = np.zeros(2, dtype=np.int64)
        code = SystemCode(bus_bandwidth=self.bw, swap_cycle_weight=self.w)
        frame = _Frame(name, m, world, pos, ids, stats, code, region)
        self._map_body(frame)

        where = {}
        for y in range(region.height):
            for x in range(region.width):
                q = world.occ[world.index(x, y)]
                if 0 <= q < len(qubits):
                    where[qubits[q]] = (x, y)
        final_params = [where[q] for q in m.params]
        final_locals = {q: where[q] for q in m.local_qubits}

        touched_idx = np.flatnonzero(world.free > 0)
        touched = np.stack([touched_idx % world.width, touched_idx // world.width], axis=1)
        lane_end = {int(l): int(t) for l, t in enumerate(world.lane_free) if t > 0}
        summ = code.summary()
        gates = Counter({k[5:]: v for k, v in summ.items() if k.startswith("gate.")})
        prof = ModuleProfile(
            name=name, region=region, placement=placement,
            internal_time=int(stats[0]), internal_cycle=int(stats[1]),
            internal_swaps=summ["route"] + summ["pass"], internal_gates=gates,
            final_param_cells=final_params, final_local_cells=final_locals, code=code,
            footprint=(fw, fh), peak_area=area, touched=touched,
            touched_end=world.free[touched_idx].copy(), lane_end=lane_end,
        )
        if need_transfer:
            entry = {tuple(c) for c in touched.tolist()}
            entry.update(placement.assign[q] for q in m.params)
            prof.entry = np.array(sorted(entry, key=lambda c: (c[1], c[0])), dtype=np.int64).reshape(-1, 2)
            prof.transfer, prof.transfer_max = self._cycle_transfer(code, prof.entry)
        return prof

    # -- body ------------------------------------------------------------------

    def _map_body(self, f: _Frame) -> None:
        body = f.module.body
        ops = self.ops_of(f.name)
        world = f.world
        cfg = self.cfg
        i, n = 0, len(body)
        while i < n:
            ins = body[i]
            if not isinstance(ins, Call):
                j = i
                while j < n and not isinstance(body[j], Call):
                    j += 1
                f.code.append(kernel.schedule(ops, i, j, f.pos, world.occ, world.free, world.cyc,
                                              world.width, world.height, cfg.swap_time, self.w,
                                              f.stats, module=f.name, backend=self.backend))
                i = j
                continue
            run_end = i
            if self.compress:
                while run_end + 1 < n and body[run_end + 1] == ins:
                    run_end += 1
            k = i
            while k <= run_end:
                remaining = run_end - k
                if remaining:
                    snap = (world.free.copy(), world.cyc.copy(), world.lane_free.copy(), world.occ.copy())
                    touched: set[int] | None = set()
                else:
                    touched = None
                seg, end, cyc = self._call(f, k, ins, touched)
                if remaining and self._try_repeat(f, seg, snap, touched, remaining, end, cyc):
                    break
                k += 1
            i = run_end + 1

    def _try_repeat(self, f: _Frame, seg: CallSegment, snap, touched: set[int], r: int,
                    end: int, cyc: int) -> bool:
        """Fold the remaining identical calls when one call shifted its whole state uniformly."""
        world = f.world
        free0, cyc0, lane0, occ0 = snap
        if not np.array_equal(world.occ, occ0):
            return False
        s = np.fromiter(touched, dtype=np.int64, count=len(touched))
        dfree = world.free[s] - free0[s]
        dt = int(dfree[0])
        if dt <= 0 or np.any(dfree != dt) or np.any(world.lane_free - lane0 != dt):
            return False
        dcyc = world.cyc[s] - cyc0[s]
        dc = int(dcyc[0])
        if np.any(dcyc != dc):
            return False
        world.free[s] += r * dt
        world.cyc[s] += r * dc
        world.lane_free += r * dt
        f.stats[0] = max(int(f.stats[0]), end + r * dt)
        f.stats[1] = max(int(f.stats[1]), cyc + r * dc)
        f.code.append(Repeat(seg, r, dt))
        return True

    # -- calls -----------------------------------------------------------------

    def _hop(self, world: LayoutState, pos, a: int, b: int, rows: list, suffix: str,
             touched, acc: list) -> None:
        """Move the qubit in cell a to the adjacent cell b inside a region."""
        occ, free, cyc = world.occ, world.free, world.cyc
        q = int(occ[a])
        o = int(occ[b])
        t = max(int(free[a]), int(free[b]))
        end = t + self.cfg.swap_time
        if o >= 0:
            c = max(int(cyc[a]), int(cyc[b])) + self.w
            cyc[a] = c
            pos[o] = a
            occ[a] = o
            op = OP_SWAP
        else:
            c = int(cyc[a]) + self.w
            occ[a] = -1
            op = OP_MOVE
        cyc[b] = c
        occ[b] = q
        pos[q] = b
        free[a] = free[b] = end
        W = world.width
        rows.append((t, self.cfg.swap_time, op, a % W, a // W, b % W, b // W, suffix))
        if touched is not None:
            touched.add(a)
            touched.add(b)
        acc[0] = max(acc[0], end)
        acc[1] = max(acc[1], c)

    def _bus(self, world: LayoutState, pos, q: int, src: int, dst: int, rows: list, suffix: str,
             touched, acc: list) -> None:
        """Carry qubit q from row-0 cell src to empty row-0 cell dst along one bus lane."""
        lane = int(np.argmin(world.lane_free))
        L = -1 - lane
        W = world.width
        mt, w = self.cfg.move_time, self.w
        free, cyc, occ = world.free, world.cyc, world.occ
        xs, xd = src % W, dst % W
        t = max(int(free[src]), int(world.lane_free[lane]))
        c = int(cyc[src]) + w
        rows.append((t, mt, OP_MOVE, xs, 0, xs, L, suffix))
        t += mt
        free[src] = t
        step = 1 if xd > xs else -1
        x = xs
        while x != xd:
            rows.append((t, mt, OP_MOVE, x, L, x + step, L, suffix))
            x += step
            t += mt
            c += w
        t = max(t, int(free[dst]))
        rows.append((t, mt, OP_MOVE, xd, L, xd, 0, suffix))
        end = t + mt
        c += w
        free[dst] = end
        cyc[dst] = c
        world.lane_free[lane] = end
        occ[src] = -1
        occ[dst] = q
        pos[q] = dst
        if touched is not None:
            touched.add(src)
            touched.add(dst)
        acc[0] = max(acc[0], end)
        acc[1] = max(acc[1], c)

    def _call(self, f: _Frame, idx: int, ins: Call, touched) -> tuple[CallSegment, int, int]:
        callee = self.profile(ins.callee)
        cm = self.p.modules[ins.callee]
        world, pos = f.world, f.pos
        W = world.width
        region = allocate_region(world, len(cm.params), len(cm.local_qubits))
        x0 = region.origin[0]
        acc = [0, 0]
        fwd: list = []
        homes = []
        for k, a in enumerate(ins.args):
            q = f.ids[a]
            c = int(pos[q])
            x, y = c % W, c // W
            for yy in range(y, 0, -1):
                self._hop(world, pos, yy * W + x, (yy - 1) * W + x, fwd, f">{k}", touched, acc)
            homes.append((x, y))
            pcx, pcy = callee.placement.assign[cm.params[k]]
            self._bus(world, pos, q, x, pcy * W + x0 + pcx, fwd, f">{k}", touched, acc)

        # start the callee once every argument has arrived and its cells and lanes are free
        arrive = [int(pos[f.ids[a]]) for a in ins.args]
        tidx = (callee.touched[:, 1] * W + callee.touched[:, 0] + x0) if len(callee.touched) else \
            np.empty(0, dtype=np.int64)
        t0 = max([0] + [int(world.free[c]) for c in arrive])
        if len(tidx):
            t0 = max(t0, int(world.free[tidx].max()))
        for lane in callee.lane_end:
            t0 = max(t0, int(world.lane_free[lane]))
        if len(tidx):
            world.free[tidx] = t0 + callee.touched_end
        final_idx = [cy * W + x0 + cx for cx, cy in callee.final_param_cells]
        world.free[final_idx] = t0 + callee.internal_time
        for lane, e in callee.lane_end.items():
            world.lane_free[lane] = t0 + e
        eidx = callee.entry[:, 1] * W + callee.entry[:, 0] + x0
        vin = world.cyc[eidx]
        world.cyc[eidx] = (vin[:, None] + callee.transfer).max(axis=0)
        acc[0] = max(acc[0], t0 + callee.internal_time)
        if len(eidx):
            acc[1] = max(acc[1], int((vin + callee.transfer_max).max()))
        if touched is not None:
            touched.update(tidx.tolist())
            touched.update(final_idx)
            touched.update(eidx.tolist())

        # callee's final occupancy: arguments on their final param cells, locals as temporaries
        rcells = world.region_indices(region)
        world.occ[rcells] = -1
        for k, a in enumerate(ins.args):
            q = f.ids[a]
            pos[q] = final_idx[k]
            world.occ[final_idx[k]] = q
        for j, (lq, (cx, cy)) in enumerate(callee.final_local_cells.items()):
            tmp = f.n_own + j
            pos[tmp] = cy * W + x0 + cx
            world.occ[pos[tmp]] = tmp

        bwd: list = []
        for k in reversed(range(len(ins.args))):
            q = f.ids[ins.args[k]]
            c = int(pos[q])
            x, y = c % W, c // W
            for yy in range(y, 0, -1):
                self._hop(world, pos, yy * W + x, (yy - 1) * W + x, bwd, f"<{k}", touched, acc)
            hx, hy = homes[k]
            self._bus(world, pos, q, x, hx, bwd, f"<{k}", touched, acc)
            for yy in range(hy):
                self._hop(world, pos, yy * W + hx, (yy + 1) * W + hx, bwd, f"<{k}", touched, acc)
        deallocate_region(world, region)

        seg = CallSegment(f.name, idx, PassRecords(fwd), callee.code, x0, t0, PassRecords(bwd), meta=callee)
        f.code.append(seg)
        f.stats[0] = max(int(f.stats[0]), acc[0])
        f.stats[1] = max(int(f.stats[1]), acc[1])
        return seg, acc[0], acc[1]

    # -- max-plus cycle transfer ---------------------------------------------

    def _cycle_transfer(self, code: SystemCode, entry: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        m = len(entry)
        index = {(int(x), int(y)): i for i, (x, y) in enumerate(entry)}
        V = np.full((m, m), NEG, dtype=np.int64)
        np.fill_diagonal(V, 0)
        bus: dict[Cell, np.ndarray] = {}
        mx = np.full(m, NEG, dtype=np.int64)
        w = self.w

        def get(c: Cell) -> np.ndarray:
            i = index.get(c)
            return V[i] if i is not None else bus[c]

        def put(c: Cell, v: np.ndarray) -> None:
            i = index.get(c)
            if i is not None:
                V[i] = v
            else:
                bus[c] = v

        def rows(rws: list) -> None:
            nonlocal mx
            for _s, _d, op, x1, y1, x2, y2, _suf in rws:
                if op == OP_MOVE:
                    v = get((x1, y1)) + w
                    put((x2, y2), v)
                else:
                    v = np.maximum(get((x1, y1)), get((x2, y2))) + w
                    put((x1, y1), v)
                    put((x2, y2), v)
                mx = np.maximum(mx, v)

        def call(seg: CallSegment) -> None:
            nonlocal mx
            rows(seg.forward.rows)
            prof: ModuleProfile = seg.meta
            cells = [(int(x) + seg.dx, int(y)) for x, y in prof.entry]
            vin = np.stack([get(c) for c in cells]) if cells else np.empty((0, m), dtype=np.int64)
            if cells:
                new = (vin[:, None, :] + prof.transfer[:, :, None]).max(axis=0)
                for c, v in zip(cells, new):
                    put(c, v)
                mx = np.maximum(mx, (vin + prof.transfer_max[:, None]).max(axis=0))
            rows(seg.backward.rows)

        for seg in code.segments:
            if isinstance(seg, Block):
                cols = zip(seg.op.tolist(), seg.x1.tolist(), seg.y1.tolist(), seg.x2.tolist(),
                           seg.y2.tolist(), seg.two.tolist(), seg.kind.tolist())
                for op, x1, y1, x2, y2, two, kind in cols:
                    if not two:
                        v = get((x1, y1)) + 1
                        put((x1, y1), v)
                    elif op == OP_MOVE:
                        v = get((x1, y1)) + w
                        put((x2, y2), v)
                    else:
                        v = np.maximum(get((x1, y1)), get((x2, y2))) + (w if kind == ROUTE else 1)
                        put((x1, y1), v)
                        put((x2, y2), v)
                    mx = np.maximum(mx, v)
            elif isinstance(seg, CallSegment):
                call(seg)
            elif isinstance(seg, Repeat):
                for _ in range(seg.count):
                    call(seg.call)
        V[V < NEG // 2] = NEG
        mx[mx < NEG // 2] = NEG
        return V.T.copy(), mx


def guarded_placements(p: Program, cfg: ArchConfig, *, compress: bool = True,
                       backend: str | None = None) -> dict[str, Placement]:
    """Per-module choice between FCFS and optimized placement, callees first.

    A module keeps its optimized placement only when the whole program's
    (depth, time) does not get worse. The static cost ignores that routing
    SWAPs are not undone and that a callee's final cells shape its caller's
    passing, so a cheaper placement can map deeper.
    """
    chosen: dict[str, Placement] = {}
    opts: dict[str, Placement] = {}
    for name in topo_order(p):
        m = p.modules[name]
        region = ModuleRegion.build(0, (0, 0), len(m.params), len(m.local_qubits))
        chosen[name] = place_module(m, region, "fcfs")
        opts[name] = place_module(m, region, "optimized", cfg.placement_budget)

    def score(pl: dict[str, Placement]) -> tuple[int, int]:
        prof = HierarchicalMapper(p, cfg, compress=compress, backend=backend, placements=pl).profile(p.main)
        return prof.internal_cycle, prof.internal_time

    best = score(chosen)
    for name in topo_order(p):
        if opts[name].assign == chosen[name].assign:
            continue
        trial = dict(chosen, **{name: opts[name]})
        s = score(trial)
        if s <= best:
            chosen, best = trial, s
    return chosen


def map_program(p: Program, cfg: ArchConfig | None = None, *, compress: bool = True,
                backend: str | None = None) -> MappingResult:
    """Map a modular program hierarchically, starting from main at slot 0."""
    cfg = cfg or ArchConfig()
    t_start = time.perf_counter()
    placements = None
    if cfg.placement_mode == "optimized" and cfg.placement_guard:
        placements = guarded_placements(p, cfg, compress=compress, backend=backend)
    mapper = HierarchicalMapper(p, cfg, compress=compress, backend=backend, placements=placements)
    prof = mapper.profile(p.main)
    wall = time.perf_counter() - t_start
    from .qasm import call_counts
    fw, fh, area = mapper.footprint(p.main)
    prof.code.meta = {"footprint": (fw, fh + mapper.bw), "qubits": (area, mapper.bw * fw)}
    return MappingResult(
        system_code=prof.code, global_table=mapper.table, exec_time=prof.internal_time,
        depth=prof.internal_cycle, computing_qubits=area, bus_qubits=mapper.bw * fw,
        footprint=(fw, fh + mapper.bw), wallclock=wall, mode="hierarchical", program=p,
        call_counts=call_counts(p), cfg=cfg,
    )


# ---------------------------------------------------------------------------
# single-step scheduling API over a LayoutState


@dataclass
class LocalTable:
    """Per-qubit view (time, cycle, cell) of a module's qubits on a layout."""

    layout: LayoutState
    pos: np.ndarray
    ids: dict[str, int]

    @classmethod
    def place(cls, layout: LayoutState, region: ModuleRegion, placement: Placement) -> LocalTable:
        ids = {q: i for i, q in enumerate(placement.assign)}
        pos = np.full(len(ids), -1, dtype=np.int64)
        for q, i in ids.items():
            cx, cy = region.to_global(placement.assign[q])
            pos[i] = layout.index(cx, cy)
            layout.occ[pos[i]] = i
        return cls(layout, pos, ids)

    def time(self, q: str) -> int:
        return int(self.layout.free[self.pos[self.ids[q]]])

    def cycle(self, q: str) -> int:
        return int(self.layout.cyc[self.pos[self.ids[q]]])

    def cell(self, q: str) -> Cell:
        return self.layout.coords(int(self.pos[self.ids[q]]))


def _single(lt: LocalTable, kind: int, op: str, a: str, b: str | None, cfg: ArchConfig,
            stats: np.ndarray | None = None) -> Block:
    ops = kernel.OpArrays.from_lists([kind], [lt.ids[a]], [lt.ids[b] if b else 0], [OP_ID[op]],
                                     [cfg.gate_time[op]], [0])
    stats = stats if stats is not None else np.zeros(2, dtype=np.int64)
    L = lt.layout
    return kernel.schedule(ops, 0, 1, lt.pos, L.occ, L.free, L.cyc, L.width, L.height,
                           cfg.swap_time, cfg.swap_cycle_weight, stats, module="local")


def schedule_1q(gate: str, q: str, lt: LocalTable, cfg: ArchConfig | None = None) -> Block:
    return _single(lt, 1, gate, q, None, cfg or ArchConfig())


def schedule_2q(gate: str, qi: str, qj: str, lt: LocalTable, cfg: ArchConfig | None = None) -> Block:
    """Route qi next to qj if needed, then run the gate when both are idle."""
    return _single(lt, 2, gate, qi, qj, cfg or ArchConfig())


def route_swap_chain(qi: str, qj: str, lt: LocalTable, cfg: ArchConfig | None = None) -> list[tuple]:
    """Move qi toward qj (row first, then column) until adjacent; returns the hop records."""
    cfg = cfg or ArchConfig()
    L = lt.layout
    W = L.width
    mapper = HierarchicalMapper.__new__(HierarchicalMapper)
    mapper.cfg, mapper.w = cfg, cfg.swap_cycle_weight
    rows: list = []
    acc = [0, 0]
    a, b = int(lt.pos[lt.ids[qi]]), int(lt.pos[lt.ids[qj]])
    while True:
        xa, ya, xb, yb = a % W, a // W, b % W, b // W
        if abs(xa - xb) + abs(ya - yb) <= 1:
            return rows
        nxt = a + (1 if xb > xa else -1) if xa != xb else a + (W if yb > ya else -W)
        mapper._hop(L, lt.pos, a, nxt, rows, "~r", None, acc)
        a = nxt


def aggregate(lt: LocalTable) -> tuple[int, int]:
    """(time[M], cycle[M]): maxima over the module's qubits; (0, 0) when empty."""
    if not lt.ids:
        return 0, 0
    cells = lt.pos[list(lt.ids.values())]
    return int(lt.layout.free[cells].max()), int(lt.layout.cyc[cells].max())
