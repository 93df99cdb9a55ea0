"""Baseline mapping of a flattened program onto one most-square grid."""

from __future__ import annotations

import math
import time

import numpy as np

from . import kernel
from .arch import ArchConfig
from .mapper import GlobalTable, MappingResult
from .qasm import DEFAULT_FLATTEN_LIMIT, FlatProgram, Gate1, Program, flatten
from .syscode import OP_ID, SystemCode


class FlatGrid:
    """Row-major first-come placement of every qubit."""

    def __init__(self, qubits: list[str]):
        n = len(qubits)
        self.width = max(1, math.isqrt(n - 1) + 1) if n else 1
        self.height = max(1, -(-n // self.width))
        self.assign = {q: (i % self.width, i // self.width) for i, q in enumerate(qubits)}
        self.occupancy = {c: q for q, c in self.assign.items()}


def encode_flat(fp: FlatProgram, cfg: ArchConfig) -> kernel.OpArrays:
    """Kernel op arrays for a flat gate list; qubit ids follow ``fp.qubits``."""
    ids = {q: i for i, q in enumerate(fp.qubits)}
    gt = cfg.gate_time
    kind, qa, qb, code, dur = [], [], [], [], []
    for g in fp.instrs:
        if isinstance(g, Gate1):
            kind.append(1)
            qa.append(ids[g.q])
            qb.append(0)
        else:
            kind.append(2)
            qa.append(ids[g.a])
            qb.append(ids[g.b])
        code.append(OP_ID[g.op])
        dur.append(gt[g.op])
    return kernel.OpArrays.from_lists(kind, qa, qb, code, dur, range(len(kind)))



def map_flat(fp: FlatProgram, cfg: ArchConfig | None = None, *, backend: str | None = None,
             _t_start: float | None = None) -> MappingResult:
    cfg = cfg or ArchConfig()
    t_start = time.perf_counter() if _t_start is None else _t_start
    grid = FlatGrid(fp.qubits)
    W, H = grid.width, grid.height
    ops = encode_flat(fp, cfg)
    pos = np.array([y * W + x for x, y in grid.assign.values()], dtype=np.int64)
    occ = np.full(W * H, -1, dtype=np.int64)
    occ[pos] = np.arange(len(pos))
    free = np.zeros(W * H, dtype=np.int64)
    cyc = np.zeros(W * H, dtype=np.int64)
    stats = np.zeros(2, dtype=np.int64)
    sc = SystemCode(swap_cycle_weight=cfg.swap_cycle_weight)
    sc.append(kernel.schedule(ops, 0, len(ops), pos, occ, free, cyc, W, H, cfg.swap_time,
                              cfg.swap_cycle_weight, stats, tag_names=fp.tags, backend=backend))
    sc.meta = {"footprint": (W, H), "qubits": (len(fp.qubits), 0)}
    wall = time.perf_counter() - t_start
    return MappingResult(
        system_code=sc, global_table=GlobalTable(), exec_time=int(stats[0]), depth=int(stats[1]),
        computing_qubits=len(fp.qubits), bus_qubits=0, footprint=(W, H), wallclock=wall,
        mode="flat", cfg=cfg,
    )


def map_flat_program(p: Program, cfg: ArchConfig | None = None, *,
                     limit: int = DEFAULT_FLATTEN_LIMIT, backend: str | None = None) -> MappingResult:
    """Flatten then map; the reported wall-clock covers both steps."""
    t_start = time.perf_counter()
    fp = flatten(p, limit)
    mr = map_flat(fp, cfg, backend=backend, _t_start=t_start)
    mr.program = p
    return mr
