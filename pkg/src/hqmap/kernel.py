"""Gate-scheduling kernel selection.

The compiled ``_ckernel`` is used when it was built; otherwise (or with
``HQMAP_PURE=1``) the pure-Python ``_pykernel`` takes over. Both share
one signature, see ``_pykernel.run_ops``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _pykernel
from .syscode import OP_MOVE, OP_SWAP, Block

try:
    if os.environ.get("HQMAP_PURE"):
        raise ImportError
    from . import _ckernel
except ImportError:
    _ckernel = None

BACKEND = "cython" if _ckernel is not None else "python"
_CHUNK = 1 << 16


def get_run_ops(backend: str | None = None):
    backend = backend or BACKEND
    if backend == "cython":
        if _ckernel is None:
            raise RuntimeError("compiled kernel not available")
        return _ckernel.run_ops
    return _pykernel.run_ops


@dataclass
class OpArrays:
    """Encoded gate stream: kind 1/2, operand qubit ids, opcode, duration, tag."""

    kind: np.ndarray
    qa: np.ndarray
    qb: np.ndarray
    code: np.ndarray
    dur: np.ndarray
    tag: np.ndarray

    def __len__(self) -> int:
        return len(self.kind)

    @classmethod
    def from_lists(cls, kind, qa, qb, code, dur, tag) -> OpArrays:
        arr = lambda v: np.ascontiguousarray(v, dtype=np.int64)
        return cls(arr(kind), arr(qa), arr(qb), arr(code), arr(dur), arr(tag))


def schedule(ops: OpArrays, lo: int, hi: int, pos: np.ndarray, occ: np.ndarray, free: np.ndarray,
             cyc: np.ndarray, width: int, height: int, swap_time: int, swap_w: int,
             stats: np.ndarray, module: str | None = None, tag_names: list[str] | None = None,
             backend: str | None = None) -> Block:
    """Run ops[lo:hi] on the grid and return the emitted records as one Block.

    ``stats`` is a 2-vector (max end time, max cycle) updated in place.
    """
    run = get_run_ops(backend)
    reserve = width + height + 2
    cap = max(_CHUNK, 4 * reserve)
    parts = []
    i = lo
    while i < hi:
        bufs = [np.empty(cap, dtype=np.int64) for _ in range(7)]
        i, n = run(ops.kind, ops.qa, ops.qb, ops.code, ops.dur, ops.tag, i, hi,
                   pos, occ, free, cyc, width, swap_time, swap_w, OP_SWAP, OP_MOVE,
                   *bufs, reserve, stats)
        parts.append([b[:n] for b in bufs])
    if parts:
        start, dur, op, c1, c2, tag, kind = (np.concatenate(col) for col in zip(*parts))
    else:
        start = dur = op = c1 = c2 = tag = kind = np.empty(0, dtype=np.int64)
    two = c2 >= 0
    c2s = np.where(two, c2, 0)
    return Block(start, dur, op, c1 % width, c1 // width, c2s % width, c2s // width, two,
                 tag, kind, module, tag_names)
