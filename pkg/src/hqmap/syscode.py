"""Timed system code: storage, expansion and the text file format.

A mapped program is kept as a list of segments rather than a flat record
list so that a memoized module template is stored once and instantiated
by reference. Expanding the segments yields the records in emission
order; the file format is one record per line::

    start duration opcode x1 y1 [x2 y2] tag

Tag suffixes classify records: ``~r`` routing SWAP/MOVE before a 2-qubit
gate, ``>k`` / ``<k`` forward / backward passing of call argument ``k``.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from .qasm import GATES, GATES_2Q

OPS = GATES + ("MOVE",)
OP_ID = {name: i for i, name in enumerate(OPS)}
OP_SWAP = OP_ID["SWAP"]
OP_MOVE = OP_ID["MOVE"]
TWO_QUBIT_IDS = frozenset(OP_ID[g] for g in GATES_2Q)

HEADER = "#hqmap-syscode v1"

# record kinds
GATE, ROUTE, FWD, BWD = 0, 1, 2, 3

Record = tuple  # (start, dur, opcode, x1, y1, x2, y2, tag); x2/y2 None for 1-cell records


def classify_tag(tag: str) -> int:
    last = tag.rsplit("/", 1)[-1]
    if last.endswith("~r"):
        return ROUTE
    if ">" in last:
        return FWD
    if "<" in last:
        return BWD
    return GATE


def _empty_summary() -> Counter:
    return Counter()


@dataclass
class Block:
    """Kernel output: parallel arrays, cells as (x, y), tags as instruction index."""

    start: np.ndarray
    dur: np.ndarray
    op: np.ndarray
    x1: np.ndarray
    y1: np.ndarray
    x2: np.ndarray
    y2: np.ndarray
    two: np.ndarray
    tag: np.ndarray
    kind: np.ndarray
    module: str | None = None
    tag_names: list[str] | None = None

    def __len__(self) -> int:
        return len(self.start)

    def records(self, dt: int = 0, dx: int = 0, prefix: str = "", instr_off: int = 0) -> Iterator[Record]:
        cols = [a.tolist() for a in (self.start, self.dur, self.op, self.x1, self.y1,
                                     self.x2, self.y2, self.two, self.tag, self.kind)]
        names = self.tag_names
        mod = self.module
        for s, d, o, x1, y1, x2, y2, two, tg, k in zip(*cols):
            base = names[tg] if names is not None else f"{mod}:{tg}"
            tag = f"{prefix}{base}~r" if k == ROUTE else f"{prefix}{base}"
            if two:
                yield (s + dt, d, OPS[o], x1 + dx, y1, x2 + dx, y2, tag)
            else:
                yield (s + dt, d, OPS[o], x1 + dx, y1, None, None, tag)

    def summary(self) -> Counter:
        c: Counter = Counter()
        kind = self.kind
        gate_ops = self.op[kind == GATE]
        for o, n in zip(*np.unique(gate_ops, return_counts=True)):
            c["gate." + OPS[int(o)]] += int(n)
        c["route"] += int(np.count_nonzero(kind == ROUTE))
        return c


@dataclass
class PassRecords:
    """Passing records of one call: (start, dur, op_id, x1, y1, x2, y2, suffix)."""

    rows: list[tuple]

    def records(self, module: str, instr: int, dt: int = 0, dx: int = 0, prefix: str = "") -> Iterator[Record]:
        for s, d, o, x1, y1, x2, y2, suf in self.rows:
            yield (s + dt, d, OPS[o], x1 + dx, y1, x2 + dx, y2, f"{prefix}{module}:{instr}{suf}")


@dataclass
class CallSegment:
    """Forward passing, a template instance and backward passing for one call."""

    module: str
    instr: int
    forward: PassRecords
    template: SystemCode
    dx: int
    t0: int
    backward: PassRecords
    meta: object = field(default=None, compare=False, repr=False)

    def records(self, dt: int = 0, dx: int = 0, prefix: str = "", instr_off: int = 0) -> Iterator[Record]:
        instr = self.instr + instr_off
        yield from self.forward.records(self.module, instr, dt, dx, prefix)
        sub_prefix = f"{prefix}{self.module}:{instr}/"
        yield from self.template.records(dt + self.t0, dx + self.dx, sub_prefix)
        yield from self.backward.records(self.module, instr, dt, dx, prefix)

    def summary(self) -> Counter:
        c = Counter(self.template.summary())
        c["pass"] += len(self.forward.rows) + len(self.backward.rows)
        return c

    def __len__(self) -> int:
        return len(self.forward.rows) + len(self.backward.rows) + self.template.n_records()


@dataclass
class Repeat:
    """``count`` further copies of a call, the k-th shifted by k*dt and k instructions."""

    call: CallSegment
    count: int
    dt: int

    def records(self, dt: int = 0, dx: int = 0, prefix: str = "", instr_off: int = 0) -> Iterator[Record]:
        for k in range(1, self.count + 1):
            yield from self.call.records(dt + k * self.dt, dx, prefix, instr_off + k)

    def summary(self) -> Counter:
        base = self.call.summary()
        return Counter({k: v * self.count for k, v in base.items()})

    def __len__(self) -> int:
        return len(self.call) * self.count


@dataclass
class SystemCode:
    segments: list = field(default_factory=list)
    bus_bandwidth: int | None = None
    swap_cycle_weight: int = 1
    meta: dict[str, tuple[int, ...]] = field(default_factory=dict)
    _summary: Counter | None = field(default=None, repr=False, compare=False)

    def append(self, seg) -> None:
        self.segments.append(seg)
        self._summary = None

    def records(self, dt: int = 0, dx: int = 0, prefix: str = "") -> Iterator[Record]:
        for seg in self.segments:
            yield from seg.records(dt, dx, prefix)

    def __iter__(self) -> Iterator[Record]:
        return self.records()

    def summary(self) -> Counter:
        """Counts by category without expanding templates."""
        if self._summary is None:
            c: Counter = Counter()
            for seg in self.segments:
                c.update(seg.summary())
            self._summary = c
        return self._summary

    def n_records(self) -> int:
        s = self.summary()
        return sum(v for k, v in s.items() if k.startswith("gate.")) + s["route"] + s["pass"]

    def header_lines(self) -> list[str]:
        lines = [HEADER]
        if self.bus_bandwidth is not None:
            lines.append(f"#bus_bandwidth {self.bus_bandwidth}")
        lines.append(f"#swap_cycle_weight {self.swap_cycle_weight}")
        lines += [f"#{k} " + " ".join(map(str, v)) for k, v in self.meta.items()]
        return lines

    def write(self, fh: TextIO) -> None:
        fh.writelines(line + "\n" for line in self.header_lines())
        buf = []
        for rec in self.records():
            buf.append(format_record(rec))
            if len(buf) >= 65536:
                fh.write("\n".join(buf) + "\n")
                buf.clear()
        if buf:
            fh.write("\n".join(buf) + "\n")

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            self.write(fh)

    def to_text(self) -> str:
        import io
        out = io.StringIO()
        self.write(out)
        return out.getvalue()


def format_record(rec: Record) -> str:
    s, d, op, x1, y1, x2, y2, tag = rec
    if x2 is None:
        return f"{s} {d} {op} {x1} {y1} {tag}"
    return f"{s} {d} {op} {x1} {y1} {x2} {y2} {tag}"


class SyscodeFormatError(ValueError):
    pass


@dataclass
class ParsedSyscode:
    records: list[Record]
    bus_bandwidth: int | None
    swap_cycle_weight: int
    meta: dict[str, tuple[int, ...]] = field(default_factory=dict)


def parse_syscode(text_or_lines) -> ParsedSyscode:
    lines = text_or_lines.splitlines() if isinstance(text_or_lines, str) else text_or_lines
    it = iter(lines)
    first = next(it, "").rstrip("\n")
    if first != HEADER:
        raise SyscodeFormatError(f"missing header {HEADER!r}")
    bw, weight = None, 1
    meta: dict[str, tuple[int, ...]] = {}
    recs: list[Record] = []
    for lineno, raw in enumerate(it, 2):
        line = raw.rstrip("\n")
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "bus_bandwidth":
                bw = int(parts[1])
            elif len(parts) == 2 and parts[0] == "swap_cycle_weight":
                weight = int(parts[1])
            elif len(parts) >= 2 and all(v.lstrip("-").isdigit() for v in parts[1:]):
                meta[parts[0]] = tuple(int(v) for v in parts[1:])
            continue
        f = line.split()
        try:
            if len(f) == 6:
                recs.append((int(f[0]), int(f[1]), f[2], int(f[3]), int(f[4]), None, None, f[5]))
            elif len(f) == 8:
                recs.append((int(f[0]), int(f[1]), f[2], int(f[3]), int(f[4]), int(f[5]), int(f[6]), f[7]))
            else:
                raise ValueError
        except ValueError:
            raise SyscodeFormatError(f"line {lineno}: malformed record {line!r}") from None
        if f[2] not in OP_ID:
            raise SyscodeFormatError(f"line {lineno}: unknown opcode {f[2]!r}")
    return ParsedSyscode(recs, bw, weight, meta)


def read_syscode(path) -> ParsedSyscode:
    with open(path, encoding="utf-8") as fh:
        return parse_syscode(fh)
