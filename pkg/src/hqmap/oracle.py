"""Independent replay of a system code.

Works on the plain record stream only: sorts records by start time,
tracks each cell's release time and cycle count, and reports structural
violations (overlapping use of a cell, non-adjacent operands, more bus
transfers in flight than lanes). Shares no scheduling code with the
mappers; the cycle rules are restated here from the record semantics.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field

from .syscode import BWD, FWD, GATE, ParsedSyscode, SystemCode, classify_tag

ROUTING_OPS = ("SWAP", "MOVE")


class StructuralViolation(ValueError):
    def __init__(self, violations: list[str]):
        self.violations = violations
        more = f" (+{len(violations) - 1} more)" if len(violations) > 1 else ""
        super().__init__((violations[0] if violations else "violation") + more)


@dataclass
class ReplayResult:
    depth: int
    exec_time: int
    n_records: int
    violations: list[str] = field(default_factory=list)
    max_in_flight: int = 0
    bus_bandwidth: int | None = None
    swaps_total: int = 0
    swaps_on_critical_path: int = 0
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def swap_depth_fraction(self) -> float:
        return self.swaps_on_critical_path / self.swaps_total if self.swaps_total else 0.0


def _adjacent(x1: int, y1: int, x2: int, y2: int) -> bool:
    if x1 == x2 and (y1 < 0) != (y2 < 0):
        return min(y1, y2) < 0 and max(y1, y2) == 0   # row 0 reaches every lane
    return abs(x1 - x2) + abs(y1 - y2) == 1


def _source(sc) -> tuple[list, int | None, int]:
    if isinstance(sc, SystemCode):
        return list(sc.records()), sc.bus_bandwidth, sc.swap_cycle_weight
    if isinstance(sc, ParsedSyscode):
        return list(sc.records), sc.bus_bandwidth, sc.swap_cycle_weight
    return list(sc), None, 1


def replay(sc: SystemCode | ParsedSyscode | Iterable, *, max_violations: int = 20) -> ReplayResult:
    recs, bw, w = _source(sc)
    order = sorted(range(len(recs)), key=lambda i: recs[i][0])
    release: dict[tuple[int, int], int] = {}
    cycle: dict[tuple[int, int], int] = {}
    last: dict[tuple[int, int], int] = {}
    pred = [-1] * len(recs)
    violations: list[str] = []
    depth = end_max = 0
    end_arg = -1
    counts = {"gate": 0, "route": 0, "pass": 0, "cnot": 0}
    transfers: dict[str, list[int]] = {}

    def bad(msg: str) -> None:
        if len(violations) < max_violations:
            violations.append(msg)

    for i in order:
        s, d, op, x1, y1, x2, y2, tag = recs[i]
        kind = classify_tag(tag)
        end = s + d
        a = (x1, y1)
        cells = (a,) if x2 is None else (a, (x2, y2))
        if d <= 0:
            bad(f"record {i} ({tag}): non-positive duration")
        if x2 is not None and not _adjacent(x1, y1, x2, y2):
            bad(f"record {i} ({tag}): cells {a} and {(x2, y2)} are not adjacent")
        if x2 is None and y1 < 0:
            bad(f"record {i} ({tag}): gate on a bus cell")
        best = -1
        for c in cells:
            if release.get(c, 0) > s:
                bad(f"record {i} ({tag}): cell {c} busy until {release[c]}, used at {s}")
            j = last.get(c, -1)
            if j >= 0 and (best < 0 or recs[j][0] + recs[j][1] > recs[best][0] + recs[best][1]):
                best = j
        pred[i] = best
        if x2 is None:
            c = cycle.get(a, 0) + 1
            cycle[a] = c
        elif op == "MOVE":
            c = cycle.get(a, 0) + w
            cycle[(x2, y2)] = c
        else:
            c = max(cycle.get(a, 0), cycle.get((x2, y2), 0)) + (1 if kind == GATE else w)
            cycle[a] = cycle[(x2, y2)] = c
        for cc in cells:
            release[cc] = end
            last[cc] = i
        depth = max(depth, c)
        if end > end_max:
            end_max, end_arg = end, i
        if kind == GATE:
            counts["gate"] += 1
            if x2 is not None:
                counts["cnot"] += 1
        elif kind in (FWD, BWD):
            counts["pass"] += 1
            if min(y1, y2 if y2 is not None else 0) < 0:
                span = transfers.setdefault(tag, [s, end])
                span[0], span[1] = min(span[0], s), max(span[1], end)
        else:
            counts["route"] += 1

    # in-flight transfers: lanes are held from the first to the last bus hop
    events = sorted([(t0, 1) for t0, _ in transfers.values()] + [(t1, -1) for _, t1 in transfers.values()])
    live = peak = 0
    for _, e in events:
        live += e
        peak = max(peak, live)
    if bw is not None and peak > bw:
        bad(f"{peak} bus transfers in flight, bandwidth is {bw}")

    total = crit = 0
    for s, d, op, x1, y1, x2, y2, tag in recs:
        if op in ROUTING_OPS and classify_tag(tag) != GATE:
            total += 1
    i = end_arg
    while i >= 0:
        r = recs[i]
        if r[2] in ROUTING_OPS and classify_tag(r[7]) != GATE:
            crit += 1
        i = pred[i]
    return ReplayResult(depth, end_max, len(recs), violations, peak, bw, total, crit, counts)


def oracle_replay(sc) -> tuple[int, int]:
    """(depth, exec_time) of a system code; raises StructuralViolation on a bad one."""
    r = replay(sc)
    if r.violations:
        raise StructuralViolation(r.violations)
    return r.depth, r.exec_time
