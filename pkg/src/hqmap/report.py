"""Resource reports, hierarchical-vs-flat comparison, report files and CSV."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, fields

from .oracle import replay
from .qasm import GATES_2Q
from .syscode import BWD, FWD, GATE, ROUTE, ParsedSyscode, SystemCode, classify_tag

REPORT_HEADER = "#hqmap-report v1"
CSV_COLUMNS = ("benchmark", "mode", "qubits_compute", "qubits_bus", "swaps_total", "swaps_bus",
               "swaps_intra", "cnots", "swaps_per_cnot", "depth", "time", "wallclock_ms")


class ReportError(ValueError):
    pass


class ProgramMismatch(ReportError):
    pass


@dataclass
class ResourceReport:
    computing_qubits: int
    bus_qubits: int
    total_swaps: int
    bus_swaps: int
    intra_swaps: int
    cnot_count: int
    swaps_per_cnot: float
    depth: int
    exec_time: int
    mapper_wallclock: float
    footprint: tuple[int, int]
    per_module: dict[str, tuple[int, int, int, int]] = field(default_factory=dict)
    gate_counts: dict[str, int] = field(default_factory=dict)
    swap_critical_fraction: float | None = None
    mode: str = "hierarchical"
    benchmark: str = ""

    def csv_row(self) -> dict[str, object]:
        return {
            "benchmark": self.benchmark, "mode": self.mode,
            "qubits_compute": self.computing_qubits, "qubits_bus": self.bus_qubits,
            "swaps_total": self.total_swaps, "swaps_bus": self.bus_swaps,
            "swaps_intra": self.intra_swaps, "cnots": self.cnot_count,
            "swaps_per_cnot": repr(self.swaps_per_cnot), "depth": self.depth,
            "time": self.exec_time, "wallclock_ms": repr(self.mapper_wallclock * 1000.0),
        }


@dataclass
class ComparisonReport:
    qubit_ratio: float            # (computing + bus) hierarchical over flat
    computing_qubit_ratio: float  # computing only, hierarchical over flat
    swap_ratio: float             # hierarchical over flat
    depth_ratio: float            # hierarchical over flat
    time_ratio: float             # hierarchical over flat
    wallclock_speedup: float      # flat over hierarchical
    swap_depth_fraction: float | None


def _ratio(a: float, b: float) -> float:
    if b:
        return a / b
    return 1.0 if not a else math.inf


def _spc(intra: int, cnots: int) -> float:
    return intra / cnots if cnots else 0.0


def build_report(mr, *, benchmark: str = "", critical_path: bool = False) -> ResourceReport:
    """Assemble a report from a MappingResult without expanding templates."""
    summ = mr.system_code.summary()
    gates = {k[5:]: v for k, v in sorted(summ.items()) if k.startswith("gate.") and v}
    cnots = sum(v for g, v in gates.items() if g in GATES_2Q)
    bus, intra = summ["pass"], summ["route"]
    if mr.mode == "flat":
        per_module = {"main": (1, mr.exec_time, mr.depth, bus + intra)}
    else:
        per_module = {name: (mr.call_counts.get(name, 0), prof.internal_time, prof.internal_cycle,
                             prof.internal_swaps)
                      for name, prof in sorted(mr.global_table.items())}
    frac = replay(mr.system_code).swap_depth_fraction if critical_path else None
    return ResourceReport(
        computing_qubits=mr.computing_qubits, bus_qubits=mr.bus_qubits,
        total_swaps=bus + intra, bus_swaps=bus, intra_swaps=intra, cnot_count=cnots,
        swaps_per_cnot=_spc(intra, cnots), depth=mr.depth, exec_time=mr.exec_time,
        mapper_wallclock=mr.wallclock, footprint=tuple(mr.footprint), per_module=per_module,
        gate_counts=gates, swap_critical_fraction=frac, mode=mr.mode, benchmark=benchmark,
    )


def report_from_syscode(sc: SystemCode | ParsedSyscode) -> dict[str, object]:
    """Recompute the record-derived report fields by expanding the system code."""
    recs = sc.records() if isinstance(sc, SystemCode) else sc.records
    gates: dict[str, int] = {}
    bus = intra = 0
    for r in recs:
        k = classify_tag(r[7])
        if k == GATE:
            gates[r[2]] = gates.get(r[2], 0) + 1
        elif k == ROUTE:
            intra += 1
        elif k in (FWD, BWD):
            bus += 1
    res = replay(sc)
    cnots = sum(v for g, v in gates.items() if g in GATES_2Q)
    out: dict[str, object] = {
        "total_swaps": bus + intra, "bus_swaps": bus, "intra_swaps": intra, "cnot_count": cnots,
        "swaps_per_cnot": _spc(intra, cnots), "depth": res.depth, "exec_time": res.exec_time,
        "gate_counts": dict(sorted(gates.items())), "swap_critical_fraction": res.swap_depth_fraction,
    }
    meta = sc.meta
    if "footprint" in meta:
        out["footprint"] = tuple(meta["footprint"])
    if "qubits" in meta:
        out["computing_qubits"], out["bus_qubits"] = meta["qubits"]
    return out


def audit_report(rep: ResourceReport, sc: SystemCode | ParsedSyscode) -> list[str]:
    """Fields of ``rep`` that disagree with a recomputation from the system code."""
    bad = []
    for k, v in report_from_syscode(sc).items():
        if k == "swap_critical_fraction" and rep.swap_critical_fraction is None:
            continue
        if getattr(rep, k) != v:
            bad.append(f"{k}: report {getattr(rep, k)!r}, system code {v!r}")
    return bad


def compare(h: ResourceReport, f: ResourceReport) -> ComparisonReport:
    if h.gate_counts != f.gate_counts:
        diff = sorted(set(h.gate_counts.items()) ^ set(f.gate_counts.items()))
        raise ProgramMismatch(f"reports describe different programs (gate counts differ: {diff})")
    return ComparisonReport(
        qubit_ratio=_ratio(h.computing_qubits + h.bus_qubits, f.computing_qubits + f.bus_qubits),
        computing_qubit_ratio=_ratio(h.computing_qubits, f.computing_qubits),
        swap_ratio=_ratio(h.total_swaps, f.total_swaps),
        depth_ratio=_ratio(h.depth, f.depth),
        time_ratio=_ratio(h.exec_time, f.exec_time),
        wallclock_speedup=_ratio(f.mapper_wallclock, h.mapper_wallclock),
        swap_depth_fraction=h.swap_critical_fraction,
    )


# ---------------------------------------------------------------------------
# report file: a version header then ``key = value`` lines


_SCALARS = ("benchmark", "mode", "computing_qubits", "bus_qubits", "total_swaps", "bus_swaps",
            "intra_swaps", "cnot_count", "swaps_per_cnot", "depth", "exec_time", "mapper_wallclock",
            "footprint", "swap_critical_fraction")


def format_report(rep: ResourceReport) -> str:
    lines = [REPORT_HEADER]
    for k in _SCALARS:
        v = getattr(rep, k)
        if k == "footprint":
            v = f"{v[0]} {v[1]}"
        elif isinstance(v, float):
            v = repr(v)
        elif v is None:
            v = "none"
        lines.append(f"{k} = {v}")
    lines += [f"gate.{g} = {n}" for g, n in rep.gate_counts.items()]
    lines += [f"module.{m} = {' '.join(map(str, t))}" for m, t in rep.per_module.items()]
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> ResourceReport:
    lines = text.splitlines()
    if not lines or lines[0].strip() != REPORT_HEADER:
        raise ReportError(f"missing header {REPORT_HEADER!r}")
    kv: dict[str, object] = {"gate_counts": {}, "per_module": {}}
    types = {f.name: f.type for f in fields(ResourceReport)}
    for lineno, raw in enumerate(lines[1:], 2):
        if not raw.strip() or raw.startswith("#"):
            continue
        if " = " not in raw:
            raise ReportError(f"line {lineno}: expected key = value")
        k, v = raw.split(" = ", 1)
        try:
            if k.startswith("gate."):
                kv["gate_counts"][k[5:]] = int(v)
            elif k.startswith("module."):
                kv["per_module"][k[7:]] = tuple(int(x) for x in v.split())
            elif k == "footprint":
                kv[k] = tuple(int(x) for x in v.split())
            elif k in ("benchmark", "mode"):
                kv[k] = v
            elif k not in types:
                raise ReportError(f"line {lineno}: unknown key {k!r}")
            elif v == "none":
                kv[k] = None
            elif types[k].startswith("float"):
                kv[k] = float(v)
            else:
                kv[k] = int(v)
        except ValueError as exc:
            if isinstance(exc, ReportError):
                raise
            raise ReportError(f"line {lineno}: bad value for {k}: {v!r}") from None
    missing = [k for k in _SCALARS if k not in kv and k != "swap_critical_fraction"]
    if missing:
        raise ReportError(f"missing fields: {', '.join(missing)}")
    return ResourceReport(**kv)


def format_text(rep: ResourceReport) -> str:
    """Human-readable summary."""
    w, h = rep.footprint
    out = [
        f"mode              {rep.mode}" + (f"  ({rep.benchmark})" if rep.benchmark else ""),
        f"computing qubits  {rep.computing_qubits}",
        f"bus qubits        {rep.bus_qubits}",
        f"footprint         {w} x {h}",
        f"swaps             {rep.total_swaps} (passing {rep.bus_swaps}, routing {rep.intra_swaps})",
        f"2-qubit gates     {rep.cnot_count}",
        f"swaps per cnot    {rep.swaps_per_cnot:.4f}",
        f"depth             {rep.depth}",
        f"execution time    {rep.exec_time}",
        f"mapper wall-clock {rep.mapper_wallclock * 1000:.2f} ms",
    ]
    if rep.swap_critical_fraction is not None:
        out.append(f"swaps on critical path {rep.swap_critical_fraction:.4f}")
    if rep.mode != "flat" and rep.per_module:
        out.append("")
        out.append(f"{'module':<16}{'calls':>10}{'time':>12}{'cycle':>10}{'swaps':>10}")
        for m, (calls, t, c, s) in rep.per_module.items():
            out.append(f"{m:<16}{calls:>10}{t:>12}{c:>10}{s:>10}")
    return "\n".join(out) + "\n"


def format_comparison(c: ComparisonReport) -> str:
    frac = "n/a" if c.swap_depth_fraction is None else f"{c.swap_depth_fraction:.4f}"
    return "\n".join([
        f"qubit ratio (h/f, computing+bus)  {c.qubit_ratio:.4f}",
        f"qubit ratio (h/f, computing)      {c.computing_qubit_ratio:.4f}",
        f"swap ratio (h/f)                  {c.swap_ratio:.4f}",
        f"depth ratio (h/f)                 {c.depth_ratio:.4f}",
        f"time ratio (h/f)                  {c.time_ratio:.4f}",
        f"wall-clock speedup (f/h)          {c.wallclock_speedup:.4f}",
        f"swaps on critical path (h)        {frac}",
    ]) + "\n"


def write_csv(reports: list[ResourceReport], fh, header: bool = True) -> None:
    wr = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
    if header:
        wr.writeheader()
    for r in reports:
        wr.writerow(r.csv_row())


def csv_text(reports: list[ResourceReport]) -> str:
    buf = io.StringIO()
    write_csv(reports, buf)
    return buf.getvalue()


def read_csv(text: str) -> list[dict[str, object]]:
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        conv: dict[str, object] = {}
        for k in CSV_COLUMNS:
            v = row[k]
            conv[k] = v if k in ("benchmark", "mode") else (
                float(v) if k in ("swaps_per_cnot", "wallclock_ms") else int(v))
        rows.append(conv)
    return rows

