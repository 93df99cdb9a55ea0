import math

import pytest

from hqmap.bench import gen_adder, gen_repeat
from hqmap.flat import map_flat_program
from hqmap.mapper import map_program
from hqmap.qasm import parse_program
from hqmap.report import (
    CSV_COLUMNS,
    ProgramMismatch,
    ReportError,
    ResourceReport,
    audit_report,
    build_report,
    compare,
    csv_text,
    format_report,
    format_text,
    parse_report,
    read_csv,
)
from hqmap.syscode import parse_syscode


def _rep(**kw):
    base = dict(computing_qubits=10, bus_qubits=4, total_swaps=6, bus_swaps=4, intra_swaps=2, cnot_count=3,
                swaps_per_cnot=2 / 3, depth=9, exec_time=90, mapper_wallclock=0.5, footprint=(5, 4),
                gate_counts={"CNOT": 3, "H": 1})
    base.update(kw)
    return ResourceReport(**base)


def test_single_gate_report():
    r = build_report(map_program(parse_program("module main() { qbit a; H(a); }")))
    assert (r.depth, r.total_swaps, r.swaps_per_cnot) == (1, 0, 0.0)


def test_distance_three_cnot():
    src = "module main() { qbit q[4]; CNOT(q[0], q[3]); }"
    # 2x2 grid makes q0,q3 diagonal (distance 2); use a 1x4 row via params of a callee
    src = "module r(qbit a, qbit b, qbit c, qbit d) { CNOT(a, d); } module main() { qbit q[4]; r(q[0], q[1], q[2], q[3]); }"
    r = build_report(map_program(parse_program(src)))
    assert (r.intra_swaps, r.cnot_count, r.swaps_per_cnot) == (2, 1, 2.0)
    assert r.total_swaps == r.bus_swaps + r.intra_swaps


def test_passing_dominates_repeat():
    r = build_report(map_program(gen_repeat(100, 100, 4)))
    assert r.bus_swaps / r.total_swaps > 0.9


def test_identical_reports_ratio_one():
    c = compare(_rep(), _rep(bus_qubits=0, computing_qubits=14))
    assert c.qubit_ratio == c.swap_ratio == c.depth_ratio == c.time_ratio == c.wallclock_speedup == 1.0


def test_table_two_ratios():
    c = compare(_rep(computing_qubits=115, bus_qubits=374, total_swaps=1.23e6),
                _rep(computing_qubits=46, bus_qubits=0, total_swaps=4.08e4))
    assert c.qubit_ratio == pytest.approx(10.6, abs=0.05)
    assert c.computing_qubit_ratio == pytest.approx(2.5, abs=0.01)
    assert c.swap_ratio == pytest.approx(30.1, abs=0.05)


def test_compare_mismatch():
    with pytest.raises(ProgramMismatch):
        compare(_rep(), _rep(gate_counts={"CNOT": 4}))


def test_ratios_finite_positive():
    p = gen_adder(4)
    c = compare(build_report(map_program(p), critical_path=True), build_report(map_flat_program(p)))
    for v in (c.qubit_ratio, c.swap_ratio, c.depth_ratio, c.time_ratio, c.wallclock_speedup):
        assert math.isfinite(v) and v > 0
    assert 0 < c.swap_depth_fraction <= 1


@pytest.mark.parametrize("mode", ["h", "f"])
def test_self_audit(mode):
    p = gen_adder(3)
    mr = map_program(p) if mode == "h" else map_flat_program(p)
    rep = build_report(mr, critical_path=True)
    assert audit_report(rep, parse_syscode(mr.system_code.to_text())) == []
    bad = _rep()
    assert audit_report(bad, mr.system_code)


def test_report_file_roundtrip():
    rep = build_report(map_program(gen_adder(2)), benchmark="adder2", critical_path=True)
    text = format_report(rep)
    assert text.startswith("#hqmap-report v1\n")
    assert parse_report(text) == rep
    assert "depth" in format_text(rep)
    with pytest.raises(ReportError):
        parse_report("depth = 3")


def test_csv_roundtrip():
    reps = [build_report(map_program(gen_adder(2)), benchmark="a"),
            build_report(map_flat_program(gen_adder(2)), benchmark="a")]
    text = csv_text(reps)
    assert text.splitlines()[0].split(",") == list(CSV_COLUMNS)
    rows = read_csv(text)
    for rep, row in zip(reps, rows):
        assert row["swaps_per_cnot"] == rep.swaps_per_cnot
        assert row["depth"] == rep.depth and row["qubits_bus"] == rep.bus_qubits
        assert row["wallclock_ms"] == rep.mapper_wallclock * 1000.0
