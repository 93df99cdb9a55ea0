import pytest

from hqmap.cli import main
from hqmap.syscode import read_syscode


@pytest.fixture
def work(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("HQMAP_ARCH", raising=False)
    return tmp_path


def test_stats_paper_counts(work, capsys):
    assert main(["gen", "repeat", "--k", "100", "--n", "10000", "--qubits", "4", "--out", "r.qasm"]) == 0
    assert main(["stats", "r.qasm"]) == 0
    out = capsys.readouterr().out
    assert "modular 10100" in out and "flattened 1000000" in out


def test_map_verify_compare(work, capsys):
    assert main(["gen", "adder", "--width", "3", "--out", "a.qasm"]) == 0
    assert main(["gen", "repeat", "--k", "5", "--n", "3", "--out", "r.qasm"]) == 0
    assert main(["map", "a.qasm", "r.qasm", "--out", "o", "--csv", "o/h.csv", "--jobs", "2"]) == 0
    assert main(["map-flat", "a.qasm", "--out", "o", "--csv", "o/f.csv"]) == 0
    assert main(["verify", "o/a.syscode", "--report", "o/a.report"]) == 0
    assert main(["verify", "o/a.flat.syscode", "--report", "o/a.flat.report"]) == 0
    capsys.readouterr()
    assert main(["compare", "o/a.report", "o/a.flat.report"]) == 0
    assert "swap ratio" in capsys.readouterr().out
    assert main(["compare", "o/r.report", "o/a.flat.report"]) != 0
    assert len((work / "o" / "h.csv").read_text().splitlines()) == 3


def test_verify_rejects_bad_code(work):
    (work / "bad.syscode").write_text("#hqmap-syscode v1\n0 5 CNOT 0 0 2 0 main:0\n")
    assert main(["verify", "bad.syscode"]) == 1
    (work / "junk.syscode").write_text("hello\n")
    assert main(["verify", "junk.syscode"]) == 1


def test_flatten_and_env_arch(work, capsys):
    main(["gen", "nest", "--depth", "2", "--fanout", "2", "--k", "3", "--out", "n.qasm"])
    assert main(["flatten", "n.qasm", "--out", "f.qasm"]) == 0
    assert main(["stats", "f.qasm"]) == 0
    assert "flattened 21" in capsys.readouterr().out
    assert main(["flatten", "n.qasm", "--limit", "5"]) == 1
    (work / "arch.cfg").write_text("swap_time = 7\nmove_time = 3\n")
    with pytest.MonkeyPatch.context() as mp:
        mp.setenv("HQMAP_ARCH", str(work / "arch.cfg"))
        assert main(["map", "n.qasm", "--out", "o"]) == 0
    recs = read_syscode(work / "o" / "n.syscode").records
    bus = [r for r in recs if r[2] == "MOVE" and min(r[4], r[6]) < 0]
    routed = [r for r in recs if r[2] in ("SWAP", "MOVE") and min(r[4], r[6]) >= 0]
    assert bus and all(r[1] == 3 for r in bus)
    assert routed and all(r[1] == 7 for r in routed)


def test_bad_inputs(work):
    (work / "bad.qasm").write_text("module main() { qbit a; CNOT(a, a); }")
    assert main(["map", "bad.qasm"]) == 1
    assert main(["map", "missing.qasm"]) == 1
    (work / "bad.cfg").write_text("nope = 1\n")
    (work / "ok.qasm").write_text("module main() { qbit a; H(a); }")
    assert main(["map", "ok.qasm", "--arch", "bad.cfg"]) == 1
