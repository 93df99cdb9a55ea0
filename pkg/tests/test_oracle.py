import pytest

from hqmap.oracle import StructuralViolation, oracle_replay, replay
from hqmap.syscode import parse_syscode


def R(s, d, op, x1, y1, x2=None, y2=None, tag="main:0"):
    return (s, d, op, x1, y1, x2, y2, tag)


def test_empty():
    assert oracle_replay([]) == (0, 0)


def test_parallel_gates():
    assert oracle_replay([R(0, 1, "H", 0, 0), R(0, 1, "H", 1, 0, tag="main:1")]) == (1, 1)


def test_sequential_and_two_qubit():
    recs = [R(0, 1, "H", 0, 0), R(1, 10, "CNOT", 0, 0, 1, 0, "main:1"), R(0, 1, "T", 1, 0, tag="main:2")]
    assert oracle_replay(recs) == (2, 11)


def test_swap_cycle_weight_and_move():
    recs = [R(0, 30, "SWAP", 0, 0, 1, 0, "main:0~r"), R(30, 10, "MOVE", 1, 0, 1, -1, "main:1>0")]
    res = replay(recs)
    assert (res.depth, res.exec_time) == (2, 40)
    text = "#hqmap-syscode v1\n#swap_cycle_weight 3\n0 30 SWAP 0 0 1 0 main:0~r\n0 30 SWAP 0 1 1 1 main:1\n"
    res = replay(parse_syscode(text))
    assert res.depth == 3  # routing SWAP weighs 3, a logical SWAP gate weighs 1


def test_overlap_detected():
    with pytest.raises(StructuralViolation, match="busy"):
        oracle_replay([R(0, 10, "CNOT", 0, 0, 1, 0), R(5, 1, "H", 1, 0, tag="main:1")])


@pytest.mark.parametrize("cells", [(0, 0, 2, 0), (0, 0, 1, 1), (0, 1, 0, -1), (0, -1, 1, -2)])
def test_non_adjacent_detected(cells):
    with pytest.raises(StructuralViolation, match="adjacent"):
        oracle_replay([R(0, 1, "CNOT", *cells)])


def test_row0_reaches_every_lane():
    assert replay([R(0, 10, "MOVE", 3, 0, 3, -4, "main:0>0")]).ok


def test_bandwidth_violation():
    text = "\n".join([
        "#hqmap-syscode v1", "#bus_bandwidth 1",
        "0 10 MOVE 0 0 0 -1 main:0>0", "10 10 MOVE 0 -1 1 -1 main:0>0", "20 10 MOVE 1 -1 1 0 main:0>0",
        "5 10 MOVE 4 0 4 -2 main:0>1", "15 10 MOVE 4 -2 4 0 main:0>1",
    ])
    res = replay(parse_syscode(text))
    assert res.max_in_flight == 2
    assert any("bandwidth" in v for v in res.violations)


def test_critical_path_fraction():
    recs = [R(0, 30, "SWAP", 0, 0, 1, 0, "main:0~r"), R(30, 10, "CNOT", 1, 0, 2, 0, "main:0"),
            R(0, 30, "SWAP", 5, 0, 6, 0, "main:1~r")]
    assert replay(recs).swap_depth_fraction == 0.5
