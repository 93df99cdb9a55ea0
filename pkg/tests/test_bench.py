import pytest

from hqmap.bench import (
    BenchSpec,
    adder_operands,
    gen_adder,
    gen_mesh,
    gen_nest,
    gen_repeat,
    generate_text,
)
from hqmap.qasm import Call, Gate1, Gate2, count_instructions, flatten, parse_program


def test_repeat_counts():
    assert tuple(count_instructions(gen_repeat(3, 2, 2))) == (5, 6)
    assert len(flatten(gen_repeat(1, 1, 2))) == 1


def test_nest_geometric():
    assert count_instructions(gen_nest(2, 2, 1)).flattened == 1 + 2 + 4
    assert count_instructions(gen_nest(1, 1, 5)).flattened == 10


def test_adder_structure():
    assert sum(isinstance(i, Call) for i in gen_adder(1).modules["ADD"].body) == 2
    sizes = [count_instructions(gen_adder(w)).flattened for w in (8, 9, 10)]
    assert len(gen_adder(8).modules) == 4
    assert sizes[2] - sizes[1] == sizes[1] - sizes[0] > 0


def _hand_adder(width: int) -> list:
    # written out from the textbook ripple-carry layout, without the generator's helpers
    def tof(a, b, c):
        return [("H", c), ("CNOT", b, c), ("Tdag", c), ("CNOT", a, c), ("T", c), ("CNOT", b, c),
                ("Tdag", c), ("CNOT", a, c), ("T", b), ("T", c), ("H", c), ("CNOT", a, b),
                ("T", a), ("Tdag", b), ("CNOT", a, b)]
    out = []
    c = "x.0"
    for i in range(width):
        b, a = f"x.{2 * i + 1}", f"x.{2 * i + 2}"
        out += [("CNOT", a, b), ("CNOT", a, c)] + tof(c, b, a)
        c = a
    for i in reversed(range(width)):
        c = "x.0" if i == 0 else f"x.{2 * i}"
        b, a = f"x.{2 * i + 1}", f"x.{2 * i + 2}"
        out += tof(c, b, a) + [("CNOT", a, c), ("CNOT", c, b)]
    return out


def test_adder_matches_hand_written_flat():
    got = [(g.op, g.q) if isinstance(g, Gate1) else (g.op, g.a, g.b) for g in flatten(gen_adder(4)).instrs]
    assert got == _hand_adder(4)
    assert len(adder_operands(4)) == 8


def test_mesh_rotates_args():
    p = gen_mesh(4, N=3)
    calls = p.main_module.body
    assert calls[1].args == ("q.1", "q.2", "q.3", "q.0")
    assert p.modules["M"].local_qubits == ["s.0", "s.1"]


def test_deterministic_and_parsable():
    spec = BenchSpec("repeat", {"K": 20, "N": 5, "n_qubits": 3}, seed=7)
    assert generate_text(spec) == generate_text(spec)
    assert parse_program(generate_text(spec)) == spec.generate()
    assert spec.name == "repeat_K20_N5_n_qubits3_s7"
    assert any(isinstance(g, Gate2) for g in spec.generate().modules["U"].body)


@pytest.mark.parametrize("spec", [BenchSpec("nope"), BenchSpec("repeat", {"K": 0, "N": 1, "n_qubits": 2})])
def test_bad_spec(spec):
    with pytest.raises(ValueError):
        spec.generate()
