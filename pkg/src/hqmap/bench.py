"""Parametric modular-QASM benchmark families."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .qasm import Call, Gate1, Gate2, ModuleDef, Program, format_program

FAMILIES = ("repeat", "nest", "adder", "mesh")

_MIX_1Q = ("H", "T", "S", "X", "Tdag", "Z")


@dataclass(frozen=True)
class BenchSpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def generate(self) -> Program:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        for k, v in self.params.items():
            if v < 1:
                raise ValueError(f"parameter {k} must be >= 1, got {v}")
        fn = {"repeat": gen_repeat, "nest": gen_nest, "adder": gen_adder, "mesh": gen_mesh}[self.family]
        if self.family in ("repeat", "nest", "mesh"):
            return fn(**self.params, seed=self.seed)
        return fn(**self.params)

    @property
    def name(self) -> str:
        args = "_".join(f"{k}{v}" for k, v in sorted(self.params.items()))
        return f"{self.family}_{args}_s{self.seed}"


def _gate_mix(qubits: list[str], k: int, rng: random.Random) -> list[Gate1 | Gate2]:
    # even slots: 1q gate on a rotating qubit; odd slots: CNOT on adjacent-index pair
    n = len(qubits)
    gates: list[Gate1 | Gate2] = []
    for i in range(k):
        j = i // 2
        if i % 2 == 0 or n < 2:
            gates.append(Gate1(_MIX_1Q[j % len(_MIX_1Q)], qubits[j % n]))
        else:
            a = j % (n - 1)
            gates.append(Gate2("CNOT", qubits[a], qubits[a + 1]))
    rng.shuffle(gates)
    return gates


def gen_repeat(K: int, N: int, n_qubits: int, seed: int = 0) -> Program:
    """main issues N identical calls to one K-gate module over n_qubits."""
    if n_qubits < 2 or K < 1 or N < 1:
        raise ValueError("gen_repeat needs K >= 1, N >= 1, n_qubits >= 2")
    rng = random.Random(seed)
    params = [f"p{i}" for i in range(n_qubits)]
    sub = ModuleDef("U", params, [], _gate_mix(params, K, rng))
    args = tuple(f"q.{i}" for i in range(n_qubits))
    main = ModuleDef("main", [], [("q", n_qubits)], [Call("U", args) for _ in range(N)])
    return Program({"main": main, "U": sub})


def gen_nest(depth: int, fanout: int, K: int, seed: int = 0) -> Program:
    """Chain main -> L1 -> ... -> L<depth>; each level has K gates then fanout calls."""
    if depth < 1 or fanout < 1 or K < 1:
        raise ValueError("gen_nest needs depth, fanout, K >= 1")
    rng = random.Random(seed)
    n = 3
    params = [f"p{i}" for i in range(n)]
    mods: dict[str, ModuleDef] = {}
    main_q = [f"q.{i}" for i in range(n)]
    main = ModuleDef("main", [], [("q", n)], _gate_mix(main_q, K, rng))
    mods["main"] = main
    prev, prev_q = main, main_q
    for level in range(1, depth + 1):
        name = f"L{level}"
        for c in range(fanout):
            rot = prev_q[c % n:] + prev_q[:c % n]
            prev.body.append(Call(name, tuple(rot)))
        mod = ModuleDef(name, list(params), [], _gate_mix(params, K, rng))
        mods[name] = mod
        prev, prev_q = mod, params
    return Program(mods)


def toffoli(a: str, b: str, c: str) -> list[Gate1 | Gate2]:
    """Clifford+T Toffoli with target c."""
    return [
        Gate1("H", c), Gate2("CNOT", b, c), Gate1("Tdag", c), Gate2("CNOT", a, c),
        Gate1("T", c), Gate2("CNOT", b, c), Gate1("Tdag", c), Gate2("CNOT", a, c),
        Gate1("T", b), Gate1("T", c), Gate1("H", c), Gate2("CNOT", a, b),
        Gate1("T", a), Gate1("Tdag", b), Gate2("CNOT", a, b),
    ]


def maj_body(a: str, b: str, c: str) -> list[Gate1 | Gate2]:
    return [Gate2("CNOT", c, b), Gate2("CNOT", c, a)] + toffoli(a, b, c)


def uma_body(a: str, b: str, c: str) -> list[Gate1 | Gate2]:
    return toffoli(a, b, c) + [Gate2("CNOT", c, a), Gate2("CNOT", a, b)]


def adder_operands(width: int) -> list[tuple[str, str, str, str]]:
    """(module, x, y, z) triples of the carry chain over x[0..2*width]."""
    # x[0] carry-in, x[2i+1] = b_i, x[2i+2] = a_i
    ops = []
    carry = "x.0"
    for i in range(width):
        ops.append(("MAJ", carry, f"x.{2 * i + 1}", f"x.{2 * i + 2}"))
        carry = f"x.{2 * i + 2}"
    for i in reversed(range(width)):
        prev = "x.0" if i == 0 else f"x.{2 * i}"
        ops.append(("UMA", prev, f"x.{2 * i + 1}", f"x.{2 * i + 2}"))
    return ops


def gen_adder(width: int) -> Program:
    """Ripple-carry adder: main -> ADD(2*width+1 params) -> MAJ/UMA (3 params each)."""
    if width < 1:
        raise ValueError("gen_adder needs width >= 1")
    n = 2 * width + 1
    params = [f"x{i}" for i in range(n)]
    rename = {f"x.{i}": f"x{i}" for i in range(n)}
    chain = [Call(m, (rename[a], rename[b], rename[c])) for m, a, b, c in adder_operands(width)]
    mods = {
        "main": ModuleDef("main", [], [("x", n)], [Call("ADD", tuple(f"x.{i}" for i in range(n)))]),
        "ADD": ModuleDef("ADD", params, [], chain),
        "MAJ": ModuleDef("MAJ", ["a", "b", "c"], [], maj_body("a", "b", "c")),
        "UMA": ModuleDef("UMA", ["a", "b", "c"], [], uma_body("a", "b", "c")),
    }
    return Program(mods)


def gen_mesh(width: int, N: int = 4, K: int = 8, seed: int = 0) -> Program:
    """A width-parameter module with a local scratch row, called N times with rotated args.

    Used as a bandwidth stress case: with bus_bandwidth < width the
    argument transfers must queue for lanes.
    """
    if width < 2:
        raise ValueError("gen_mesh needs width >= 2")
    rng = random.Random(seed)
    params = [f"p{i}" for i in range(width)]
    locs = [f"s.{i}" for i in range(2)]
    body: list = _gate_mix(params + locs, K, rng)
    body += [Gate2("CNOT", params[i], params[(i + 2) % width]) for i in range(0, width, 2) if width > 2]
    sub = ModuleDef("M", params, [("s", 2)], body)
    main_q = [f"q.{i}" for i in range(width)]
    calls = []
    for c in range(N):
        rot = main_q[c % width:] + main_q[:c % width]
        calls.append(Call("M", tuple(rot)))
    main = ModuleDef("main", [], [("q", width)], calls)
    return Program({"main": main, "M": sub})


def generate_text(spec: BenchSpec) -> str:
    return format_program(spec.generate())
