"""Modular QASM: intermediate representation, parser, printer, flattening."""

from __future__ import annotations

import re
from collections.abc import Iterator
from dataclasses import dataclass, field

GATES_1Q = ("H", "X", "Y", "Z", "S", "Sdag", "T", "Tdag", "Rz", "MeasZ", "PrepZ")
GATES_2Q = ("CNOT", "CZ", "SWAP")
GATES = GATES_1Q + GATES_2Q

DEFAULT_FLATTEN_LIMIT = 10**7
COUNT_SATURATION = 2**63 - 1


class QasmError(Exception):
    """Lexical, syntactic or semantic error with a source location."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        loc = f"{line}:{col}: " if line else ""
        super().__init__(loc + message)


class ExpansionLimitError(Exception):
    """Raised when inline expansion would exceed the instruction limit."""

    def __init__(self, reached: int, limit: int):
        self.reached = reached
        self.limit = limit
        super().__init__(
            f"expansion limit exceeded: reached {reached} instructions (limit {limit}); "
            "the non-modular form is infeasible at this scale"
        )


@dataclass(frozen=True)
class Gate1:
    op: str
    q: str
    angle: str | None = None
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Gate2:
    op: str
    a: str
    b: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    callee: str
    args: tuple[str, ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


Instruction = Gate1 | Gate2 | Call


@dataclass
class ModuleDef:
    """A named module.

    ``locals`` keeps the declarations as written (``(name, size)`` with
    ``size`` None for scalars); ``qubits`` gives the scalar expansion where
    ``t[4]`` becomes ``t.0 .. t.3``. Instruction operands always use the
    scalar names.
    """

    name: str
    params: list[str]
    locals: list[tuple[str, int | None]]
    body: list[Instruction]
    line: int = field(default=0, compare=False)

    @property
    def local_qubits(self) -> list[str]:
        out = []
        for name, size in self.locals:
            if size is None:
                out.append(name)
            else:
                out.extend(f"{name}.{i}" for i in range(size))
        return out

    @property
    def qubits(self) -> list[str]:
        return self.params + self.local_qubits


@dataclass
class Program:
    modules: dict[str, ModuleDef]
    main: str = "main"

    @property
    def main_module(self) -> ModuleDef:
        return self.modules[self.main]

    def call_edges(self) -> dict[tuple[str, str], int]:
        """Static call graph as edge -> multiplicity."""
        edges: dict[tuple[str, str], int] = {}
        for m in self.modules.values():
            for ins in m.body:
                if isinstance(ins, Call):
                    key = (m.name, ins.callee)
                    edges[key] = edges.get(key, 0) + 1
        return edges


@dataclass
class FlatProgram:
    qubits: list[str]
    instrs: list[Gate1 | Gate2]
    tags: list[str]

    def __len__(self) -> int:
        return len(self.instrs)


# ---------------------------------------------------------------------------
# lexer / parser

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>//.*)
  | (?P<float>[-+]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[(){}\[\],;])
  | (?P<bad>.)
    """,
    re.VERBOSE,
)


@dataclass(slots=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[_Tok]:
    toks = []
    append = toks.append
    lineno = 0
    for lineno, src in enumerate(text.split("\n"), 1):
        for m in _TOKEN_RE.finditer(src):
            kind = m.lastgroup
            if kind == "ws" or kind == "comment":
                continue
            if kind == "name":
                append(_Tok("name", m.group(), lineno, m.start() + 1))
            elif kind == "punct":
                t = m.group()
                append(_Tok(t, t, lineno, m.start() + 1))
            elif kind == "float":
                append(_Tok("num", m.group(), lineno, m.start() + 1))
            else:
                raise QasmError(f"unexpected character {m.group()!r}", lineno, m.start() + 1)
    last = text.rsplit("\n", 1)[-1]
    append(_Tok("eof", "", max(lineno, 1), len(last) + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> _Tok:
        tok = self.next()
        if tok.kind != kind:
            found = tok.text or "end of input"
            raise QasmError(f"expected {what or kind!r}, found {found!r}", tok.line, tok.col)
        return tok

    def keyword(self, word: str) -> _Tok:
        tok = self.next()
        if tok.kind != "name" or tok.text != word:
            raise QasmError(f"expected {word!r}, found {tok.text or 'end of input'!r}", tok.line, tok.col)
        return tok

    def integer(self) -> int:
        tok = self.expect("num", "integer")
        if not tok.text.isdigit():
            raise QasmError(f"expected integer, found {tok.text!r}", tok.line, tok.col)
        return int(tok.text)

    def program(self) -> list[ModuleDef]:
        mods = []
        while self.peek().kind != "eof":
            mods.append(self.moduledef())
        if not mods:
            tok = self.peek()
            raise QasmError("empty program: at least one module is required", tok.line, tok.col)
        return mods

    def moduledef(self) -> ModuleDef:
        start = self.keyword("module")
        name = self.expect("name", "module name").text
        self.expect("(")
        params = []
        if self.peek().kind != ")":
            while True:
                self.keyword("qbit")
                params.append(self.expect("name", "parameter name").text)
                if self.peek().kind != ",":
                    break
                self.next()
        self.expect(")")
        self.expect("{")
        locals_: list[tuple[str, int | None]] = []
        body: list[tuple[_Tok, list, str | None]] = []
        while self.peek().kind != "}":
            tok = self.peek()
            if tok.kind == "eof":
                raise QasmError(f"unterminated module {name!r}", tok.line, tok.col)
            if tok.kind == "name" and tok.text == "qbit":
                self.next()
                lname = self.expect("name", "qubit name").text
                size = None
                if self.peek().kind == "[":
                    self.next()
                    size = self.integer()
                    if size < 1:
                        raise QasmError("array size must be positive", tok.line, tok.col)
                    self.expect("]")
                self.expect(";")
                locals_.append((lname, size))
            else:
                body.append(self.stmt())
        self.expect("}")
        mod = ModuleDef(name, params, locals_, [], line=start.line)
        mod.body = [self._resolve_stmt(mod, s) for s in body]
        return mod

    def stmt(self):
        head = self.expect("name", "statement")
        self.expect("(")
        angle = None
        if head.text == "Rz":
            angle = self.expect("num", "angle").text
            self.expect(",")
        refs = [self.qref()]
        while self.peek().kind == ",":
            self.next()
            refs.append(self.qref())
        self.expect(")")
        self.expect(";")
        return head, refs, angle

    def qref(self) -> tuple[str, int | None, _Tok]:
        tok = self.expect("name", "qubit reference")
        idx = None
        if self.peek().kind == "[":
            self.next()
            idx = self.integer()
            self.expect("]")
        return tok.text, idx, tok

    @staticmethod
    def _resolve_ref(mod: ModuleDef, ref) -> str:
        name, idx, tok = ref
        if name in mod.params:
            if idx is not None:
                raise QasmError(f"parameter {name!r} is not an array", tok.line, tok.col)
            return name
        for lname, size in mod.locals:
            if lname != name:
                continue
            if size is None:
                if idx is not None:
                    raise QasmError(f"qubit {name!r} is not an array", tok.line, tok.col)
                return name
            if idx is None:
                raise QasmError(f"array {name!r} needs an index", tok.line, tok.col)
            if idx >= size:
                raise QasmError(f"index {idx} out of range for {name}[{size}]", tok.line, tok.col)
            return f"{name}.{idx}"
        raise QasmError(f"undeclared qubit {name!r}", tok.line, tok.col)

    def _resolve_stmt(self, mod: ModuleDef, stmt) -> Instruction:
        head, refs, angle = stmt
        qs = [self._resolve_ref(mod, r) for r in refs]
        op = head.text
        if op in GATES_1Q:
            if len(qs) != 1:
                raise QasmError(f"gate {op} takes 1 qubit, got {len(qs)}", head.line, head.col)
            return Gate1(op, qs[0], angle, head.line, head.col)
        if op in GATES_2Q:
            if len(qs) != 2:
                raise QasmError(f"gate {op} takes 2 qubits, got {len(qs)}", head.line, head.col)
            if qs[0] == qs[1]:
                raise QasmError(f"{op}: distinct operands required", head.line, head.col)
            return Gate2(op, qs[0], qs[1], head.line, head.col)
        return Call(op, tuple(qs), head.line, head.col)


def parse_program(text: str) -> Program:
    """Parse modular QASM text; raises QasmError on the first problem found."""
    mods = _Parser(text).program()
    modules: dict[str, ModuleDef] = {}
    for m in mods:
        if m.name in modules:
            raise QasmError(f"duplicate module name {m.name!r}", m.line, 1)
        if m.name in GATES:
            raise QasmError(f"module name {m.name!r} clashes with a gate", m.line, 1)
        modules[m.name] = m
    if "main" not in modules:
        raise QasmError("missing module 'main'")
    for m in mods:
        for ins in m.body:
            if isinstance(ins, Call) and ins.callee not in modules:
                raise QasmError(f"unknown gate or module {ins.callee!r}", ins.line, ins.col)
    prog = Program(modules, "main")
    diags = validate(prog)
    if diags:
        d = diags[0]
        raise QasmError(d.message, d.line, d.col)
    return prog


def parse_file(path) -> Program:
    with open(path, encoding="utf-8") as fh:
        return parse_program(fh.read())


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Diagnostic:
    message: str
    module: str = ""
    line: int = 0
    col: int = 0

    def __str__(self) -> str:
        loc = f"{self.line}:{self.col}: " if self.line else ""
        where = f"[{self.module}] " if self.module else ""
        return f"{loc}{where}{self.message}"


def validate(p: Program) -> list[Diagnostic]:
    """Check every Program/ModuleDef/Instruction invariant; [] means valid."""
    diags: list[Diagnostic] = []
    if p.main not in p.modules:
        diags.append(Diagnostic(f"missing main module {p.main!r}"))
    elif p.modules[p.main].params:
        diags.append(Diagnostic("main module must declare zero parameters", p.main, p.modules[p.main].line))
    for m in p.modules.values():
        names = m.params + [n for n, _ in m.locals]
        seen: set[str] = set()
        for n in names:
            if n in seen:
                diags.append(Diagnostic(f"duplicate qubit name {n!r}", m.name, m.line))
            seen.add(n)
        qubits = set(m.qubits)
        for ins in m.body:
            ops = (ins.q,) if isinstance(ins, Gate1) else (ins.a, ins.b) if isinstance(ins, Gate2) else ins.args
            for q in ops:
                if q not in qubits:
                    diags.append(Diagnostic(f"undeclared qubit {q!r}", m.name, ins.line, ins.col))
            if isinstance(ins, Gate1) and ins.op not in GATES_1Q:
                diags.append(Diagnostic(f"unknown 1-qubit gate {ins.op!r}", m.name, ins.line, ins.col))
            elif isinstance(ins, Gate2):
                if ins.op not in GATES_2Q:
                    diags.append(Diagnostic(f"unknown 2-qubit gate {ins.op!r}", m.name, ins.line, ins.col))
                if ins.a == ins.b:
                    diags.append(Diagnostic(f"{ins.op}: distinct operands required", m.name, ins.line, ins.col))
            elif isinstance(ins, Call):
                callee = p.modules.get(ins.callee)
                if callee is None:
                    diags.append(Diagnostic(f"call to unknown module {ins.callee!r}", m.name, ins.line, ins.col))
                    continue
                if ins.callee == p.main:
                    diags.append(Diagnostic("main may not be called", m.name, ins.line, ins.col))
                if len(ins.args) != len(callee.params):
                    diags.append(Diagnostic(
                        f"arity mismatch: {ins.callee} takes {len(callee.params)} qubits, got {len(ins.args)}",
                        m.name, ins.line, ins.col))
                if len(set(ins.args)) != len(ins.args):
                    diags.append(Diagnostic(f"call to {ins.callee}: arguments must be distinct",
                                            m.name, ins.line, ins.col))
    cycle = find_cycle(p)
    if cycle:
        diags.append(Diagnostic("recursive call cycle: " + " -> ".join(cycle + [cycle[0]]), cycle[0]))
    return diags


def find_cycle(p: Program) -> list[str] | None:
    """Return one call-graph cycle as a list of module names, or None."""
    succ: dict[str, list[str]] = {n: [] for n in p.modules}
    for (a, b) in p.call_edges():
        if b in succ:
            succ[a].append(b)
    color = dict.fromkeys(p.modules, 0)
    stack: list[str] = []

    def visit(n: str) -> list[str] | None:
        color[n] = 1
        stack.append(n)
        for s in succ[n]:
            if color[s] == 1:
                return stack[stack.index(s):]
            if color[s] == 0:
                found = visit(s)
                if found:
                    return found
        stack.pop()
        color[n] = 2
        return None

    for n in p.modules:
        if color[n] == 0:
            found = visit(n)
            if found:
                return list(found)
    return None


def topo_order(p: Program) -> list[str]:
    """Modules reachable from main, callees before callers."""
    order: list[str] = []
    done: set[str] = set()

    def visit(n: str) -> None:
        if n in done:
            return
        done.add(n)
        for ins in p.modules[n].body:
            if isinstance(ins, Call):
                visit(ins.callee)
        order.append(n)

    visit(p.main)
    return order


# ---------------------------------------------------------------------------
# printing


def _fmt_ref(q: str) -> str:
    if "." in q:
        name, idx = q.rsplit(".", 1)
        return f"{name}[{idx}]"
    return q


def format_program(p: Program) -> str:
    lines = []
    for m in p.modules.values():
        params = ", ".join(f"qbit {q}" for q in m.params)
        lines.append(f"module {m.name}({params}) {{")
        for name, size in m.locals:
            lines.append(f"  qbit {name};" if size is None else f"  qbit {name}[{size}];")
        for ins in m.body:
            if isinstance(ins, Gate1):
                if ins.angle is not None:
                    lines.append(f"  {ins.op}({ins.angle}, {_fmt_ref(ins.q)});")
                else:
                    lines.append(f"  {ins.op}({_fmt_ref(ins.q)});")
            elif isinstance(ins, Gate2):
                lines.append(f"  {ins.op}({_fmt_ref(ins.a)}, {_fmt_ref(ins.b)});")
            else:
                lines.append(f"  {ins.callee}({', '.join(_fmt_ref(a) for a in ins.args)});")
        lines.append("}")
        lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# flattening and counting


def iter_flat(p: Program) -> Iterator[tuple[str, Gate1 | Gate2]]:
    """Depth-first inline expansion yielding (tag, gate) with qualified operands.

    Main's qubits keep their names; a callee local ``t`` reached through
    the call at instruction 3 of main becomes ``main:3/inc.t``. The tag of
    a gate is its call path followed by ``module:index``.
    """
    def walk(mod: ModuleDef, binding: dict[str, str], path: str):
        for idx, ins in enumerate(mod.body):
            if isinstance(ins, Gate1):
                yield f"{path}{mod.name}:{idx}", Gate1(ins.op, binding[ins.q], ins.angle)
            elif isinstance(ins, Gate2):
                yield f"{path}{mod.name}:{idx}", Gate2(ins.op, binding[ins.a], binding[ins.b])
            else:
                callee = p.modules[ins.callee]
                sub_path = f"{path}{mod.name}:{idx}/"
                sub = {par: binding[a] for par, a in zip(callee.params, ins.args)}
                for lq in callee.local_qubits:
                    sub[lq] = f"{sub_path}{callee.name}.{lq}"
                yield from walk(callee, sub, sub_path)

    main = p.main_module
    yield from walk(main, {q: q for q in main.qubits}, "")


def flatten(p: Program, max_instrs: int = DEFAULT_FLATTEN_LIMIT) -> FlatProgram:
    if max_instrs <= 0:
        raise ValueError("max_instrs must be positive")
    total = count_instructions(p)[1]
    if total > max_instrs:
        raise ExpansionLimitError(total, max_instrs)
    qubits = list(p.main_module.qubits)
    seen = set(qubits)
    instrs: list[Gate1 | Gate2] = []
    tags: list[str] = []
    for tag, g in iter_flat(p):
        instrs.append(g)
        tags.append(tag)
        for q in (g.q,) if isinstance(g, Gate1) else (g.a, g.b):
            if q not in seen:
                seen.add(q)
                qubits.append(q)
    return FlatProgram(qubits, instrs, tags)


def expanded_sizes(p: Program) -> dict[str, int]:
    """Per-module inline-expanded gate count (saturating)."""
    sizes: dict[str, int] = {}
    for name in topo_order(p):
        n = 0
        for ins in p.modules[name].body:
            n += sizes[ins.callee] if isinstance(ins, Call) else 1
            n = min(n, COUNT_SATURATION)
        sizes[name] = n
    return sizes


@dataclass(frozen=True)
class InstructionCount:
    modular: int
    flattened: int
    saturated: bool = False

    def __iter__(self):
        return iter((self.modular, self.flattened))

    def __getitem__(self, i: int) -> int:
        return (self.modular, self.flattened)[i]


def count_instructions(p: Program) -> InstructionCount:
    modular = sum(len(m.body) for m in p.modules.values())
    flat = expanded_sizes(p)[p.main]
    return InstructionCount(modular, flat, flat >= COUNT_SATURATION)


def call_counts(p: Program) -> dict[str, int]:
    """Dynamic invocation count of every reachable module (main = 1)."""
    order = topo_order(p)
    calls = dict.fromkeys(order, 0)
    calls[p.main] = 1
    for name in reversed(order):
        for ins in p.modules[name].body:
            if isinstance(ins, Call):
                calls[ins.callee] = min(calls[ins.callee] + calls[name], COUNT_SATURATION)
    return calls


def flat_to_program(fp: FlatProgram, p: Program) -> Program:
    """A call-free program equivalent to ``fp``; inlined callee locals become ``anc[i]``."""
    main = p.main_module
    own = set(main.qubits)
    extra = [q for q in fp.qubits if q not in own]
    rename = {q: q for q in own}
    rename.update({q: f"anc.{i}" for i, q in enumerate(extra)})
    body: list[Instruction] = []
    for g in fp.instrs:
        if isinstance(g, Gate1):
            body.append(Gate1(g.op, rename[g.q], g.angle))
        else:
            body.append(Gate2(g.op, rename[g.a], rename[g.b]))
    locals_ = list(main.locals) + ([("anc", len(extra))] if extra else [])
    return Program({main.name: ModuleDef(main.name, list(main.params), locals_, body)}, main.name)
