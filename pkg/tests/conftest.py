import random

from hqmap.qasm import Call, Gate1, Gate2, ModuleDef, Program

GATES1 = ("H", "T", "X", "MeasZ")
GATES2 = ("CNOT", "CZ", "SWAP")


def random_program(seed: int, n_modules: int = 3, max_body: int = 12, calls: bool = True) -> Program:
    """Random acyclic modular program; module i may only call modules j > i."""
    rng = random.Random(seed)
    names = ["main"] + [f"m{i}" for i in range(1, n_modules)]
    mods = {}
    for i in reversed(range(n_modules)):
        name = names[i]
        n_p = 0 if i == 0 else rng.randint(1, 4)
        n_l = rng.randint(1 if i == 0 else 0, 3)
        if i == 0:
            n_l = max(n_l, 4)
        params = [f"p{k}" for k in range(n_p)]
        locs = [(f"t{k}", None) for k in range(n_l)]
        qs = params + [q for q, _ in locs]
        body = []
        for _ in range(rng.randint(0, max_body)):
            r = rng.random()
            callees = [n for n in names[i + 1:] if len(mods[n].params) <= len(qs)]
            if calls and callees and r < 0.25:
                c = rng.choice(callees)
                body.append(Call(c, tuple(rng.sample(qs, len(mods[c].params)))))
            elif len(qs) >= 2 and r < 0.65:
                a, b = rng.sample(qs, 2)
                body.append(Gate2(rng.choice(GATES2), a, b))
            elif qs:
                body.append(Gate1(rng.choice(GATES1), rng.choice(qs)))
        mods[name] = ModuleDef(name, params, locs, body)
    return Program({n: mods[n] for n in names})


def pytest_terminal_summary(terminalreporter):
    import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(line)
