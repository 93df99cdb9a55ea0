"""Assign a module's qubits to cells of its region."""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass

from .arch import Cell, ModuleRegion, intra_distance
from .qasm import Call, Gate2, ModuleDef

DEFAULT_BUDGET = 1000
DEFAULT_RESTARTS = 16
BRUTE_FORCE_LIMIT = 8


class InstanceTooLarge(ValueError):
    pass


@dataclass
class InteractionGraph:
    nodes: list[str]
    edge_weight: dict[tuple[str, str], int]

    def weight(self, u: str, v: str) -> int:
        return self.edge_weight.get((u, v) if u < v else (v, u), 0)


@dataclass
class Placement:
    assign: dict[str, Cell]
    cost: int

    def cells_for(self, qubits: list[str]) -> list[Cell]:
        return [self.assign[q] for q in qubits]


def _key(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u < v else (v, u)


def build_interaction_graph(m: ModuleDef) -> InteractionGraph:
    pairs: Counter[tuple[str, str]] = Counter()
    calls: Counter[tuple[str, ...]] = Counter()
    for ins in m.body:
        if isinstance(ins, Gate2):
            pairs[_key(ins.a, ins.b)] += 1
        elif isinstance(ins, Call):
            calls[ins.args] += 1
    # identical argument lists contribute the same pairs, so expand each once
    for args, n in calls.items():
        for u, v in itertools.combinations(args, 2):
            pairs[_key(u, v)] += n
    return InteractionGraph(list(m.qubits), dict(pairs))


def placement_cost(g: InteractionGraph, assign: dict[str, Cell]) -> int:
    return sum(wt * intra_distance(assign[u], assign[v]) for (u, v), wt in g.edge_weight.items())


def fcfs_placement(m: ModuleDef, r: ModuleRegion, g: InteractionGraph | None = None) -> Placement:
    if len(m.params) != len(r.param_cells) or len(m.local_qubits) != len(r.local_cells):
        raise ValueError(f"region does not fit module {m.name!r}")
    assign = dict(zip(m.params, r.param_cells))
    assign.update(zip(m.local_qubits, r.local_cells))
    g = g if g is not None else build_interaction_graph(m)
    return Placement(assign, placement_cost(g, assign))


def optimize_placement(g: InteractionGraph, m: ModuleDef, r: ModuleRegion,
                       budget: int = DEFAULT_BUDGET, restarts: int = DEFAULT_RESTARTS) -> Placement:
    """Best-improvement pair swaps within the param and local classes.

    The first descent starts from FCFS. Budget left over once it reaches a
    local minimum goes to further descents from seeded shuffles of each
    class; the cheapest result wins, ties going to the earlier descent.
    ``budget`` counts applied swaps over all descents.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    place = fcfs_placement(m, r, g)
    adj: dict[str, list[tuple[str, int]]] = {q: [] for q in place.assign}
    for (u, v), wt in g.edge_weight.items():
        adj[u].append((v, wt))
        adj[v].append((u, wt))
    pairs = list(itertools.combinations(m.params, 2)) + list(itertools.combinations(m.local_qubits, 2))
    if not pairs or not g.edge_weight:
        return place

    def descend(assign: dict[str, Cell], cost: int, left: int) -> tuple[dict[str, Cell], int, int]:
        def delta(u: str, v: str) -> int:
            cu, cv = assign[u], assign[v]
            d = 0
            for x, wt in adj[u]:
                if x != v:
                    d += wt * (intra_distance(cv, assign[x]) - intra_distance(cu, assign[x]))
            for x, wt in adj[v]:
                if x != u:
                    d += wt * (intra_distance(cu, assign[x]) - intra_distance(cv, assign[x]))
            return d

        while left > 0:
            best, best_pair = 0, None
            for u, v in pairs:
                d = delta(u, v)
                if d < best:
                    best, best_pair = d, (u, v)
            if best_pair is None:
                break
            u, v = best_pair
            assign[u], assign[v] = assign[v], assign[u]
            cost += best
            left -= 1
        return assign, cost, left

    best_assign, best_cost, left = descend(dict(place.assign), place.cost, budget)
    rng = random.Random(0)
    for _ in range(restarts):
        if left <= 0 or best_cost == 0:
            break
        pc, lc = list(r.param_cells), list(r.local_cells)
        rng.shuffle(pc)
        rng.shuffle(lc)
        start = dict(zip(m.params, pc))
        start.update(zip(m.local_qubits, lc))
        assign, cost, left = descend(start, placement_cost(g, start), left)
        if cost < best_cost:
            best_assign, best_cost = assign, cost
    return Placement(best_assign, best_cost)


def brute_force_optimal(g: InteractionGraph, m: ModuleDef, r: ModuleRegion) -> Placement:
    """Exhaustive minimum over class-respecting assignments (small modules only)."""
    params, locs = m.params, m.local_qubits
    if len(params) > BRUTE_FORCE_LIMIT or len(locs) > BRUTE_FORCE_LIMIT:
        raise InstanceTooLarge(
            f"brute force limited to {BRUTE_FORCE_LIMIT} params and locals; "
            f"got {len(params)} and {len(locs)} ({math.factorial(len(params)) * math.factorial(len(locs))} cases)")
    best: Placement | None = None
    for pp in itertools.permutations(r.param_cells):
        for lp in itertools.permutations(r.local_cells):
            assign = dict(zip(params, pp))
            assign.update(zip(locs, lp))
            c = placement_cost(g, assign)
            if best is None or c < best.cost:
                best = Placement(assign, c)
    assert best is not None
    return best


def place_module(m: ModuleDef, r: ModuleRegion, mode: str = "fcfs", budget: int = DEFAULT_BUDGET) -> Placement:
    g = build_interaction_graph(m)
    if mode == "optimized":
        return optimize_placement(g, m, r, budget)
    return fcfs_placement(m, r, g)
