"""Hierarchical machine model: module slots above a multi-lane bus.

Coordinates are integer (x, y). Module regions occupy rows y >= 0 with
row 0 adjacent to the bus; bus lane ``l`` is the row y = -1 - l. Every
lane cell at column x is directly reachable from the module cell (x, 0),
so a transfer's hop count does not depend on the lane it uses.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .qasm import GATES

Cell = tuple[int, int]

DEFAULT_GATE_TIME = {g: 1 for g in ("H", "X", "Y", "Z", "S", "Sdag", "T", "Tdag", "Rz")}
DEFAULT_GATE_TIME.update({"CNOT": 10, "CZ": 10, "SWAP": 30, "MeasZ": 10, "PrepZ": 10})


class ConfigError(ValueError):
    pass


@dataclass
class ArchConfig:
    bus_bandwidth: int | None = None  # None: max parameter count over modules
    gate_time: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_GATE_TIME))
    swap_time: int = 30
    swap_cycle_weight: int = 1
    move_time: int = 10
    placement_mode: str = "fcfs"
    memoize: bool = True
    placement_budget: int = 1000
    placement_guard: bool = True  # keep a module's optimized placement only if the program maps no deeper

    def __post_init__(self) -> None:
        if self.bus_bandwidth is not None and self.bus_bandwidth < 1:
            raise ConfigError("bus_bandwidth must be >= 1")
        for k in ("swap_time", "move_time", "swap_cycle_weight"):
            if getattr(self, k) < 1:
                raise ConfigError(f"{k} must be >= 1")
        for g in GATES:
            self.gate_time.setdefault(g, DEFAULT_GATE_TIME[g])
        for g, t in self.gate_time.items():
            if g not in GATES:
                raise ConfigError(f"unknown gate {g!r} in gate_time")
            if t < 1:
                raise ConfigError(f"gate_time.{g} must be >= 1")
        if self.placement_budget < 0:
            raise ConfigError("placement_budget must be >= 0")
        if self.placement_mode not in ("fcfs", "optimized"):
            raise ConfigError(f"placement_mode must be fcfs or optimized, got {self.placement_mode!r}")


_BOOL = {"on": True, "off": False, "true": True, "false": False, "1": True, "0": False}


def parse_config(text: str) -> ArchConfig:
    """Parse ``key = value`` lines (``#`` comments) into an ArchConfig."""
    kw: dict = {"gate_time": dict(DEFAULT_GATE_TIME)}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        try:
            if key == "bus_bandwidth":
                kw[key] = None if value == "auto" else int(value)
            elif key in ("swap_time", "move_time", "swap_cycle_weight", "placement_budget"):
                kw[key] = int(value)
            elif key.startswith("gate_time."):
                gate = key.split(".", 1)[1]
                if gate not in GATES:
                    raise ConfigError(f"line {lineno}: unknown gate {gate!r}")
                kw["gate_time"][gate] = int(value)
            elif key == "placement_mode":
                kw[key] = value
            elif key in ("memoize", "placement_guard"):
                if value.lower() not in _BOOL:
                    raise ConfigError(f"line {lineno}: {key} must be on/off")
                kw[key] = _BOOL[value.lower()]
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from None
    return ArchConfig(**kw)


def load_config(path: str | None = None) -> ArchConfig:
    path = path or os.environ.get("HQMAP_ARCH")
    if not path:
        return ArchConfig()
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def format_config(cfg: ArchConfig) -> str:
    lines = [
        f"bus_bandwidth = {'auto' if cfg.bus_bandwidth is None else cfg.bus_bandwidth}",
        f"swap_time = {cfg.swap_time}",
        f"move_time = {cfg.move_time}",
        f"swap_cycle_weight = {cfg.swap_cycle_weight}",
        f"placement_mode = {cfg.placement_mode}",
        f"placement_budget = {cfg.placement_budget}",
        f"memoize = {'on' if cfg.memoize else 'off'}",
        f"placement_guard = {'on' if cfg.placement_guard else 'off'}",
    ]
    lines += [f"gate_time.{g} = {t}" for g, t in sorted(cfg.gate_time.items())]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# regions


def region_shape(n_params: int, n_locals: int) -> tuple[int, int]:
    """Most-square rectangle wide enough for all parameters on one row."""
    n = n_params + n_locals
    if n < 1:
        raise ValueError("a region needs at least one qubit")
    width = max(math.isqrt(n - 1) + 1, n_params)
    return width, -(-n // width)


@dataclass(frozen=True)
class ModuleRegion:
    """Rectangular region; cells are region-relative (cx, cy), cy = 0 on the bus side."""

    slot: int
    origin: Cell
    width: int
    height: int
    param_cells: tuple[Cell, ...]
    local_cells: tuple[Cell, ...]
    null_cells: tuple[Cell, ...]

    @classmethod
    def build(cls, slot: int, origin: Cell, n_params: int, n_locals: int) -> ModuleRegion:
        w, h = region_shape(n_params, n_locals) if n_params + n_locals else (1, 1)
        cells = [(x, y) for y in range(h) for x in range(w)]
        n = n_params + n_locals
        return cls(slot, origin, w, h, tuple(cells[:n_params]), tuple(cells[n_params:n]), tuple(cells[n:]))

    @property
    def cells(self) -> tuple[Cell, ...]:
        return self.param_cells + self.local_cells + self.null_cells

    def to_global(self, c: Cell) -> Cell:
        return (self.origin[0] + c[0], self.origin[1] + c[1])


def intra_distance(a: Cell, b: Cell) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def passing_distance(from_cell: Cell, to_cell: Cell) -> int:
    """Hops for one qubit passing between global cells of two regions.

    Down to the bus, along it column to column, then up to the target.
    """
    return (from_cell[1] + 1) + abs(from_cell[0] - to_cell[0]) + (to_cell[1] + 1)


class LayoutError(RuntimeError):
    pass


class LayoutState:
    """The global grid: a stack of live regions, bus lanes and per-cell state.

    ``occ`` maps cell index to qubit id (-1 empty); ``free`` is the time a
    cell is next available and ``cyc`` the cycle count of its last record.
    Cell index is ``y * width + x`` for y >= 0. Bus lanes are tracked only
    by their release time since a lane is held by one transfer at a time.
    """

    def __init__(self, bus_bandwidth: int, width: int = 1, height: int = 1):
        if bus_bandwidth < 1:
            raise ValueError("bus_bandwidth must be >= 1")
        self.bus_bandwidth = bus_bandwidth
        self.width = max(width, 1)
        self.height = max(height, 1)
        n = self.width * self.height
        self.occ = np.full(n, -1, dtype=np.int64)
        self.free = np.zeros(n, dtype=np.int64)
        self.cyc = np.zeros(n, dtype=np.int64)
        self.lane_free = np.zeros(bus_bandwidth, dtype=np.int64)
        self.live_regions: list[ModuleRegion] = []

    def index(self, x: int, y: int) -> int:
        return y * self.width + x

    def coords(self, idx: int) -> Cell:
        return idx % self.width, idx // self.width

    def next_origin(self) -> Cell:
        if not self.live_regions:
            return (0, 0)
        top = self.live_regions[-1]
        return (top.origin[0] + top.width + 1, 0)

    def _grow(self, width: int, height: int) -> None:
        width, height = max(width, self.width), max(height, self.height)
        if (width, height) == (self.width, self.height):
            return
        new = {}
        for name in ("occ", "free", "cyc"):
            old = getattr(self, name).reshape(self.height, self.width)
            arr = np.full((height, width), -1 if name == "occ" else 0, dtype=np.int64)
            arr[: self.height, : self.width] = old
            new[name] = arr.reshape(-1)
        self.occ, self.free, self.cyc = new["occ"], new["free"], new["cyc"]
        self.width, self.height = width, height

    def region_indices(self, r: ModuleRegion) -> np.ndarray:
        x0 = r.origin[0]
        return np.array([(y * self.width + x0 + x) for (x, y) in r.cells], dtype=np.int64)

    def snapshot(self):
        return (self.occ.copy(), self.free.copy(), self.cyc.copy(), self.lane_free.copy(),
                list(self.live_regions), self.width, self.height)


def allocate_region(layout: LayoutState, n_params: int, n_locals: int) -> ModuleRegion:
    """Push a region for a module onto the slot stack, next to the top one."""
    if n_params + n_locals < 1:
        raise ValueError("n_params + n_locals must be >= 1")
    origin = layout.next_origin()
    r = ModuleRegion.build(len(layout.live_regions), origin, n_params, n_locals)
    layout._grow(origin[0] + r.width, r.height)
    layout.live_regions.append(r)
    return r


def deallocate_region(layout: LayoutState, region: ModuleRegion | None = None) -> LayoutState:
    """Pop the top region and clear the occupancy of its cells."""
    if not layout.live_regions:
        raise LayoutError("deallocate on empty region stack")
    if region is not None and layout.live_regions[-1] is not region:
        raise LayoutError("only the top-of-stack region may be deallocated")
    top = layout.live_regions.pop()
    layout.occ[layout.region_indices(top)] = -1
    return layout
