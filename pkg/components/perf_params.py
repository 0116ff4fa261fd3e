"""
Performance model components.
Workloads, model parameters, machine profiles and calibration sets.
"""
from dataclasses import dataclass, field, replace
from typing import Dict, List, Tuple

from utils.errors import ArgumentError


@dataclass(frozen=True)
class WorkloadSpec:
    """
    One training run as seen by the model

    i: training/validation images, it: test images, ep: epochs, p: processing units
    """
    i: int
    it: int
    ep: int
    p: int = 1

    def __post_init__(self):
        for name in ("i", "it", "ep", "p"):
            if getattr(self, name) < 0:
                raise ArgumentError(f"workload {name} must be nonnegative, got {getattr(self, name)}")

    @property
    def p_i(self) -> int:
        return min(self.p, self.i)

    @property
    def p_it(self) -> int:
        return min(self.p, self.it)

    def with_p(self, p: int) -> "WorkloadSpec":
        return replace(self, p=p)


@dataclass(frozen=True)
class MachineProfile:
    """Core speed in operations per second and the theoretical CPI floor"""
    name: str = "host"
    core_speed_hz: float = 1.0e9
    cpi_floor: float = 1.0

    def __post_init__(self):
        if not self.core_speed_hz > 0:
            raise ArgumentError(f"core speed must be positive, got {self.core_speed_hz}")
        if self.cpi_floor < 0:
            raise ArgumentError(f"cpi floor must be nonnegative, got {self.cpi_floor}")


@dataclass(frozen=True)
class PerfModelParams:
    """
    Constants of the speedup formula (a..g, time units) and of the
    execution-time model (operation counts, machine speed, correction factors).

    contention_table maps a thread count to the contention measured at that
    count; when empty, memory_contention applies to every p.
    """
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0
    e: float = 0.0
    f: float = 0.0
    g: float = 0.0
    prep: float = 0.0
    fprop: float = 0.0
    bprop: float = 0.0
    s: float = 1.0e9
    cpi: float = 1.0
    operation_factor: float = 1.0
    memory_contention: float = 0.0
    contention_table: Tuple[Tuple[int, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.s > 0:
            raise ArgumentError(f"core speed s must be positive, got {self.s}")
        for name in ("a", "b", "c", "d", "e", "f", "g", "prep", "fprop", "bprop", "cpi",
                     "operation_factor", "memory_contention"):
            if getattr(self, name) < 0:
                raise ArgumentError(f"model parameter {name} must be nonnegative, got {getattr(self, name)}")
        for p, value in self.contention_table:
            if p < 1 or value < 0:
                raise ArgumentError(f"bad contention table entry {p}: {value}")
        # canonical order for interpolation
        object.__setattr__(self, "contention_table", tuple(sorted(self.contention_table)))

    def replace(self, **changes) -> "PerfModelParams":
        return replace(self, **changes)

    def as_dict(self) -> Dict[str, float]:
        """Scalar parameters by name (the contention table is left out)"""
        return {name: getattr(self, name) for name in PARAM_NAMES}


PARAM_NAMES = ("a", "b", "c", "d", "e", "f", "g", "prep", "fprop", "bprop", "s", "cpi",
               "operation_factor", "memory_contention")


@dataclass
class CalibrationSet:
    """Measured wall times of known workloads"""
    points: List[Tuple[WorkloadSpec, float]] = field(default_factory=list)

    def add(self, workload: WorkloadSpec, seconds: float) -> None:
        if not seconds > 0:
            raise ArgumentError(f"measured time must be positive, got {seconds}")
        self.points.append((workload, float(seconds)))

    def distinct_p(self) -> List[int]:
        return sorted({w.p for w, _ in self.points})

    def __len__(self) -> int:
        return len(self.points)
