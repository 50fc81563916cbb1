"""Code-distance and space-time-volume estimates for compiled runs.

The logical failure model is the standard surface-code heuristic
p_L(d) = A * (p / p_th)^((d+1)/2) with configurable A and threshold
p_th; a union bound over the space-time volume (cells x slices) picks
the smallest odd distance meeting the target success probability.
Outputs are model-relative: the constants are documented knobs, not
claims about any particular decoder.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator

from .layout import generate_layout, parse_layout
from .pipeline import PipelineConfig, compile_circuit
from .qasm import Circuit, Gate, GateKind
from .slicer import SlicerConfig, run_stream


class EstimateError(ValueError):
    pass


@dataclass(frozen=True)
class ErrorModel:
    prefactor: float = 0.1          # A
    threshold: float = 1e-2         # p_th
    qubits_per_patch_factor: int = 2  # physical qubits per patch = factor * d^2


@dataclass(frozen=True)
class ResourceQuery:
    physical_error_rate: float
    cells: int
    slices: int
    success_probability: float

    def __post_init__(self) -> None:
        if not 0 < self.success_probability < 1:
            raise EstimateError("success probability must be in (0, 1)")
        if self.physical_error_rate <= 0:
            raise EstimateError("physical error rate must be positive")
        if self.cells <= 0 or self.slices < 0:
            raise EstimateError("cells must be positive and slices non-negative")

    @property
    def volume(self) -> int:
        return self.cells * self.slices


@dataclass(frozen=True)
class ResourceReport:
    code_distance: int
    physical_qubits_per_patch: int
    total_physical_qubits: int
    volume: int
    failure_bound: float


def logical_error_rate(p: float, d: int, model: ErrorModel = ErrorModel()) -> float:
    """Failure probability per patch per slice at distance d."""
    if p >= model.threshold:
        raise EstimateError(
            f"physical error rate {p:g} is not below threshold {model.threshold:g}"
        )
    if d < 1 or d % 2 == 0:
        raise EstimateError("code distance must be a positive odd integer")
    return model.prefactor * (p / model.threshold) ** ((d + 1) / 2)


def min_distance(query: ResourceQuery, model: ErrorModel = ErrorModel()) -> ResourceReport:
    """Smallest odd d with volume * p_L(d) within the failure budget."""
    budget = 1 - query.success_probability
    volume = max(query.volume, 1)
    d = 1
    while True:
        rate = logical_error_rate(query.physical_error_rate, d, model)
        bound = volume * rate
        if bound <= budget:
            per_patch = model.qubits_per_patch_factor * d * d
            return ResourceReport(
                code_distance=d,
                physical_qubits_per_patch=per_patch,
                total_physical_qubits=per_patch * query.cells,
                volume=query.volume,
                failure_bound=bound,
            )
        d += 2
        if d > 10_001:
            raise EstimateError("no practical distance meets the target")


def random_htcnot_circuit(width: int, depth: int, seed: int) -> Circuit:
    """Seeded random circuit over H, T and CNOT (the benchmark gate mix)."""
    rng = random.Random(seed)
    gates: list[Gate] = []
    for _ in range(depth):
        choice = rng.randrange(3)
        if choice == 0:
            gates.append(Gate(GateKind.H, (rng.randrange(width),)))
        elif choice == 1:
            gates.append(Gate(GateKind.T, (rng.randrange(width),)))
        else:
            if width < 2:
                gates.append(Gate(GateKind.H, (0,)))
                continue
            control = rng.randrange(width)
            target = rng.randrange(width - 1)
            if target >= control:
                target += 1
            gates.append(Gate(GateKind.CX, (control, target)))
    return Circuit(width, tuple(gates))


@dataclass
class SweepPoint:
    width: int
    depth: int
    cells: int
    slices: int
    report: ResourceReport | None
    error: str | None = None


def sweep(
    widths: list[int],
    depths: list[int],
    physical_error_rate: float,
    success_probability: float,
    seed: int = 0,
    model: ErrorModel = ErrorModel(),
    pipeline: PipelineConfig | None = None,
) -> Iterator[SweepPoint]:
    """Compile seeded random H/T/CNOT circuits and estimate each grid point.

    Pipeline failures are recorded per point rather than aborting the
    sweep.  The layout is auto-generated from the width.
    """
    if not widths or not depths:
        raise EstimateError("width and depth ranges must be non-empty")
    pipeline = pipeline or PipelineConfig()
    for width in widths:
        layout = parse_layout(generate_layout(width))
        cells = layout.rows * layout.cols
        for depth in depths:
            point_seed = seed * 1_000_003 + width * 1_009 + depth
            circuit = random_htcnot_circuit(width, depth, point_seed)
            try:
                stats = run_stream(
                    compile_circuit(circuit, pipeline), layout,
                    config=SlicerConfig(record_events=False),
                )
                query = ResourceQuery(
                    physical_error_rate, cells, stats.slice_count, success_probability
                )
                yield SweepPoint(width, depth, cells, stats.slice_count, min_distance(query, model))
            except Exception as error:  # recorded, not fatal to the sweep
                yield SweepPoint(width, depth, cells, 0, None, error=str(error))


def sweep_csv_rows(points: Iterator[SweepPoint]) -> Iterator[str]:
    yield "width,depth,cells,slices,distance,volume,physical_qubits,error"
    for point in points:
        if point.report is None:
            yield f"{point.width},{point.depth},{point.cells},,,,,{point.error}"
        else:
            r = point.report
            yield (
                f"{point.width},{point.depth},{point.cells},{point.slices},"
                f"{r.code_distance},{r.volume},{r.total_physical_qubits},"
            )
