"""Stage 1 orchestration: circuits in, logical lattice instructions out.

The flow is: controlled gates break into CNOTs and halved single-qubit
rotations, a peephole pass removes dead gates (zero-angle rotations and
adjacent self-inverse pairs, which the halving step produces on exact
inputs), small rotations are approximated to Clifford+T letters, and the
result is lowered to LLI in direct or compressed mode.  The optional
Clifford-elimination transform rewrites the circuit to non-Clifford
rotations plus terminal measurements before lowering.

Everything streams: the returned iterators hold at most one gate's worth
of instructions at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .angles import ExactAngle
from .approx import Approximator, CacheBackend, SearchBackend
from .litinski import circuit_to_rotations, litinski_transform
from .lli import Lli
from .lower import Lowerer, LoweringConfig, z_rotation_letters
from .pauli import PauliOperator, PauliProduct
from .qasm import Circuit, Gate, GateKind


@dataclass
class PipelineConfig:
    """Knobs for the gate-processing stage."""

    epsilon: float = 1e-3
    mode: str = "direct"              # "direct" | "compressed"
    litinski: bool = False
    boundary_restore: bool = True
    cache_path: str | None = None     # approximation sequences from a file
    cache_only: bool = False          # fail instead of searching
    search_budget: int = 17           # meet-in-the-middle half depth

    def approximator(self) -> Approximator:
        if self.cache_path is not None:
            backend = CacheBackend.from_file(Path(self.cache_path))
            if not self.cache_only:
                # Cached entries take priority; the bounded search fills gaps.
                return Approximator(_ChainBackend(backend, SearchBackend(self.search_budget)))
            return Approximator(backend)
        if self.cache_only:
            raise ValueError("cache-only mode requires a cache path")
        return Approximator(SearchBackend(self.search_budget))

    def lowering(self) -> LoweringConfig:
        return LoweringConfig(
            mode=self.mode,
            epsilon=self.epsilon,
            boundary_restore=self.boundary_restore,
        )


@dataclass
class _ChainBackend:
    first: CacheBackend
    second: SearchBackend

    def approximate(self, angle: ExactAngle, epsilon: float) -> tuple[str, float]:
        try:
            return self.first.approximate(angle, epsilon)
        except KeyError:
            return self.second.approximate(angle, epsilon)


# ---------------------------------------------------------------------------
# gate-level passes
# ---------------------------------------------------------------------------

def decompose_controlled(gate: Gate) -> list[Gate]:
    """Break CRZ/CRX/CZ into CNOTs and halved single-qubit rotations."""
    if gate.kind is GateKind.CRZ:
        control, target = gate.qubits
        assert gate.angle is not None
        half = gate.angle.halve()
        return [
            Gate(GateKind.RZ, (control,), half),
            Gate(GateKind.RZ, (target,), half),
            Gate(GateKind.CX, (control, target)),
            Gate(GateKind.RZ, (target,), -half),
            Gate(GateKind.CX, (control, target)),
        ]
    if gate.kind is GateKind.CRX:
        control, target = gate.qubits
        assert gate.angle is not None
        inner = Gate(GateKind.CRZ, gate.qubits, gate.angle)
        return [Gate(GateKind.H, (target,))] + decompose_controlled(inner) + [Gate(GateKind.H, (target,))]
    if gate.kind is GateKind.CZ:
        control, target = gate.qubits
        return [
            Gate(GateKind.H, (target,)),
            Gate(GateKind.CX, (control, target)),
            Gate(GateKind.H, (target,)),
        ]
    return [gate]


_SELF_INVERSE = {GateKind.H, GateKind.X, GateKind.Z, GateKind.CX, GateKind.CZ}
_DAGGER_PAIRS = {
    (GateKind.S, GateKind.SDG), (GateKind.SDG, GateKind.S),
    (GateKind.T, GateKind.TDG), (GateKind.TDG, GateKind.T),
}


def _cancels(a: Gate, b: Gate) -> bool:
    if a.qubits != b.qubits:
        return False
    if a.kind is b.kind and a.kind in _SELF_INVERSE:
        return True
    if (a.kind, b.kind) in _DAGGER_PAIRS:
        return True
    if a.kind is b.kind and a.angle is not None and b.angle is not None:
        return (a.angle + b.angle).is_zero
    return False


def eliminate_dead_gates(gates: list[Gate]) -> list[Gate]:
    """Drop zero-angle rotations and cancel adjacent self-inverse pairs."""
    stack: list[Gate] = []
    for gate in gates:
        if gate.angle is not None and gate.angle.is_zero:
            continue
        if stack and _cancels(stack[-1], gate):
            stack.pop()
        else:
            stack.append(gate)
    return stack


def preprocess(circuit: Circuit) -> list[Gate]:
    """Controlled-gate decomposition followed by the dead-gate peephole."""
    gates: list[Gate] = []
    for gate in circuit.gates:
        gates.extend(decompose_controlled(gate))
    return eliminate_dead_gates(gates)


def expand_to_clifford_t(
    gates: list[Gate], approximator: Approximator, epsilon: float
) -> list[Gate]:
    """Replace non-octant rotations by Clifford+T letter gates."""
    letter_kinds = {
        "H": GateKind.H, "S": GateKind.S, "T": GateKind.T,
        "X": GateKind.X, "Z": GateKind.Z,
    }
    out: list[Gate] = []
    for gate in gates:
        if gate.kind not in (GateKind.RZ, GateKind.RX):
            out.append(gate)
            continue
        assert gate.angle is not None
        angle = gate.angle.halve()  # rz(theta) is the Z(theta/2) rotation
        letters = z_rotation_letters(angle, approximator, epsilon)
        if gate.kind is GateKind.RX and letters:
            letters = "H" + letters + "H"
        out.extend(Gate(letter_kinds[letter], gate.qubits) for letter in letters)
    return eliminate_dead_gates(out)


# ---------------------------------------------------------------------------
# end-to-end compilation
# ---------------------------------------------------------------------------

class _Buffer:
    def __init__(self) -> None:
        self.items: list[Lli] = []

    def __call__(self, instruction: Lli) -> None:
        self.items.append(instruction)

    def drain(self) -> list[Lli]:
        out, self.items = self.items, []
        return out


def compile_circuit(circuit: Circuit, config: PipelineConfig | None = None) -> Iterator[Lli]:
    """Stream LLI for a parsed circuit under the given configuration."""
    config = config or PipelineConfig()
    approximator = config.approximator()
    buffer = _Buffer()
    lowerer = Lowerer(circuit.num_qubits, buffer, config.lowering(), approximator)

    if config.litinski:
        # Outcome-only semantics: terminal Z measurements on every qubit.
        gates = expand_to_clifford_t(preprocess(circuit), approximator, config.epsilon)
        rotations = circuit_to_rotations(Circuit(circuit.num_qubits, tuple(gates)))
        measurements = [
            PauliProduct.single(q, PauliOperator.Z) for q in range(circuit.num_qubits)
        ]
        transformed = litinski_transform(rotations, measurements)
        for rotation in transformed.rotations:
            lowerer.rotation(rotation)
            yield from buffer.drain()
        for observable in transformed.measurements:
            lowerer.measure(observable)
            yield from buffer.drain()
        return

    for gate in preprocess(circuit):
        lowerer.gate(gate)
        yield from buffer.drain()
    lowerer.flush()
    yield from buffer.drain()


def compile_program(text: str, config: PipelineConfig | None = None, **parse_kwargs) -> Iterator[Lli]:
    from .qasm import parse_program

    return compile_circuit(parse_program(text, **parse_kwargs), config)
