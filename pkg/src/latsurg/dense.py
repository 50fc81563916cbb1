"""Dense full-register simulation of circuits and LLI streams.

The plain, slow reference: one state vector over every live patch, no
tensor-factor tracking.  It backs the verify command and serves as the
ground truth the lazy simulator is checked against.

Measurement semantics shared with the lazy simulator: each measurement
draws exactly one uniform variate from the stream's random source and
records an outcome bit (0 for the +1 eigenvalue) under the instruction's
sequence number.  A multi-body measurement of a signed observable
reports the eigenvalue of the observable including its sign.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .gates import (
    GATE_MATRICES,
    KET_STATES,
    apply_pauli_product,
    apply_unitary,
    embed_unitary,
    rz_gate,
)
from .lli import (
    Basis,
    BoundaryRotate,
    ConditionalCorrection,
    Init,
    Lli,
    MeasureSingle,
    MultiBodyMeasure,
    RequestMagicState,
    SGate,
    TransversalHadamard,
    TransversalPauli,
)
from .pauli import PauliOperator, PauliProduct
from .qasm import Circuit, GateKind


class SimulationError(RuntimeError):
    pass


def simulate_circuit(circuit: Circuit, initial: np.ndarray | None = None) -> np.ndarray:
    """Final state vector of a gate circuit applied to |0...0> (or initial)."""
    n = circuit.num_qubits
    state = initial.astype(complex).copy() if initial is not None else None
    if state is None:
        state = np.zeros(1 << n, dtype=complex)
        state[0] = 1.0
    for gate in circuit.gates:
        state = apply_unitary(state, _gate_matrix(gate), gate.qubits, n)
    return state


def _gate_matrix(gate) -> np.ndarray:
    kind = gate.kind
    simple = {
        GateKind.H: "H", GateKind.X: "X", GateKind.Z: "Z", GateKind.S: "S",
        GateKind.SDG: "Sdg", GateKind.T: "T", GateKind.TDG: "Tdg",
    }
    if kind in simple:
        return GATE_MATRICES[simple[kind]]
    if kind is GateKind.RZ:
        return rz_gate(gate.angle.to_float())
    if kind is GateKind.RX:
        h = GATE_MATRICES["H"]
        return h @ rz_gate(gate.angle.to_float()) @ h
    if kind is GateKind.CX:
        return np.array(
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
        )
    if kind is GateKind.CZ:
        return np.diag([1, 1, 1, -1]).astype(complex)
    if kind is GateKind.CRZ:
        return np.diag([1, 1, 1, np.exp(1j * gate.angle.to_float())]).astype(complex)
    if kind is GateKind.CRX:
        h = GATE_MATRICES["H"]
        crz = np.diag([1, 1, 1, np.exp(1j * gate.angle.to_float())]).astype(complex)
        ht = embed_unitary(h, (1,), 2)
        return ht @ crz @ ht
    raise SimulationError(f"no dense matrix for {kind}")


@dataclass
class _MagicBlock:
    observable: PauliProduct
    m1_bit: int


class DenseSimulator:
    """Full-register LLI interpreter with seeded outcome sampling."""

    def __init__(
        self,
        rng: random.Random | None = None,
        auto_correct_rotations: bool = False,
        forced_outcomes: list[int] | None = None,
    ):
        self.rng = rng or random.Random(0)
        self.auto_correct = auto_correct_rotations
        self.order: list[int] = []          # live patch ids, register order
        self.state = np.ones(1, dtype=complex)
        self.outcomes: dict[int, int] = {}
        self._forced = list(forced_outcomes) if forced_outcomes is not None else None
        self._branch_probability = 1.0
        self._magic_pending: dict[int, _MagicBlock | None] = {}
        self._next_seq = 0

    # -- register plumbing ---------------------------------------------

    @property
    def num_patches(self) -> int:
        return len(self.order)

    def branch_probability(self) -> float:
        return self._branch_probability

    def add_patch(self, patch: int, amplitudes: np.ndarray | str) -> None:
        if patch in self.order:
            raise SimulationError(f"patch {patch} is already live")
        vec = KET_STATES[amplitudes] if isinstance(amplitudes, str) else amplitudes
        self.order.append(patch)
        self.state = np.kron(self.state, np.asarray(vec, dtype=complex))

    def _position(self, patch: int) -> int:
        try:
            return self.order.index(patch)
        except ValueError:
            raise SimulationError(f"patch {patch} is not live") from None

    def _product_positions(self, product: PauliProduct) -> PauliProduct:
        return PauliProduct(
            tuple((self._position(patch), op) for patch, op in product.operators),
            product.sign,
        )

    def full_state(self) -> np.ndarray:
        return self.state

    # -- instruction semantics -------------------------------------------

    def run(self, stream) -> None:
        """Apply a stream, numbering instructions consecutively across calls."""
        for instruction in stream:
            self.apply(instruction, self._next_seq)
            self._next_seq += 1

    def apply(self, instruction: Lli, seq: int) -> None:
        if isinstance(instruction, ConditionalCorrection):
            cond = instruction.condition
            if cond.sequence_number not in self.outcomes:
                return  # condition never bound: correction is not applied
            if self.outcomes[cond.sequence_number] == cond.expected_bit:
                self.apply(instruction.body, seq)
            return
        if isinstance(instruction, Init):
            self.add_patch(instruction.patch, instruction.state.value)
        elif isinstance(instruction, RequestMagicState):
            self.add_patch(instruction.patch, "m")
            if self.auto_correct:
                self._magic_pending[instruction.patch] = None
        elif isinstance(instruction, TransversalPauli):
            u = GATE_MATRICES[instruction.op.value]
            self.state = apply_unitary(self.state, u, (self._position(instruction.patch),), self.num_patches)
        elif isinstance(instruction, TransversalHadamard):
            self.state = apply_unitary(self.state, GATE_MATRICES["H"], (self._position(instruction.patch),), self.num_patches)
        elif isinstance(instruction, SGate):
            self.state = apply_unitary(self.state, GATE_MATRICES["S"], (self._position(instruction.patch),), self.num_patches)
        elif isinstance(instruction, BoundaryRotate):
            pass  # patch deformation: logically the identity
        elif isinstance(instruction, MultiBodyMeasure):
            bit = self._measure_product(instruction.observable)
            self.outcomes[seq] = bit
            if self.auto_correct:
                self._note_rotation_mbm(instruction, bit)
        elif isinstance(instruction, MeasureSingle):
            bit = self._measure_single(instruction.patch, instruction.basis)
            self.outcomes[seq] = bit
            if self.auto_correct:
                self._finish_rotation_block(instruction.patch, bit)
        else:
            raise SimulationError(f"cannot simulate {instruction!r}")

    # -- measurements ---------------------------------------------------

    def _draw(self, p_plus: float) -> int:
        """Outcome r in {+1,-1} with P(+1) = p_plus; returns the bit."""
        if self._forced is not None:
            if not self._forced:
                raise SimulationError("forced outcome list exhausted")
            bit = self._forced.pop(0)
            probability = p_plus if bit == 0 else 1 - p_plus
            self._branch_probability *= probability
            return bit
        return 0 if self.rng.random() < p_plus else 1

    def _measure_product(self, observable: PauliProduct) -> int:
        positioned = self._product_positions(observable)
        projected = apply_pauli_product(self.state, positioned, self.num_patches)
        expectation = float(np.real(np.vdot(self.state, projected)))
        p_plus = min(max((1 + expectation) / 2, 0.0), 1.0)
        bit = self._draw(p_plus)
        r = 1 if bit == 0 else -1
        new_state = (self.state + r * projected) / 2
        norm = np.linalg.norm(new_state)
        if norm < 1e-12:
            raise SimulationError("projected onto a zero branch")
        self.state = new_state / norm
        return bit

    def _measure_single(self, patch: int, basis: Basis) -> int:
        position = self._position(patch)
        n = self.num_patches
        if basis is Basis.X:
            self.state = apply_unitary(self.state, GATE_MATRICES["H"], (position,), n)
        tensor = self.state.reshape((2,) * n)
        moved = np.moveaxis(tensor, position, 0)
        p_plus = float(np.sum(np.abs(moved[0]) ** 2))
        bit = self._draw(min(max(p_plus, 0.0), 1.0))
        kept = moved[bit]
        norm = np.linalg.norm(kept)
        if norm < 1e-12:
            raise SimulationError("projected onto a zero branch")
        self.state = np.ascontiguousarray(kept / norm).reshape(-1)
        self.order.pop(position)
        return bit

    # -- compressed-stream correction policy ------------------------------

    def _note_rotation_mbm(self, mbm: MultiBodyMeasure, bit: int) -> None:
        magic = [p for p, _ in mbm.operands if p in self._magic_pending]
        if not magic:
            return
        if len(magic) > 1:
            raise SimulationError("one multi-body measurement touches two magic states")
        patch = magic[0]
        if self._magic_pending[patch] is not None:
            raise SimulationError(f"magic patch {patch} measured twice")
        data = PauliProduct(
            tuple((p, op) for p, op in mbm.operands if p != patch), mbm.sign
        )
        self._magic_pending[patch] = _MagicBlock(data, bit)

    def _finish_rotation_block(self, patch: int, m2_bit: int) -> None:
        block = self._magic_pending.pop(patch, None)
        if block is None:
            return
        # The stream realized a +pi/8 rotation about the signed observable.
        # Residues: a pi/4 rotation when the merge outcome was 1, a Pauli
        # byproduct when the readout was 1.
        if block.m1_bit == 1:
            self._apply_rotation(block.observable, math.pi / 4)
        if m2_bit == 1:
            positioned = self._product_positions(block.observable)
            self.state = apply_pauli_product(self.state, positioned, self.num_patches)

    def _apply_rotation(self, observable: PauliProduct, theta: float) -> None:
        positioned = self._product_positions(observable)
        rotated = apply_pauli_product(self.state, positioned, self.num_patches)
        self.state = math.cos(theta) * self.state - 1j * math.sin(theta) * rotated


def enumerate_branches(
    instructions: list[Lli],
    initial_patches: list[tuple[int, np.ndarray | str]],
    auto_correct_rotations: bool = False,
    tolerance: float = 1e-12,
) -> list[DenseSimulator]:
    """Run every measurement branch; returns finished simulators.

    Branch probabilities multiply out along the way; branches whose
    probability underflows the tolerance are dropped.
    """
    results: list[DenseSimulator] = []
    pending: list[list[int]] = [[]]
    seen_prefixes: set[tuple[int, ...]] = set()
    while pending:
        forced = pending.pop()
        sim = DenseSimulator(auto_correct_rotations=auto_correct_rotations, forced_outcomes=list(forced))
        for patch, amplitudes in initial_patches:
            sim.add_patch(patch, amplitudes)
        sim._branch_probability = 1.0
        try:
            for seq, instruction in enumerate(instructions):
                sim.apply(instruction, seq)
        except SimulationError as error:
            message = str(error)
            if "forced outcome list exhausted" in message:
                # The branch tree is deeper here: fork on both outcomes.
                for bit in (0, 1):
                    extended = forced + [bit]
                    key = tuple(extended)
                    if key not in seen_prefixes:
                        seen_prefixes.add(key)
                        pending.append(extended)
                continue
            if "zero branch" in message:
                continue  # branch of probability zero
            raise
        if sim.branch_probability() > tolerance:
            results.append(sim)
    return results
