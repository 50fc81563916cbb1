"""Lazily tensored state-vector simulation of LLI streams.

The global state is a tensor product of group vectors.  Groups merge
only when a multi-body measurement spans them; initialization creates a
fresh singleton group and a single-patch readout removes the patch from
its group.  Operations confined to one group never touch another
group's amplitudes, which is what makes deep lattice-surgery runs with
many transient ancillae cheap to simulate.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .gates import GATE_MATRICES, KET_STATES, PAULI_MATRICES
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

RECOGNITION_TOLERANCE = 1e-9
DRIFT_TOLERANCE = 1e-6


class LazySimulationError(RuntimeError):
    pass


class BudgetExceeded(LazySimulationError):
    """A merge would exceed the configured amplitude budget."""


@dataclass
class StateGroup:
    """An entangled set of patches with its joint amplitude vector."""

    members: list[int]
    vector: np.ndarray

    @property
    def dimension(self) -> int:
        return self.vector.size

    def position(self, patch: int) -> int:
        return self.members.index(patch)

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))


def _apply_local(vector: np.ndarray, u: np.ndarray, position: int, size: int) -> np.ndarray:
    tensor = vector.reshape((2,) * size)
    moved = np.moveaxis(tensor, position, 0)
    shaped = moved.reshape(2, -1)
    out = (u @ shaped).reshape(moved.shape)
    return np.ascontiguousarray(np.moveaxis(out, 0, position)).reshape(-1)


def _apply_product(vector: np.ndarray, positioned: list[tuple[int, PauliOperator]], sign: int, size: int) -> np.ndarray:
    out = vector
    for position, op in positioned:
        out = _apply_local(out, PAULI_MATRICES[op.value], position, size)
    return out if sign == 1 else -out


def recognize_state(group: StateGroup) -> str | None:
    """Canonical tag of a singleton group's state, or None.

    Tags: 0, 1, +, -, Y+, Y-, m; matched up to global phase at the
    recognition tolerance.
    """
    if len(group.members) != 1:
        return None
    vector = group.vector
    for tag, reference in KET_STATES.items():
        fid = abs(np.vdot(reference, vector)) ** 2
        if fid >= 1 - RECOGNITION_TOLERANCE:
            return tag
    return None


@dataclass
class _MagicBlock:
    observable: PauliProduct
    m1_bit: int


class LazyState:
    """Simulator state: disjoint groups covering the live patches."""

    def __init__(
        self,
        seed: int | None = 0,
        rng: random.Random | None = None,
        budget: int = 1 << 22,
        auto_correct_rotations: bool = False,
        forced_outcomes: list[int] | None = None,
    ):
        self.rng = rng or random.Random(seed)
        self.budget = budget
        self.auto_correct = auto_correct_rotations
        self.groups: list[StateGroup] = []
        self.group_of: dict[int, StateGroup] = {}
        self.outcomes: dict[int, int] = {}
        self._forced = list(forced_outcomes) if forced_outcomes is not None else None
        self._branch_probability = 1.0
        self._magic_pending: dict[int, _MagicBlock | None] = {}
        self._next_seq = 0

    # -- structure ---------------------------------------------------------

    @property
    def live_patches(self) -> set[int]:
        return set(self.group_of)

    def branch_probability(self) -> float:
        return self._branch_probability

    def check_invariants(self) -> None:
        seen: set[int] = set()
        for group in self.groups:
            if abs(group.norm() - 1.0) > DRIFT_TOLERANCE:
                raise LazySimulationError(f"group norm drifted to {group.norm()}")
            if group.dimension != 1 << len(group.members):
                raise LazySimulationError("group dimension mismatch")
            overlap = seen.intersection(group.members)
            if overlap:
                raise LazySimulationError(f"patches {overlap} in two groups")
            seen.update(group.members)
        if seen != self.live_patches:
            raise LazySimulationError("group map out of sync")

    def add_patch(self, patch: int, amplitudes: np.ndarray | str) -> None:
        if patch in self.group_of:
            raise LazySimulationError(f"patch {patch} is already live")
        vec = KET_STATES[amplitudes] if isinstance(amplitudes, str) else np.asarray(amplitudes, dtype=complex)
        group = StateGroup([patch], vec.copy())
        self.groups.append(group)
        self.group_of[patch] = group

    def _group(self, patch: int) -> StateGroup:
        group = self.group_of.get(patch)
        if group is None:
            raise LazySimulationError(f"patch {patch} is not live")
        return group

    def _merge(self, patches: list[int]) -> StateGroup:
        involved: list[StateGroup] = []
        for patch in patches:
            group = self._group(patch)
            if group not in involved:
                involved.append(group)
        if len(involved) == 1:
            return involved[0]
        dimension = 1
        for group in involved:
            dimension *= group.dimension
        if dimension > self.budget:
            names = [group.members for group in involved]
            raise BudgetExceeded(
                f"merging groups {names} needs {dimension} amplitudes (budget {self.budget})"
            )
        members: list[int] = []
        vector = np.ones(1, dtype=complex)
        for group in involved:
            members.extend(group.members)
            vector = np.kron(vector, group.vector)
            self.groups.remove(group)
        merged = StateGroup(members, vector)
        self.groups.append(merged)
        for patch in members:
            self.group_of[patch] = merged
        return merged

    # -- instruction semantics ----------------------------------------------

    def run(self, stream) -> None:
        for instruction in stream:
            self.apply(instruction, self._next_seq)
            self._next_seq += 1

    def apply(self, instruction: Lli, seq: int) -> None:
        if isinstance(instruction, ConditionalCorrection):
            condition = instruction.condition
            if condition.sequence_number not in self.outcomes:
                return
            if self.outcomes[condition.sequence_number] == condition.expected_bit:
                self.apply(instruction.body, seq)
            return
        if isinstance(instruction, Init):
            self.add_patch(instruction.patch, instruction.state.value)
        elif isinstance(instruction, RequestMagicState):
            # Verified runs assume magic states are prepared ahead of time.
            self.add_patch(instruction.patch, "m")
            if self.auto_correct:
                self._magic_pending[instruction.patch] = None
        elif isinstance(instruction, TransversalPauli):
            self._local_unitary(instruction.patch, GATE_MATRICES[instruction.op.value])
        elif isinstance(instruction, TransversalHadamard):
            self._local_unitary(instruction.patch, GATE_MATRICES["H"])
        elif isinstance(instruction, SGate):
            self._local_unitary(instruction.patch, GATE_MATRICES["S"])
        elif isinstance(instruction, BoundaryRotate):
            pass  # logically the identity
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
            raise LazySimulationError(f"cannot simulate {instruction!r}")

    def _local_unitary(self, patch: int, u: np.ndarray) -> None:
        group = self._group(patch)
        group.vector = _apply_local(group.vector, u, group.position(patch), len(group.members))

    def _draw(self, p_plus: float) -> int:
        if self._forced is not None:
            if not self._forced:
                raise LazySimulationError("forced outcome list exhausted")
            bit = self._forced.pop(0)
            self._branch_probability *= p_plus if bit == 0 else 1 - p_plus
            return bit
        return 0 if self.rng.random() < p_plus else 1

    def _measure_product(self, observable: PauliProduct) -> int:
        group = self._merge([patch for patch, _ in observable.operators])
        size = len(group.members)
        positioned = [(group.position(patch), op) for patch, op in observable.operators]
        projected = _apply_product(group.vector, positioned, observable.sign, size)
        expectation = float(np.real(np.vdot(group.vector, projected)))
        p_plus = min(max((1 + expectation) / 2, 0.0), 1.0)
        bit = self._draw(p_plus)
        r = 1 if bit == 0 else -1
        new_vector = (group.vector + r * projected) / 2
        norm = np.linalg.norm(new_vector)
        if norm < 1e-12:
            raise LazySimulationError("projected onto a zero branch")
        group.vector = new_vector / norm
        return bit

    def _measure_single(self, patch: int, basis: Basis) -> int:
        group = self._group(patch)
        position = group.position(patch)
        size = len(group.members)
        if basis is Basis.X:
            group.vector = _apply_local(group.vector, GATE_MATRICES["H"], position, size)
        tensor = group.vector.reshape((2,) * size)
        moved = np.moveaxis(tensor, position, 0)
        p_plus = float(np.sum(np.abs(moved[0]) ** 2))
        bit = self._draw(min(max(p_plus, 0.0), 1.0))
        kept = moved[bit]
        norm = np.linalg.norm(kept)
        if norm < 1e-12:
            raise LazySimulationError("projected onto a zero branch")
        # The measured patch factors out; it leaves its group entirely.
        group.members.pop(position)
        del self.group_of[patch]
        if group.members:
            group.vector = np.ascontiguousarray(kept / norm).reshape(-1)
        else:
            self.groups.remove(group)
        return bit

    # -- compressed-stream correction policy --------------------------------

    def _note_rotation_mbm(self, mbm: MultiBodyMeasure, bit: int) -> None:
        magic = [p for p, _ in mbm.operands if p in self._magic_pending]
        if not magic:
            return
        if len(magic) > 1:
            raise LazySimulationError("one multi-body measurement touches two magic states")
        patch = magic[0]
        if self._magic_pending[patch] is not None:
            raise LazySimulationError(f"magic patch {patch} measured twice")
        data = PauliProduct(tuple((p, op) for p, op in mbm.operands if p != patch), mbm.sign)
        self._magic_pending[patch] = _MagicBlock(data, bit)

    def _finish_rotation_block(self, patch: int, m2_bit: int) -> None:
        block = self._magic_pending.pop(patch, None)
        if block is None:
            return
        if block.m1_bit == 1:
            self._apply_rotation(block.observable, math.pi / 4)
        if m2_bit == 1:
            group = self._merge([p for p, _ in block.observable.operators])
            positioned = [(group.position(p), op) for p, op in block.observable.operators]
            group.vector = _apply_product(group.vector, positioned, block.observable.sign, len(group.members))

    def _apply_rotation(self, observable: PauliProduct, theta: float) -> None:
        group = self._merge([p for p, _ in observable.operators])
        positioned = [(group.position(p), op) for p, op in observable.operators]
        rotated = _apply_product(group.vector, positioned, observable.sign, len(group.members))
        group.vector = math.cos(theta) * group.vector - 1j * math.sin(theta) * rotated

    # -- inspection -----------------------------------------------------------

    def full_state(self, patch_order: list[int]) -> np.ndarray:
        """Tensor the groups out to a full register in the given patch order.

        The result equals the physical state up to a global phase (one
        phase per group).
        """
        if set(patch_order) != self.live_patches:
            raise LazySimulationError("patch_order must cover exactly the live patches")
        vector = np.ones(1, dtype=complex)
        order: list[int] = []
        for group in self.groups:
            vector = np.kron(vector, group.vector)
            order.extend(group.members)
        # Permute from group order to the requested order.
        n = len(order)
        tensor = vector.reshape((2,) * n) if n else vector.reshape(())
        positions = [order.index(p) for p in patch_order]
        tensor = np.transpose(tensor, positions) if n else tensor
        return np.ascontiguousarray(tensor).reshape(-1)


@dataclass
class Snapshot:
    """Per-step view of the partition: group members and recognized tags."""

    step: int
    groups: list[dict]
    outcomes: dict[int, int]

    def to_json_dict(self) -> dict:
        return {"step": self.step, "groups": self.groups, "outcomes": dict(self.outcomes)}


def verified_run(
    instructions,
    seed: int = 0,
    snapshot_every: int = 1,
    include_amplitudes: bool = False,
    budget: int = 1 << 22,
    auto_correct_rotations: bool = False,
    data_patches: int = 0,
) -> tuple[LazyState, list[Snapshot]]:
    """Replay a stream, emitting partition snapshots as it goes.

    ``data_patches`` pre-seeds patches 0..n-1 in |0> (the circuit input
    register); everything else must be created by the stream itself.
    """
    state = LazyState(seed=seed, budget=budget, auto_correct_rotations=auto_correct_rotations)
    for patch in range(data_patches):
        state.add_patch(patch, "0")
    snapshots: list[Snapshot] = []
    step = 0
    for instruction in instructions:
        state.apply(instruction, step)
        step += 1
        if snapshot_every and step % snapshot_every == 0:
            snapshots.append(_snapshot(state, step, include_amplitudes))
        state.check_invariants()
    if not snapshot_every or step % snapshot_every:
        snapshots.append(_snapshot(state, step, include_amplitudes))
    return state, snapshots


def _snapshot(state: LazyState, step: int, include_amplitudes: bool) -> Snapshot:
    groups = []
    for group in state.groups:
        entry: dict = {"members": list(group.members)}
        tag = recognize_state(group)
        if tag is not None:
            entry["tag"] = tag
        if include_amplitudes:
            entry["amplitudes"] = [[float(a.real), float(a.imag)] for a in group.vector]
        groups.append(entry)
    return Snapshot(step, groups, dict(state.outcomes))
