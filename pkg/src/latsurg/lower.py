"""Lowering of gates and Pauli rotations to logical lattice instructions.

Two modes:

* ``direct`` applies Clifford+T letters one by one: H, X, Z transversally
  (H restores its boundary orientation with a follow-up deformation), S
  with a twist, and T as a pi/8 rotation consuming a magic state, with
  the outcome-conditioned Clifford/Pauli corrections emitted inline.
  Every rotation carries the same corrective terms, so the stream is
  self-contained.

* ``compressed`` first regroups letter sequences into Pauli rotations.
  Each non-Clifford rotation then costs only three instructions
  (RMS + MBM + MEAS): deterministic Clifford remainders are folded into a
  per-qubit pending-Clifford frame that conjugates later operations and
  is flushed as letters once at the end, while the outcome-conditioned
  corrections are delegated to the classically-controlled consumer (see
  docs/lli_format.md for the correction policy the consumer must apply).

The correction wiring in every template is pinned by the all-branches
channel oracle in the tests rather than transcribed from a drawing.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable

from .angles import ExactAngle
from .approx import Approximator, SearchBackend
from .compress import (
    CliffordRotation,
    NonCliffordRotation,
    ResidualClifford,
    compress_to_pauli_rotations,
)
from .lli import (
    Basis,
    ConditionalCorrection,
    Init,
    InitState,
    Lli,
    MeasureSingle,
    MultiBodyMeasure,
    OutcomeReference,
    RequestMagicState,
    SGate,
    TransversalHadamard,
    TransversalPauli,
    BoundaryRotate,
)
from .pauli import PauliOperator, PauliProduct, PauliRotation
from .qasm import Circuit, Gate, GateKind


class LoweringError(ValueError):
    pass


class UnsupportedBlock(LoweringError):
    """A rotation angle outside the pi/8, pi/4, pi/2 families reached lowering."""


def z_rotation_letters(angle: ExactAngle, approximator: Approximator, epsilon: float) -> str:
    """Letters approximating exp(-i*angle*Z) for an arbitrary exact angle.

    Quarters of pi are peeled off exactly (they have exact letter forms)
    so the backend only ever approximates a magnitude below pi/4.
    """
    from .approx import exact_rotation_letters

    exact = exact_rotation_letters(angle)
    if exact is not None:
        return exact
    quarter = ExactAngle(1, 2)
    quarters = 0
    while not angle.magnitude_lt_quarter_pi:
        if angle.numerator > 0:
            angle = angle - quarter
            quarters += 1
        else:
            angle = angle + quarter
            quarters -= 1
    prefix = exact_rotation_letters(ExactAngle(quarters, 2)) if quarters else ""
    assert prefix is not None
    return prefix + approximator.letters_for(angle, epsilon)


@dataclass
class LoweringConfig:
    mode: str = "direct"                  # "direct" | "compressed"
    epsilon: float = 1e-3
    boundary_restore: bool = True         # BR after every TH
    pi4_via_protocol: bool = False        # force the ancilla protocol for 1-qubit pi/4


# ---------------------------------------------------------------------------
# single-qubit Clifford frames (compressed mode)
# ---------------------------------------------------------------------------

# conj_g(O) = g^dag O g for the letter generators.
_LETTER_CONJ: dict[str, dict[str, tuple[int, str]]] = {
    "H": {"X": (1, "Z"), "Y": (-1, "Y"), "Z": (1, "X")},
    "S": {"X": (-1, "Y"), "Y": (1, "X"), "Z": (1, "Z")},
    "Sdg": {"X": (1, "Y"), "Y": (-1, "X"), "Z": (1, "Z")},
    "X": {"X": (1, "X"), "Y": (-1, "Y"), "Z": (-1, "Z")},
    "Z": {"X": (-1, "X"), "Y": (-1, "Y"), "Z": (1, "Z")},
}

# Single-qubit Pauli multiplication as (phase k with i**k, op).
_MUL1: dict[tuple[str, str], tuple[int, str]] = {
    ("X", "X"): (0, "I"), ("Y", "Y"): (0, "I"), ("Z", "Z"): (0, "I"),
    ("X", "Y"): (1, "Z"), ("Y", "X"): (3, "Z"),
    ("Y", "Z"): (1, "X"), ("Z", "Y"): (3, "X"),
    ("Z", "X"): (1, "Y"), ("X", "Z"): (3, "Y"),
}


@dataclass
class CliffordFrame:
    """A pending single-qubit Clifford C, stored by its conjugation action.

    ``image_x`` and ``image_z`` are C^dag X C and C^dag Z C as
    (sign, pauli) pairs; they identify C up to global phase.
    """

    image_x: tuple[int, str] = (1, "X")
    image_z: tuple[int, str] = (1, "Z")

    @property
    def is_identity(self) -> bool:
        return self.image_x == (1, "X") and self.image_z == (1, "Z")

    def conjugate(self, sign: int, op: str) -> tuple[int, str]:
        """C^dag (sign*op) C for op in {X, Y, Z}."""
        if op == "X":
            s, o = self.image_x
        elif op == "Z":
            s, o = self.image_z
        else:
            # Y = i X Z, so C^dag Y C = i (C^dag X C)(C^dag Z C).
            sx, ox = self.image_x
            sz, oz = self.image_z
            k, o = _MUL1[(ox, oz)]
            # i * i**k is real (+/-1) because the images anticommute.
            s = sx * sz * (1 if (k + 1) % 4 == 0 else -1)
        return sign * s, o

    def _compose(self, table: dict[str, tuple[int, str]]) -> None:
        # C <- g . C, so the new action is conj_C(conj_g(.)).
        new_x = self.conjugate(*table["X"])
        new_z = self.conjugate(*table["Z"])
        self.image_x, self.image_z = new_x, new_z

    def fold_letter(self, letter: str) -> None:
        self._compose(_LETTER_CONJ[letter])

    def fold_quarter_rotation(self, op: str, positive: bool) -> None:
        """Fold a rotation exp(-i (+/-pi/4) P) into the frame."""
        table: dict[str, tuple[int, str]] = {}
        for target in ("X", "Y", "Z"):
            if target == op:
                table[target] = (1, target)
            else:
                k, product = _MUL1[(op, target)]
                # g^dag O g = e^{+/- i pi/2 P} O = (+/- i) P O for anticommuting O.
                sign = 1 if (k + 1) % 4 == 0 else -1
                table[target] = (sign if positive else -sign, product)
        self._compose(table)

    def fold_half_rotation(self, op: str) -> None:
        """Fold exp(-i (pi/2) P), i.e. the Pauli P itself, into the frame."""
        table = {
            target: ((1, target) if target == op else (-1, target))
            for target in ("X", "Y", "Z")
        }
        self._compose(table)

    def key(self) -> tuple:
        return (self.image_x, self.image_z)


def _frame_words() -> dict[tuple, str]:
    """Minimum-LLI-cost letter word for each of the 24 frame classes.

    Letter costs reflect their lowering: H costs 2 instructions (TH + BR),
    the others 1.
    """
    costs = {"H": 2, "S": 1, "X": 1, "Z": 1}
    start = CliffordFrame()
    best: dict[tuple, tuple[int, str]] = {start.key(): (0, "")}
    heap: list[tuple[int, str, tuple]] = [(0, "", start.key())]
    frames: dict[tuple, CliffordFrame] = {start.key(): start}
    while heap:
        cost, word, key = heapq.heappop(heap)
        if best[key][0] < cost:
            continue
        frame = frames[key]
        for letter, letter_cost in costs.items():
            successor = CliffordFrame(frame.image_x, frame.image_z)
            successor.fold_letter(letter)
            new_key = successor.key()
            candidate = (cost + letter_cost, word + letter)
            if new_key not in best or candidate < best[new_key]:
                best[new_key] = candidate
                frames[new_key] = successor
                heapq.heappush(heap, (candidate[0], candidate[1], new_key))
    return {key: word for key, (cost, word) in best.items()}


_FRAME_WORDS: dict[tuple, str] | None = None


def frame_letters(frame: CliffordFrame) -> str:
    """Letters (execution order) whose product realizes the pending Clifford."""
    global _FRAME_WORDS
    if _FRAME_WORDS is None:
        _FRAME_WORDS = _frame_words()
    return _FRAME_WORDS[frame.key()]


# ---------------------------------------------------------------------------
# the lowerer
# ---------------------------------------------------------------------------

class Lowerer:
    """Streams LLI for gates and rotations through a sink callback."""

    def __init__(
        self,
        num_qubits: int,
        sink: Callable[[Lli], None],
        config: LoweringConfig | None = None,
        approximator: Approximator | None = None,
    ):
        self.config = config or LoweringConfig()
        if self.config.mode not in ("direct", "compressed"):
            raise LoweringError(f"unknown mode {self.config.mode!r}")
        self._sink = sink
        self._seq = 0
        self._next_patch = num_qubits
        self._approximator = approximator or Approximator(SearchBackend())
        self._frames: dict[int, CliffordFrame] = {}
        self._measured = False

    # -- plumbing ------------------------------------------------------

    @property
    def compressed(self) -> bool:
        return self.config.mode == "compressed"

    def emit(self, body: Lli, conds: tuple[OutcomeReference, ...] = ()) -> int:
        instruction: Lli = body
        for cond in reversed(conds):
            instruction = ConditionalCorrection(cond, instruction)
        self._sink(instruction)
        seq = self._seq
        self._seq += 1
        return seq

    def new_patch(self) -> int:
        patch = self._next_patch
        self._next_patch += 1
        return patch

    def _frame(self, qubit: int) -> CliffordFrame:
        return self._frames.setdefault(qubit, CliffordFrame())

    def _conjugated(self, axis: PauliProduct) -> PauliProduct:
        """Axis rewritten through the pending frames (compressed mode)."""
        if not self.compressed:
            return axis
        sign = axis.sign
        ops = {}
        for qubit, op in axis.operators:
            s, o = self._frame(qubit).conjugate(1, op.value)
            sign *= s
            ops[qubit] = PauliOperator(o)
        return PauliProduct.from_dict(ops, sign)

    # -- letters ---------------------------------------------------------

    def letter(self, qubit: int, letter: str, conds: tuple[OutcomeReference, ...] = ()) -> None:
        """One Clifford+T letter; Cliffords fold into the frame when compressed."""
        if letter == "T":
            self.rotation(PauliRotation.on(qubit, "Z", ExactAngle(1, 3)), conds)
            return
        if self.compressed and not conds:
            self._frame(qubit).fold_letter(letter)
            return
        self._emit_letter(qubit, letter, conds)

    def _emit_letter(self, qubit: int, letter: str, conds: tuple[OutcomeReference, ...] = ()) -> None:
        if letter == "H":
            self.emit(TransversalHadamard(qubit), conds)
            if self.config.boundary_restore:
                self.emit(BoundaryRotate(qubit), conds)
        elif letter == "S":
            self.emit(SGate(qubit), conds)
        elif letter == "Sdg":
            self.emit(TransversalPauli(qubit, PauliOperator.Z), conds)
            self.emit(SGate(qubit), conds)
        elif letter in ("X", "Z"):
            self.emit(TransversalPauli(qubit, PauliOperator(letter)), conds)
        else:
            raise LoweringError(f"unknown letter {letter!r}")

    def _emit_pauli(self, axis: PauliProduct, conds: tuple[OutcomeReference, ...]) -> None:
        """Transversal Paulis realizing axis up to (branch-global) phase."""
        for qubit, op in axis.operators:
            if op is PauliOperator.Y:
                self.emit(TransversalPauli(qubit, PauliOperator.X), conds)
                self.emit(TransversalPauli(qubit, PauliOperator.Z), conds)
            else:
                self.emit(TransversalPauli(qubit, op), conds)

    # -- rotation templates -----------------------------------------------

    def _pi8(self, axis: PauliProduct, conds: tuple[OutcomeReference, ...]) -> None:
        """Rotation by +pi/8 about the signed axis, consuming a magic state.

        Protocol: measure axis (x) Z on a bound magic state (outcome m1),
        then measure the magic patch in X (outcome m2).  The branch
        algebra leaves a pi/4 rotation about the axis when m1 = 1 and a
        Pauli byproduct when m2 = 1.  Direct mode emits both corrections
        inline; compressed mode leaves them to the stream consumer's
        correction policy.
        """
        magic = self.new_patch()
        self.emit(RequestMagicState(magic), conds)
        operands = axis.operators + ((magic, PauliOperator.Z),)
        m1 = self.emit(MultiBodyMeasure(operands, axis.sign), conds)
        m2 = self.emit(MeasureSingle(magic, Basis.X), conds)
        if not self.compressed:
            self._pi4(axis, conds + (OutcomeReference(m1, 1),))
            self._emit_pauli(axis, conds + (OutcomeReference(m2, 1),))

    def _pi4(self, axis: PauliProduct, conds: tuple[OutcomeReference, ...]) -> None:
        """Rotation by +pi/4 about the signed axis."""
        if axis.weight == 1 and not self.config.pi4_via_protocol:
            qubit, op = axis.operators[0]
            self._pi4_letters(qubit, op, axis.sign, conds)
            return
        # Ancilla protocol: consume a twist-prepared |Y+> eigenstate.
        ancilla = self.new_patch()
        self.emit(Init(ancilla, InitState.PLUS), conds)
        self.emit(SGate(ancilla), conds)
        operands = axis.operators + ((ancilla, PauliOperator.Z),)
        m1 = self.emit(MultiBodyMeasure(operands, axis.sign), conds)
        m2 = self.emit(MeasureSingle(ancilla, Basis.X), conds)
        # Pauli byproduct exactly when the two outcomes disagree with +1.
        self._emit_pauli(axis, conds + (OutcomeReference(m1, 1),))
        self._emit_pauli(axis, conds + (OutcomeReference(m2, 1),))

    def _pi4_letters(self, qubit: int, op: PauliOperator, sign: int, conds: tuple[OutcomeReference, ...]) -> None:
        """Letter forms: Z(pi/4) = S, X(pi/4) = H S H, Y(pi/4) = Sdg-conjugated."""
        s_letters = ["S"] if sign > 0 else ["Sdg"]
        if op is PauliOperator.Z:
            word = s_letters
        elif op is PauliOperator.X:
            word = ["H", *s_letters, "H"]
        else:
            word = ["Sdg", "H", *s_letters, "H", "S"]
        for letter in word:
            self._emit_letter(qubit, letter, conds)

    def rotation(self, rotation: PauliRotation, conds: tuple[OutcomeReference, ...] = ()) -> None:
        """Lower a pi/8-family rotation; approximate anything finer first."""
        if rotation.is_identity:
            return
        eighths = rotation.angle.eighths()
        if eighths is None:
            self._approximated_rotation(rotation, conds)
            return
        if eighths % 8 == 0:
            return  # rotation by pi: global phase
        if eighths % 2 == 0:
            self._clifford_quarters(rotation.axis, eighths // 2, conds)
            return
        # Split off the non-Clifford +/-pi/8 part in original coordinates,
        # then conjugate only the emitted piece through pending frames.
        if abs(eighths) > 4:
            eighths -= 8 if eighths > 0 else -8  # peel off a global pi
        sign = 1 if eighths > 0 else -1
        signed_axis = rotation.axis if sign > 0 else rotation.axis.negate()
        self._pi8(self._conjugated(signed_axis) if not conds else signed_axis, conds)
        remainder = (eighths - sign) // 2
        if remainder:
            self._clifford_quarters(rotation.axis, remainder, conds)

    def _clifford_quarters(
        self,
        axis: PauliProduct,
        quarters: int,
        conds: tuple[OutcomeReference, ...],
    ) -> None:
        """Rotation by quarters*pi/4 about the signed axis (a Clifford),
        given in original (unconjugated) coordinates."""
        if axis.sign == -1:
            axis, quarters = axis.negate(), -quarters
        quarters %= 4  # pi periodicity up to global phase
        if quarters == 0:
            return
        if quarters == 3:
            quarters = -1
        if self.compressed and not conds and axis.weight == 1:
            qubit, op = axis.operators[0]
            if quarters == 2:
                self._frame(qubit).fold_half_rotation(op.value)
            else:
                self._frame(qubit).fold_quarter_rotation(op.value, quarters > 0)
            return
        if not conds:
            axis = self._conjugated(axis)
            if axis.sign == -1:
                axis, quarters = axis.negate(), -quarters
        if quarters == 2:
            self._emit_pauli(axis, conds)
        else:
            self._pi4(axis if quarters > 0 else axis.negate(), conds)

    def _approximated_rotation(self, rotation: PauliRotation, conds: tuple[OutcomeReference, ...]) -> None:
        if rotation.axis.weight != 1:
            raise UnsupportedBlock(
                f"cannot approximate a multi-qubit rotation by {rotation.angle}"
            )
        qubit, op = rotation.axis.operators[0]
        letters = z_rotation_letters(rotation.angle, self._approximator, self.config.epsilon)
        if op is PauliOperator.X:
            letters = "H" + letters + "H" if letters else ""
        elif op is PauliOperator.Y:
            raise UnsupportedBlock("approximated Y-axis rotations are not generated")
        if not self.compressed or conds:
            for letter in letters:
                self.letter(qubit, letter, conds)
            return
        for block in compress_to_pauli_rotations(letters, qubit):
            if isinstance(block, ResidualClifford):
                self._frame(qubit).fold_letter(block.gate)
            elif isinstance(block, (CliffordRotation, NonCliffordRotation)):
                self.rotation(block.rotation, conds)
            else:
                raise LoweringError("unexpected block from compression")

    # -- gates -------------------------------------------------------------

    def gate(self, gate: Gate) -> None:
        kind = gate.kind
        if kind in (GateKind.H, GateKind.X, GateKind.Z, GateKind.S):
            self.letter(gate.qubits[0], kind.value.upper())
        elif kind is GateKind.SDG:
            if self.compressed:
                self._frame(gate.qubits[0]).fold_letter("Sdg")
            else:
                self._emit_letter(gate.qubits[0], "Sdg")
        elif kind is GateKind.T:
            self.rotation(PauliRotation.on(gate.qubits[0], "Z", ExactAngle(1, 3)))
        elif kind is GateKind.TDG:
            self.rotation(PauliRotation.on(gate.qubits[0], "Z", ExactAngle(-1, 3)))
        elif kind is GateKind.RZ:
            assert gate.angle is not None
            self.rotation(PauliRotation.on(gate.qubits[0], "Z", gate.angle.halve()))
        elif kind is GateKind.RX:
            assert gate.angle is not None
            self.rotation(PauliRotation.on(gate.qubits[0], "X", gate.angle.halve()))
        elif kind is GateKind.CX:
            self.cnot(gate.qubits[0], gate.qubits[1])
        else:
            raise LoweringError(f"gate {kind.value} must be decomposed before lowering")

    def cnot(self, control: int, target: int, conds: tuple[OutcomeReference, ...] = ()) -> None:
        """Ancilla-mediated CNOT: |+> ancilla, ZZ then XX merges, Z readout.

        Corrections (pinned by the all-branches oracle): X on the target
        when the ZZ outcome or the ancilla readout is 1, Z on the control
        when the XX outcome is 1.
        """
        obs_c = self._conjugated(PauliProduct.single(control, PauliOperator.Z)) if not conds \
            else PauliProduct.single(control, PauliOperator.Z)
        obs_t = self._conjugated(PauliProduct.single(target, PauliOperator.X)) if not conds \
            else PauliProduct.single(target, PauliOperator.X)
        ancilla = self.new_patch()
        self.emit(Init(ancilla, InitState.PLUS), conds)
        m1 = self.emit(
            MultiBodyMeasure(obs_c.operators + ((ancilla, PauliOperator.Z),), obs_c.sign),
            conds,
        )
        m2 = self.emit(
            MultiBodyMeasure(((ancilla, PauliOperator.X),) + obs_t.operators, obs_t.sign),
            conds,
        )
        m3 = self.emit(MeasureSingle(ancilla, Basis.Z), conds)
        self._emit_pauli(obs_t, conds + (OutcomeReference(m1, 1),))
        self._emit_pauli(obs_t, conds + (OutcomeReference(m3, 1),))
        self._emit_pauli(obs_c, conds + (OutcomeReference(m2, 1),))

    def measure(self, observable: PauliProduct) -> int:
        """Terminal measurement of a signed Pauli product; flushes frames."""
        self.flush()
        self._measured = True
        if observable.weight >= 2:
            return self.emit(MultiBodyMeasure.of(observable))
        if observable.weight == 0:
            raise LoweringError("cannot measure the identity")
        qubit, op = observable.operators[0]
        # Basis changes for Y and for negative observables: conjugate the
        # state so a plain X/Z readout reports the intended outcome bit.
        if op is PauliOperator.Y:
            # Measure Y via S^dag then X readout.
            if observable.sign == -1:
                self.emit(TransversalPauli(qubit, PauliOperator.Z))
            self._emit_letter(qubit, "Sdg")
            return self.emit(MeasureSingle(qubit, Basis.X))
        if observable.sign == -1:
            flip = PauliOperator.X if op is PauliOperator.Z else PauliOperator.Z
            self.emit(TransversalPauli(qubit, flip))
        return self.emit(MeasureSingle(qubit, Basis(op.value)))

    def flush(self) -> None:
        """Emit pending Clifford frames as letters (compressed mode)."""
        for qubit in sorted(self._frames):
            frame = self._frames[qubit]
            if frame.is_identity:
                continue
            for letter in frame_letters(frame):
                self._emit_letter(qubit, letter)
            self._frames[qubit] = CliffordFrame()
