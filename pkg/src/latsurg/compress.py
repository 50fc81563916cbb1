"""Pauli rotation compression of Clifford+T letter sequences.

A letter string over {H, S, T, X, Z} (execution order) is regrouped
greedily, left to right: maximal runs of {S, T} merge into one Z-axis
rotation with the summed angle (S = Z(pi/4), T = Z(pi/8)); a run
bracketed as H...H becomes one X-axis rotation; anything else is kept as
a residual Clifford letter.  The product of the emitted blocks equals
the product of the input letters up to global phase.
"""

from __future__ import annotations

from dataclasses import dataclass

from .angles import ExactAngle
from .pauli import PauliOperator, PauliProduct, PauliRotation


@dataclass(frozen=True)
class CliffordRotation:
    """A Pauli rotation by +/-pi/4 or +/-pi/2."""

    rotation: PauliRotation

    def __post_init__(self) -> None:
        if self.rotation.angle.quarters() is None or self.rotation.angle.is_zero:
            raise ValueError("Clifford rotation angle must be a nonzero multiple of pi/4")


@dataclass(frozen=True)
class NonCliffordRotation:
    """A Pauli rotation in the pi/8 family or below pi/4; needs magic states."""

    rotation: PauliRotation

    def __post_init__(self) -> None:
        angle = self.rotation.angle
        eighths = angle.eighths()
        if not (eighths is not None and eighths % 2 == 1) and not angle.magnitude_lt_quarter_pi:
            raise ValueError(f"not a non-Clifford rotation angle: {angle}")
        if angle.is_zero:
            raise ValueError("zero angle is not a rotation")


@dataclass(frozen=True)
class ResidualClifford:
    """A leftover Clifford letter that did not join a rotation run."""

    gate: str
    qubit: int

    def __post_init__(self) -> None:
        if self.gate not in ("H", "X", "Z", "S"):
            raise ValueError(f"residual Clifford must be H, X, Z or S, got {self.gate!r}")


@dataclass(frozen=True)
class PauliMeasurement:
    """A terminal Pauli-product measurement (Litinski-transform circuits)."""

    observable: PauliProduct


RotationBlock = CliffordRotation | NonCliffordRotation | ResidualClifford | PauliMeasurement

_LETTER_EIGHTHS = {"S": 2, "T": 1}  # S = Z(pi/4), T = Z(pi/8)


def classify_rotation(rotation: PauliRotation) -> RotationBlock | None:
    """Wrap a rotation in its angle-class block; None if it is a global phase."""
    angle = rotation.angle
    if rotation.is_identity:
        return None
    eighths = angle.eighths()
    if eighths is not None and eighths % 8 == 0:
        # Rotation by pi: the unitary is -1, a pure global phase.
        return None
    if eighths is not None and eighths % 2 == 0:
        return CliffordRotation(rotation)
    return NonCliffordRotation(rotation)


def compress_to_pauli_rotations(letters: str, qubit: int = 0) -> list[RotationBlock]:
    """Greedy left-to-right regrouping of a letter string into rotation blocks."""
    blocks: list[RotationBlock] = []
    i = 0
    n = len(letters)
    while i < n:
        letter = letters[i]
        if letter in _LETTER_EIGHTHS:
            run, i = _consume_run(letters, i)
            _append_rotation(blocks, qubit, PauliOperator.Z, run)
        elif letter == "H" and i + 1 < n and letters[i + 1] in _LETTER_EIGHTHS:
            run, j = _consume_run(letters, i + 1)
            if j < n and letters[j] == "H":
                _append_rotation(blocks, qubit, PauliOperator.X, run)
                i = j + 1
            else:
                blocks.append(ResidualClifford("H", qubit))
                i += 1
        else:
            if letter not in ("H", "X", "Z", "S"):
                raise ValueError(f"unknown letter {letter!r}")
            blocks.append(ResidualClifford(letter, qubit))
            i += 1
    return blocks


def _consume_run(letters: str, start: int) -> tuple[int, int]:
    """Sum the pi/8 multiples of the maximal S/T run starting at ``start``."""
    eighths = 0
    i = start
    while i < len(letters) and letters[i] in _LETTER_EIGHTHS:
        eighths += _LETTER_EIGHTHS[letters[i]]
        i += 1
    return eighths, i


def _append_rotation(blocks: list[RotationBlock], qubit: int, op: PauliOperator, eighths: int) -> None:
    rotation = PauliRotation.on(qubit, op, ExactAngle(eighths, 3))
    block = classify_rotation(rotation)
    if block is not None:
        blocks.append(block)
