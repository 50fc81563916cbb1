"""Signed multi-qubit Pauli products and Pauli-product rotations.

A ``PauliProduct`` is a tensor product of single-qubit Pauli operators with
an overall sign of +1 or -1.  Products of anticommuting factors pick up a
transient +/-i phase; multiplication resolves it immediately (by folding in
a factor of -i) so that stored products are always Hermitian.

A ``PauliRotation`` with axis P and angle theta denotes exp(-i * theta * P)
= cos(theta) I - i sin(theta) P.  Under this convention the T gate is the
Z(pi/8) rotation and S is Z(pi/4).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .angles import ExactAngle


class PauliOperator(enum.Enum):
    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"

    def __str__(self) -> str:
        return self.value


# Single-qubit products a*b -> (phase exponent k with phase i**k, result).
# E.g. X*Y = iZ, Y*X = -iZ.
_SINGLE_MUL: dict[tuple[str, str], tuple[int, str]] = {
    ("I", "I"): (0, "I"), ("I", "X"): (0, "X"), ("I", "Y"): (0, "Y"), ("I", "Z"): (0, "Z"),
    ("X", "I"): (0, "X"), ("Y", "I"): (0, "Y"), ("Z", "I"): (0, "Z"),
    ("X", "X"): (0, "I"), ("Y", "Y"): (0, "I"), ("Z", "Z"): (0, "I"),
    ("X", "Y"): (1, "Z"), ("Y", "X"): (3, "Z"),
    ("Y", "Z"): (1, "X"), ("Z", "Y"): (3, "X"),
    ("Z", "X"): (1, "Y"), ("X", "Z"): (3, "Y"),
}


@dataclass(frozen=True)
class PauliProduct:
    """Signed tensor product of non-identity Paulis on named qubits.

    ``operators`` maps qubit index -> operator, stored as a sorted tuple of
    pairs with identities omitted.  The empty product with sign +1 is the
    group identity.
    """

    operators: tuple[tuple[int, PauliOperator], ...] = ()
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        cleaned = tuple(
            sorted(
                ((q, op) for q, op in self.operators if op is not PauliOperator.I),
                key=lambda item: item[0],
            )
        )
        qubits = [q for q, _ in cleaned]
        if len(set(qubits)) != len(qubits):
            raise ValueError("duplicate qubit in Pauli product")
        if any(q < 0 for q in qubits):
            raise ValueError("qubit indices must be non-negative")
        object.__setattr__(self, "operators", cleaned)

    @classmethod
    def single(cls, qubit: int, op: PauliOperator | str, sign: int = 1) -> PauliProduct:
        if isinstance(op, str):
            op = PauliOperator(op)
        return cls(((qubit, op),), sign)

    @classmethod
    def from_dict(cls, ops: dict[int, PauliOperator | str], sign: int = 1) -> PauliProduct:
        items = tuple(
            (q, PauliOperator(op) if isinstance(op, str) else op) for q, op in ops.items()
        )
        return cls(items, sign)

    @classmethod
    def identity(cls) -> PauliProduct:
        return cls()

    # -- structure ---------------------------------------------------------

    def operator_on(self, qubit: int) -> PauliOperator:
        for q, op in self.operators:
            if q == qubit:
                return op
        return PauliOperator.I

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.operators)

    @property
    def weight(self) -> int:
        return len(self.operators)

    @property
    def is_identity(self) -> bool:
        return not self.operators

    def commutes_with(self, other: PauliProduct) -> bool:
        """True when the two products commute (signs are irrelevant)."""
        mine = dict(self.operators)
        clashes = sum(
            1
            for q, op in other.operators
            if q in mine and mine[q] is not op
        )
        return clashes % 2 == 0

    def negate(self) -> PauliProduct:
        return PauliProduct(self.operators, -self.sign)

    # -- algebra -----------------------------------------------------------

    def mul_with_phase(self, other: PauliProduct) -> tuple[PauliProduct, int]:
        """Raw group product: returns (result, k) with self*other = i**k * result.

        The result carries the product of the two input signs; the residual
        i**k phase from anticommuting factors is reported separately
        (k in {0, 1, 2, 3}).
        """
        phase = 0
        ops: dict[int, PauliOperator] = dict(self.operators)
        for q, op in other.operators:
            if q in ops:
                k, res = _SINGLE_MUL[(ops[q].value, op.value)]
                phase = (phase + k) % 4
                if res == "I":
                    del ops[q]
                else:
                    ops[q] = PauliOperator(res)
            else:
                ops[q] = op
        sign = self.sign * other.sign
        if phase >= 2:
            sign = -sign
            phase -= 2
        return PauliProduct(tuple(ops.items()), sign), phase


def pauli_multiply(p: PauliProduct, q: PauliProduct) -> PauliProduct:
    """Product of two Pauli products with the +/-i phase resolved.

    When p and q commute this is the plain signed group product.  When they
    anticommute the group product is anti-Hermitian, so the Hermitian
    operator -i * p * q is returned instead (sign folded in).
    """
    result, phase = p.mul_with_phase(q)
    if phase == 0:
        return result
    # phase == 1: p*q = i * result, so -i*p*q = result.
    return result


@dataclass(frozen=True)
class PauliRotation:
    """exp(-i * angle * axis) for a Hermitian Pauli-product axis.

    Canonical form keeps the axis sign positive by folding a negative axis
    sign into the angle (rotation about -P by theta equals rotation about P
    by -theta).
    """

    axis: PauliProduct
    angle: ExactAngle

    def __post_init__(self) -> None:
        if self.axis.sign == -1:
            object.__setattr__(self, "axis", self.axis.negate())
            object.__setattr__(self, "angle", -self.angle)

    @classmethod
    def on(cls, qubit: int, op: PauliOperator | str, angle: ExactAngle) -> PauliRotation:
        return cls(PauliProduct.single(qubit, op), angle)

    @property
    def is_identity(self) -> bool:
        return self.angle.is_zero or self.axis.is_identity
