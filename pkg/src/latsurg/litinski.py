"""Clifford elimination: commute Cliffords to the end and discard them.

For circuits whose only purpose is producing measurement outcomes, every
Clifford rotation can be commuted past the terminal measurements (which
conjugates the measured observables) and then dropped.  What remains is
the non-Clifford rotations, moved to the front, followed by transformed
measurements.
"""

from __future__ import annotations

from dataclasses import dataclass

from .angles import ExactAngle
from .pauli import PauliOperator, PauliProduct, PauliRotation, pauli_multiply
from .qasm import Circuit, Gate, GateKind


class TransformError(ValueError):
    pass


def gate_to_rotations(gate: Gate) -> list[PauliRotation]:
    """Express one gate as Pauli rotations, exact up to global phase.

    H = Z(pi/4) X(pi/4) Z(pi/4);  CX = (Z@X)(pi/4) Z(-pi/4) X(-pi/4);
    CZ = (Z@Z)(pi/4) Z(-pi/4) Z(-pi/4);  the phase gate family maps onto
    Z rotations directly; rz(theta) is the Z(theta/2) rotation.
    """
    q = gate.qubits[0]
    quarter = ExactAngle(1, 2)
    half = ExactAngle(1, 1)
    eighth = ExactAngle(1, 3)
    if gate.kind is GateKind.H:
        return [
            PauliRotation.on(q, "Z", quarter),
            PauliRotation.on(q, "X", quarter),
            PauliRotation.on(q, "Z", quarter),
        ]
    if gate.kind is GateKind.X:
        return [PauliRotation.on(q, "X", half)]
    if gate.kind is GateKind.Z:
        return [PauliRotation.on(q, "Z", half)]
    if gate.kind is GateKind.S:
        return [PauliRotation.on(q, "Z", quarter)]
    if gate.kind is GateKind.SDG:
        return [PauliRotation.on(q, "Z", -quarter)]
    if gate.kind is GateKind.T:
        return [PauliRotation.on(q, "Z", eighth)]
    if gate.kind is GateKind.TDG:
        return [PauliRotation.on(q, "Z", -eighth)]
    if gate.kind is GateKind.RZ:
        assert gate.angle is not None
        return [PauliRotation.on(q, "Z", gate.angle.halve())]
    if gate.kind is GateKind.RX:
        assert gate.angle is not None
        return [PauliRotation.on(q, "X", gate.angle.halve())]
    if gate.kind in (GateKind.CX, GateKind.CZ):
        control, target = gate.qubits
        target_op = PauliOperator.X if gate.kind is GateKind.CX else PauliOperator.Z
        joint = PauliProduct.from_dict({control: PauliOperator.Z, target: target_op})
        return [
            PauliRotation(joint, quarter),
            PauliRotation.on(control, "Z", -quarter),
            PauliRotation(PauliProduct.single(target, target_op), -quarter),
        ]
    raise TransformError(f"no rotation form for {gate.kind.value} (decompose it first)")


def circuit_to_rotations(circuit: Circuit) -> list[PauliRotation]:
    rotations: list[PauliRotation] = []
    for gate in circuit.gates:
        rotations.extend(gate_to_rotations(gate))
    return [r for r in rotations if not r.is_identity]


def _conjugated_axis(clifford: PauliRotation, axis: PauliProduct, dagger: bool) -> PauliProduct:
    """Axis of c O c^dag (or c^dag O c when dagger) for Clifford rotation c.

    For a pi/4 rotation c = exp(-i pi/4 C) and anticommuting O the result
    is -i C O; for a pi/2 rotation (a Pauli) the axis flips sign.  The
    commuting case is untouched.
    """
    c_axis = clifford.axis
    if c_axis.commutes_with(axis):
        return axis
    quarters = clifford.angle.quarters()
    if quarters is None:
        raise TransformError(f"not a Clifford rotation angle: {clifford.angle}")
    quarters = quarters % 4  # pi periodicity up to global phase
    if quarters == 0:
        return axis  # rotation by pi is a global phase
    if quarters == 2:
        return axis.negate()
    if quarters not in (1, 3):
        raise TransformError(f"not a Clifford rotation angle: {clifford.angle}")
    positive = quarters == 1
    if dagger:
        positive = not positive
    product = pauli_multiply(c_axis, axis)
    return product if positive else product.negate()


def commute_clifford_past(clifford: PauliRotation, rotation: PauliRotation) -> PauliRotation:
    """r' with clifford . rotation = r' . clifford as matrix products.

    Moving a Clifford right past a rotation conjugates the rotation's
    axis: r' = c r c^dag.
    """
    return PauliRotation(_conjugated_axis(clifford, rotation.axis, dagger=False), rotation.angle)


def conjugate_observable(clifford: PauliRotation, observable: PauliProduct) -> PauliProduct:
    """Observable measured after c, expressed before c: c^dag M c... inverse direction.

    Commuting c past a terminal measurement of M replaces M with
    c^dag M c (sign flip when they anticommute for Pauli c, axis change
    for pi/4 c).
    """
    return _conjugated_axis(clifford, observable, dagger=True)


@dataclass(frozen=True)
class TransformedCircuit:
    rotations: tuple[PauliRotation, ...]          # non-Clifford only, front of circuit
    measurements: tuple[PauliProduct, ...]        # transformed terminal observables


def litinski_transform(
    rotations: list[PauliRotation],
    final_measurements: list[PauliProduct],
) -> TransformedCircuit:
    """Move non-Cliffords to the front, absorb Cliffords into measurements.

    Input blocks are rotations in execution order followed by terminal
    Pauli measurements; outcome-only semantics are assumed, so Clifford
    rotations commuted past the measurements are discarded.
    """
    clifford_tail: list[PauliRotation] = []   # execution order
    front: list[PauliRotation] = []
    for rotation in rotations:
        if rotation.is_identity:
            continue
        eighths = rotation.angle.eighths()
        if eighths is not None and eighths % 8 == 0:
            continue  # global phase
        if eighths is not None and eighths % 2 == 0:
            clifford_tail.append(rotation)
            continue
        # Non-Clifford: pull it in front of the accumulated tail.
        axis = rotation.axis
        for clifford in reversed(clifford_tail):
            axis = _conjugated_axis(clifford, axis, dagger=True)
        front.append(PauliRotation(axis, rotation.angle))

    measurements = []
    for observable in final_measurements:
        transformed = observable
        for clifford in reversed(clifford_tail):
            transformed = _conjugated_axis(clifford, transformed, dagger=True)
        measurements.append(transformed)
    return TransformedCircuit(tuple(front), tuple(measurements))
