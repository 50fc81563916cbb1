"""Clifford elimination: commutation rules and end-to-end outcome equality."""

import itertools
import random

import numpy as np
import pytest

from latsurg.angles import ExactAngle
from latsurg.litinski import (
    circuit_to_rotations,
    commute_clifford_past,
    gate_to_rotations,
    litinski_transform,
)
from latsurg.pauli import PauliOperator, PauliProduct, PauliRotation
from latsurg.qasm import Circuit, Gate, GateKind

from oracles import (
    CX,
    CZ,
    GATE,
    equal_up_to_phase,
    measure_observable_branches,
    on_qubits,
    pauli_string_matrix,
    rotation,
    simulate_gates,
)


def rotation_dense(r: PauliRotation, n: int) -> np.ndarray:
    return rotation(
        {q: op.value for q, op in r.axis.operators}, r.angle.to_float(), n, r.axis.sign
    )


GATE_DENSE = {
    GateKind.H: ("H", 1), GateKind.X: ("X", 1), GateKind.Z: ("Z", 1),
    GateKind.S: ("S", 1), GateKind.SDG: ("Sdg", 1),
    GateKind.T: ("T", 1), GateKind.TDG: ("Tdg", 1),
}


def gate_dense(gate: Gate, n: int) -> np.ndarray:
    if gate.kind in GATE_DENSE:
        return on_qubits(GATE[GATE_DENSE[gate.kind][0]], gate.qubits, n)
    if gate.kind is GateKind.CX:
        return on_qubits(CX, gate.qubits, n)
    if gate.kind is GateKind.CZ:
        return on_qubits(CZ, gate.qubits, n)
    raise AssertionError(gate.kind)


class TestGateToRotations:
    @pytest.mark.parametrize(
        "gate,n",
        [
            (Gate(GateKind.H, (0,)), 1),
            (Gate(GateKind.S, (0,)), 1),
            (Gate(GateKind.SDG, (0,)), 1),
            (Gate(GateKind.T, (0,)), 1),
            (Gate(GateKind.TDG, (0,)), 1),
            (Gate(GateKind.X, (0,)), 1),
            (Gate(GateKind.Z, (0,)), 1),
            (Gate(GateKind.CX, (0, 1)), 2),
            (Gate(GateKind.CX, (1, 0)), 2),
            (Gate(GateKind.CZ, (0, 1)), 2),
            (Gate(GateKind.RZ, (0,), ExactAngle(1, 5)), 1),
            (Gate(GateKind.RX, (0,), ExactAngle(-3, 4)), 1),
        ],
    )
    def test_rotation_form_matches_gate(self, gate, n):
        rotations = gate_to_rotations(gate)
        u = np.eye(1 << n, dtype=complex)
        for r in rotations:
            u = rotation_dense(r, n) @ u
        assert equal_up_to_phase(u, gate_dense(gate, n) if gate.angle is None else _rot_gate(gate, n), 1e-10)


def _rot_gate(gate: Gate, n: int) -> np.ndarray:
    theta = gate.angle.to_float()
    rz = np.diag([1, np.exp(1j * theta)]).astype(complex)
    u = rz if gate.kind is GateKind.RZ else GATE["H"] @ rz @ GATE["H"]
    return on_qubits(u, gate.qubits, n)


class TestCommutation:
    def test_commuting_axes_unchanged(self):
        c = PauliRotation.on(0, "Z", ExactAngle(1, 2))
        r = PauliRotation.on(0, "Z", ExactAngle(1, 4))
        assert commute_clifford_past(c, r) == r

    def test_anticommuting_oracle_fixes_sign(self):
        # c = Z(pi/4), r = X(pi/8): the matrix identity picks +Y.
        c = PauliRotation.on(0, "Z", ExactAngle(1, 2))
        r = PauliRotation.on(0, "X", ExactAngle(1, 3))
        moved = commute_clifford_past(c, r)
        assert moved.axis.operators[0][1] is PauliOperator.Y
        left = rotation_dense(c, 1) @ rotation_dense(r, 1)
        right = rotation_dense(moved, 1) @ rotation_dense(c, 1)
        assert equal_up_to_phase(left, right, 1e-12)

    @pytest.mark.parametrize("seed", range(100))
    def test_random_three_qubit_products(self, seed):
        """c . r = r' . c as 8x8 unitaries, random signed products."""
        rng = random.Random(seed)
        ops = ["I", "X", "Y", "Z"]
        def random_product():
            d = {q: rng.choice(ops) for q in range(3)}
            d = {q: o for q, o in d.items() if o != "I"}
            if not d:
                d = {rng.randrange(3): rng.choice("XYZ")}
            return PauliProduct.from_dict(d, rng.choice((1, -1)))
        c = PauliRotation(random_product(), ExactAngle(rng.choice((1, -1)), 2))
        r = PauliRotation(random_product(), ExactAngle(rng.choice((1, 3, -1)), 3))
        moved = commute_clifford_past(c, r)
        left = rotation_dense(c, 3) @ rotation_dense(r, 3)
        right = rotation_dense(moved, 3) @ rotation_dense(c, 3)
        assert equal_up_to_phase(left, right, 1e-10)


def random_clifford_t_circuit(rng: random.Random, num_qubits: int, depth: int) -> Circuit:
    kinds = [GateKind.H, GateKind.S, GateKind.T, GateKind.X, GateKind.Z, GateKind.SDG, GateKind.TDG]
    gates = []
    for _ in range(depth):
        if num_qubits > 1 and rng.random() < 0.3:
            control = rng.randrange(num_qubits)
            target = rng.randrange(num_qubits - 1)
            if target >= control:
                target += 1
            gates.append(Gate(GateKind.CX, (control, target)))
        else:
            gates.append(Gate(rng.choice(kinds), (rng.randrange(num_qubits),)))
    return Circuit(num_qubits, tuple(gates))


def joint_distribution_sequential(state: np.ndarray, observables, n: int) -> dict:
    """Joint outcome distribution of commuting observables, measured in order."""
    branches = [(1.0, state, ())]
    for obs in observables:
        dense = pauli_string_matrix(
            {q: op.value for q, op in obs.operators}, n, obs.sign
        )
        new_branches = []
        for p, psi, bits in branches:
            for r, pr, post in measure_observable_branches(psi, dense):
                new_branches.append((p * pr, post, bits + (0 if r == 1 else 1,)))
        branches = new_branches
    out: dict = {}
    for p, _, bits in branches:
        out[bits] = out.get(bits, 0.0) + p
    return out


@pytest.mark.parametrize("seed", range(60))
def test_transform_preserves_outcome_distribution(seed):
    """Original vs transformed joint Z-outcome distributions agree."""
    rng = random.Random(1000 + seed)
    n = rng.randint(1, 3)
    circuit = random_clifford_t_circuit(rng, n, rng.randint(1, 20))
    rotations = circuit_to_rotations(circuit)
    measurements = [PauliProduct.single(q, "Z") for q in range(n)]
    transformed = litinski_transform(rotations, measurements)

    # Only non-Clifford rotations remain.
    for r in transformed.rotations:
        eighths = r.angle.eighths()
        assert eighths is not None and eighths % 2 == 1

    state = simulate_gates([(gate_dense(g, n) if g.angle is None else _rot_gate(g, n), tuple(range(n)))
                            for g in [Gate(GateKind.H, (0,))]][:0], n)  # |0...0>
    original = np.zeros(1 << n, dtype=complex)
    original[0] = 1.0
    for g in circuit.gates:
        original = gate_dense(g, n) @ original
    dist_original = joint_distribution_sequential(original, measurements, n)

    state2 = np.zeros(1 << n, dtype=complex)
    state2[0] = 1.0
    for r in transformed.rotations:
        state2 = rotation_dense(r, n) @ state2
    dist_transformed = joint_distribution_sequential(state2, list(transformed.measurements), n)

    keys = set(dist_original) | set(dist_transformed)
    tv = 0.5 * sum(abs(dist_original.get(k, 0) - dist_transformed.get(k, 0)) for k in keys)
    assert tv < 1e-9


def test_all_z_circuit_discards_clifford():
    """S then T measured in Z: the S commutes through and disappears."""
    rotations = [
        PauliRotation.on(0, "Z", ExactAngle(1, 2)),
        PauliRotation.on(0, "Z", ExactAngle(1, 3)),
    ]
    transformed = litinski_transform(rotations, [PauliProduct.single(0, "Z")])
    assert transformed.rotations == (PauliRotation.on(0, "Z", ExactAngle(1, 3)),)
    assert transformed.measurements == (PauliProduct.single(0, "Z"),)


def test_h_then_t_conjugates_measurement():
    """H; T with a Z readout: the rotation moves to X and so does the readout."""
    rotations = circuit_to_rotations(
        Circuit(1, (Gate(GateKind.H, (0,)), Gate(GateKind.T, (0,))))
    )
    transformed = litinski_transform(rotations, [PauliProduct.single(0, "Z")])
    assert len(transformed.rotations) == 1
    axis_op = transformed.rotations[0].axis.operators[0][1]
    assert axis_op in (PauliOperator.X, PauliOperator.Y)
    measured_op = transformed.measurements[0].operators[0][1]
    assert measured_op is PauliOperator.X
