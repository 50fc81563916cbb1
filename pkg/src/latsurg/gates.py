"""Dense 2x2/2^n matrices for gates, Pauli products, and rotations.

Used by the approximation search, the simulators, and as the numeric
ground truth in tests.  Qubit 0 is the most significant tensor factor:
a state vector of n qubits is indexed by the integer whose binary digits
are (q0 q1 ... q_{n-1}).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .pauli import PauliProduct, PauliRotation

I2 = np.eye(2, dtype=complex)
PAULI_MATRICES: dict[str, np.ndarray] = {
    "I": I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

GATE_MATRICES: dict[str, np.ndarray] = {
    "I": I2,
    "X": PAULI_MATRICES["X"],
    "Y": PAULI_MATRICES["Y"],
    "Z": PAULI_MATRICES["Z"],
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "Sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "T": np.array([[1, 0], [0, cmath.exp(1j * math.pi / 4)]], dtype=complex),
    "Tdg": np.array([[1, 0], [0, cmath.exp(-1j * math.pi / 4)]], dtype=complex),
}

KET_STATES: dict[str, np.ndarray] = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / math.sqrt(2),
    "-": np.array([1, -1], dtype=complex) / math.sqrt(2),
    "Y+": np.array([1, 1j], dtype=complex) / math.sqrt(2),
    "Y-": np.array([1, -1j], dtype=complex) / math.sqrt(2),
    "m": np.array([1, cmath.exp(1j * math.pi / 4)], dtype=complex) / math.sqrt(2),
}


def rz_gate(theta: float) -> np.ndarray:
    """The phase-rotation gate diag(1, e^{i theta})."""
    return np.array([[1, 0], [0, cmath.exp(1j * theta)]], dtype=complex)


def rotation_2x2(op: str, theta: float) -> np.ndarray:
    """exp(-i theta P) for a single-qubit Pauli axis P."""
    p = PAULI_MATRICES[op]
    return math.cos(theta) * I2 - 1j * math.sin(theta) * p


def sequence_unitary(letters: str) -> np.ndarray:
    """2x2 unitary of a gate-letter string, first letter applied first."""
    u = I2
    for letter in letters:
        u = GATE_MATRICES[letter] @ u
    return u


def pauli_product_matrix(product: PauliProduct, num_qubits: int) -> np.ndarray:
    """Dense 2^n x 2^n matrix of a signed Pauli product."""
    out = np.array([[complex(product.sign)]])
    ops = dict(product.operators)
    for q in range(num_qubits):
        out = np.kron(out, PAULI_MATRICES[ops[q].value] if q in ops else I2)
    return out


def rotation_matrix(rotation: PauliRotation, num_qubits: int) -> np.ndarray:
    """Dense exp(-i theta P) on num_qubits qubits."""
    theta = rotation.angle.to_float()
    p = pauli_product_matrix(rotation.axis, num_qubits)
    dim = 1 << num_qubits
    return math.cos(theta) * np.eye(dim, dtype=complex) - 1j * math.sin(theta) * p


def embed_unitary(u: np.ndarray, qubits: tuple[int, ...], num_qubits: int) -> np.ndarray:
    """Lift a small unitary on the given qubits to the full register."""
    dim = 1 << num_qubits
    full = np.zeros((dim, dim), dtype=complex)
    others = [q for q in range(num_qubits) if q not in qubits]
    k = len(qubits)
    for col in range(dim):
        bits = [(col >> (num_qubits - 1 - q)) & 1 for q in range(num_qubits)]
        sub_col = 0
        for q in qubits:
            sub_col = (sub_col << 1) | bits[q]
        for sub_row in range(1 << k):
            amp = u[sub_row, sub_col]
            if amp == 0:
                continue
            new_bits = list(bits)
            for i, q in enumerate(qubits):
                new_bits[q] = (sub_row >> (k - 1 - i)) & 1
            row = 0
            for b in new_bits:
                row = (row << 1) | b
            full[row, col] += amp
    return full


def apply_unitary(state: np.ndarray, u: np.ndarray, qubits: tuple[int, ...], num_qubits: int) -> np.ndarray:
    """Apply a small unitary to selected qubits of a state vector."""
    tensor = state.reshape((2,) * num_qubits)
    tensor = np.moveaxis(tensor, qubits, range(len(qubits)))
    shape = tensor.shape
    mat = tensor.reshape(1 << len(qubits), -1)
    mat = u @ mat
    tensor = mat.reshape(shape)
    tensor = np.moveaxis(tensor, range(len(qubits)), qubits)
    return np.ascontiguousarray(tensor.reshape(-1))


def apply_pauli_product(state: np.ndarray, product: PauliProduct, num_qubits: int) -> np.ndarray:
    """Apply a signed Pauli product to a state vector, factor by factor."""
    out = state
    for qubit, op in product.operators:
        out = apply_unitary(out, PAULI_MATRICES[op.value], (qubit,), num_qubits)
    if product.sign == -1:
        out = -out
    return out


def distance_up_to_phase(u: np.ndarray, v: np.ndarray) -> float:
    """min over phi of the spectral norm of (u - e^{i phi} v), u and v unitary."""
    w = v.conj().T @ u
    eigenvalues = np.linalg.eigvals(w)
    angles = np.sort(np.angle(eigenvalues))
    # Optimal phi is the circular midpoint of the eigenvalue angles; the
    # distance is the largest chord from that midpoint.
    best = math.inf
    n = len(angles)
    for shift in range(n):
        shifted = np.concatenate([angles[shift:], angles[:shift] + 2 * math.pi])
        mid = (shifted[0] + shifted[-1]) / 2
        worst = max(abs(2 * math.sin((a - mid) / 2)) for a in shifted)
        best = min(best, worst)
    return best


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 for normalized state vectors."""
    return abs(np.vdot(a, b)) ** 2
