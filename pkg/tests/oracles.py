"""Independent numeric oracles for the test suite.

Deliberately minimal and separate from the package's own matrix helpers:
these rebuild everything from literal 2x2 arrays and np.kron so that the
implementation and its checks cannot share a bug.
"""

from __future__ import annotations

import cmath
import math
from collections import deque

import numpy as np

I2 = np.eye(2, dtype=complex)
PAULI = {
    "I": I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
GATE = {
    **PAULI,
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "Sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "T": np.array([[1, 0], [0, cmath.exp(1j * math.pi / 4)]], dtype=complex),
    "Tdg": np.array([[1, 0], [0, cmath.exp(-1j * math.pi / 4)]], dtype=complex),
}
CX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)


def kron_all(factors) -> np.ndarray:
    out = np.array([[1]], dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def pauli_string_matrix(ops: dict[int, str], num_qubits: int, sign: int = 1) -> np.ndarray:
    return sign * kron_all(PAULI[ops.get(q, "I")] for q in range(num_qubits))


def rotation(ops: dict[int, str], theta: float, num_qubits: int, sign: int = 1) -> np.ndarray:
    p = pauli_string_matrix(ops, num_qubits, sign)
    dim = 1 << num_qubits
    return math.cos(theta) * np.eye(dim, dtype=complex) - 1j * math.sin(theta) * p


def on_qubits(u: np.ndarray, qubits: tuple[int, ...], num_qubits: int) -> np.ndarray:
    """Embed a small unitary on the given qubits (qubit 0 most significant)."""
    k = len(qubits)
    dim = 1 << num_qubits
    full = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = [(col >> (num_qubits - 1 - q)) & 1 for q in range(num_qubits)]
        sub = 0
        for q in qubits:
            sub = (sub << 1) | bits[q]
        for new_sub in range(1 << k):
            amp = u[new_sub, sub]
            if amp == 0:
                continue
            nb = list(bits)
            for i, q in enumerate(qubits):
                nb[q] = (new_sub >> (k - 1 - i)) & 1
            row = 0
            for b in nb:
                row = (row << 1) | b
            full[row, col] += amp
    return full


def letters_unitary(letters: str) -> np.ndarray:
    """Product of letter gates, first letter applied first."""
    u = I2.copy()
    for letter in letters:
        u = GATE[letter] @ u
    return u


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    flat_a, flat_b = a.reshape(-1), b.reshape(-1)
    idx = int(np.argmax(np.abs(flat_b)))
    if abs(flat_b[idx]) < 1e-12:
        return bool(np.allclose(a, b, atol=tol))
    phase = flat_a[idx] / flat_b[idx]
    if abs(abs(phase) - 1) > tol:
        return False
    return bool(np.allclose(flat_a, phase * flat_b, atol=tol))


def operator_distance_up_to_phase(a: np.ndarray, b: np.ndarray) -> float:
    """min over phases of the spectral norm of (a - e^{i phi} b)."""
    best = math.inf
    for k in range(720):
        phi = 2 * math.pi * k / 720
        d = np.linalg.norm(a - cmath.exp(1j * phi) * b, 2)
        best = min(best, d)
    return float(best)


def simulate_gates(gate_list, num_qubits: int, initial=None) -> np.ndarray:
    """Gate-list simulator over (name, qubits, matrix) tuples."""
    state = initial.copy() if initial is not None else None
    if state is None:
        state = np.zeros(1 << num_qubits, dtype=complex)
        state[0] = 1
    for u, qubits in gate_list:
        state = on_qubits(u, qubits, num_qubits) @ state
    return state


def zbasis_distribution(state: np.ndarray) -> np.ndarray:
    return np.abs(state) ** 2


def measure_observable_branches(state: np.ndarray, observable: np.ndarray):
    """Both projective branches of one observable: [(prob, state), ...]."""
    out = []
    for r in (1, -1):
        projected = (state + r * (observable @ state)) / 2
        p = float(np.vdot(projected, projected).real)
        if p > 1e-14:
            out.append((r, p, projected / math.sqrt(p)))
    return out
