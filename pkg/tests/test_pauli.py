"""Pauli product algebra against the dense matrix representation."""

import itertools

import numpy as np
import pytest

from latsurg.pauli import PauliOperator, PauliProduct, PauliRotation, pauli_multiply
from latsurg.angles import ExactAngle

from oracles import pauli_string_matrix

OPS = ["I", "X", "Y", "Z"]


def product_matrix(product: PauliProduct, n: int) -> np.ndarray:
    return pauli_string_matrix(
        {q: op.value for q, op in product.operators}, n, product.sign
    )


class TestConstruction:
    def test_identity_dropped(self):
        p = PauliProduct(((0, PauliOperator.I), (1, PauliOperator.X)))
        assert p.operators == ((1, PauliOperator.X),)

    def test_duplicate_qubit_rejected(self):
        with pytest.raises(ValueError):
            PauliProduct(((0, PauliOperator.X), (0, PauliOperator.Z)))

    def test_bad_sign_rejected(self):
        with pytest.raises(ValueError):
            PauliProduct((), sign=2)

    def test_empty_is_identity(self):
        assert PauliProduct.identity().is_identity


class TestMultiplySpecCases:
    def test_x_times_z_single_qubit(self):
        # X*Z = -iY; the Hermitian resolution keeps -Y.
        got = pauli_multiply(PauliProduct.single(1, "X"), PauliProduct.single(1, "Z"))
        assert got == PauliProduct.single(1, "Y", sign=-1)

    def test_self_inverse(self):
        x = PauliProduct.single(1, "X")
        assert pauli_multiply(x, x) == PauliProduct.identity()

    def test_two_qubit_commuting_product(self):
        # (X1 Z2)(Z1 X2): anticommutes on each qubit, commutes overall.
        # The dense oracle fixes the sign: the product is +Y1Y2.
        a = PauliProduct.from_dict({1: "X", 2: "Z"})
        b = PauliProduct.from_dict({1: "Z", 2: "X"})
        got = pauli_multiply(a, b)
        expected = product_matrix(a, 3) @ product_matrix(b, 3)
        assert np.allclose(product_matrix(got, 3), expected)
        assert got == PauliProduct.from_dict({1: "Y", 2: "Y"}, sign=1)


def all_products(num_qubits: int):
    for ops in itertools.product(OPS, repeat=num_qubits):
        for sign in (1, -1):
            yield PauliProduct.from_dict(
                {q: op for q, op in enumerate(ops) if op != "I"}, sign
            )


@pytest.mark.parametrize("n", [1, 2])
def test_multiply_matches_matrices_exhaustive(n):
    """All signed products on n qubits against dense multiplication."""
    for a in all_products(n):
        for b in all_products(n):
            got = pauli_multiply(a, b)
            dense = product_matrix(a, n) @ product_matrix(b, n)
            if a.commutes_with(b):
                assert np.allclose(product_matrix(got, n), dense), (a, b)
            else:
                assert np.allclose(product_matrix(got, n), -1j * dense), (a, b)


def test_multiply_matches_matrices_sampled_4q():
    """Random signed 4-qubit pairs against the 16x16 oracle."""
    import random

    rng = random.Random(11)
    pool = list(all_products(2))
    for _ in range(150):
        ops_a = {q: rng.choice(OPS) for q in range(4)}
        ops_b = {q: rng.choice(OPS) for q in range(4)}
        a = PauliProduct.from_dict({q: o for q, o in ops_a.items() if o != "I"}, rng.choice((1, -1)))
        b = PauliProduct.from_dict({q: o for q, o in ops_b.items() if o != "I"}, rng.choice((1, -1)))
        got = pauli_multiply(a, b)
        dense = product_matrix(a, 4) @ product_matrix(b, 4)
        factor = 1 if a.commutes_with(b) else -1j
        assert np.allclose(product_matrix(got, 4), factor * dense)
    assert pool  # silence linters


def test_associativity_up_to_phase():
    """pauli_multiply is associative up to the resolved phase bookkeeping."""
    for a, b, c in itertools.islice(
        itertools.product(all_products(2), repeat=3), 0, 4096, 7
    ):
        left = pauli_multiply(pauli_multiply(a, b), c)
        right = pauli_multiply(a, pauli_multiply(b, c))
        assert left.operators == right.operators


class TestCommutes:
    def test_disjoint_commute(self):
        assert PauliProduct.single(0, "X").commutes_with(PauliProduct.single(1, "Z"))

    def test_single_anticommute(self):
        assert not PauliProduct.single(0, "X").commutes_with(PauliProduct.single(0, "Z"))

    def test_double_overlap_commutes(self):
        a = PauliProduct.from_dict({0: "X", 1: "X"})
        b = PauliProduct.from_dict({0: "Z", 1: "Z"})
        assert a.commutes_with(b)


class TestRotation:
    def test_negative_axis_canonicalized(self):
        r = PauliRotation(PauliProduct.single(0, "Z", sign=-1), ExactAngle(1, 3))
        assert r.axis.sign == 1
        assert r.angle == ExactAngle(-1, 3)

    def test_identity(self):
        assert PauliRotation(PauliProduct.single(0, "Z"), ExactAngle(0, 0)).is_identity
