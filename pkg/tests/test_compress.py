"""Rotation compression: the worked grouping example plus product identity."""

import random

import pytest

from latsurg.angles import ExactAngle
from latsurg.compress import (
    CliffordRotation,
    NonCliffordRotation,
    ResidualClifford,
    compress_to_pauli_rotations,
)
from latsurg.gates import rotation_2x2, GATE_MATRICES
from latsurg.pauli import PauliRotation

from oracles import letters_unitary, equal_up_to_phase

import numpy as np


def blocks_unitary(blocks) -> np.ndarray:
    u = np.eye(2, dtype=complex)
    for block in blocks:
        if isinstance(block, ResidualClifford):
            u = GATE_MATRICES[block.gate] @ u
        else:
            rotation = block.rotation
            op = rotation.axis.operators[0][1].value
            u = rotation_2x2(op, rotation.angle.to_float()) @ u
    return u


def test_worked_grouping_example():
    """HSHTSHX splits as HSH | TS | H | X -> X(pi/4), Z(3pi/8), H, X."""
    blocks = compress_to_pauli_rotations("HSHTSHX")
    assert blocks == [
        CliffordRotation(PauliRotation.on(0, "X", ExactAngle(1, 2))),
        NonCliffordRotation(PauliRotation.on(0, "Z", ExactAngle(3, 3))),
        ResidualClifford("H", 0),
        ResidualClifford("X", 0),
    ]


def test_single_t():
    assert compress_to_pauli_rotations("T") == [
        NonCliffordRotation(PauliRotation.on(0, "Z", ExactAngle(1, 3)))
    ]


def test_hssst_h_single_rotation():
    # A bracketed run compresses to one rotation no matter its length.
    blocks = compress_to_pauli_rotations("HSSSTH")
    assert blocks == [
        NonCliffordRotation(PauliRotation.on(0, "X", ExactAngle(7, 3)))
    ]


def test_unpaired_h_stays_residual():
    blocks = compress_to_pauli_rotations("HX")
    assert blocks == [ResidualClifford("H", 0), ResidualClifford("X", 0)]


def test_full_cycle_of_s_drops_out():
    # Eight S letters rotate by 2*pi: nothing to emit.
    assert compress_to_pauli_rotations("SSSSSSSS") == []


def test_rejects_unknown_letter():
    with pytest.raises(ValueError):
        compress_to_pauli_rotations("HQT")


@pytest.mark.parametrize("seed", range(40))
def test_product_preserved_random_sequences(seed):
    """Block product equals letter product up to phase (<= 12 letters)."""
    rng = random.Random(seed)
    letters = "".join(rng.choice("HSTXZ") for _ in range(rng.randint(1, 12)))
    blocks = compress_to_pauli_rotations(letters)
    assert equal_up_to_phase(blocks_unitary(blocks), letters_unitary(letters), tol=1e-10)


def test_never_more_blocks_than_letters():
    rng = random.Random(5)
    for _ in range(50):
        letters = "".join(rng.choice("HSTXZ") for _ in range(rng.randint(1, 30)))
        assert len(compress_to_pauli_rotations(letters)) <= len(letters)
