"""Exact angle arithmetic against an arbitrary-precision rational oracle."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from latsurg.angles import ExactAngle


def oracle_normalize(fraction: Fraction) -> Fraction:
    """Reduce a multiple-of-pi fraction into (-1, 1] modulo 2."""
    out = fraction % 2
    if out > 1:
        out -= 2
    return out


angles = st.builds(
    ExactAngle,
    st.integers(min_value=-(2**260), max_value=2**260),
    st.integers(min_value=0, max_value=256),
)


class TestCanonicalForm:
    def test_zero(self):
        assert ExactAngle(0, 17) == ExactAngle(0, 0)
        assert ExactAngle(0, 0).is_zero

    def test_reduction(self):
        assert ExactAngle(6, 3) == ExactAngle(3, 2)

    def test_normalization_wraps(self):
        assert ExactAngle(5, 1) == ExactAngle(1, 1)          # 5pi/2 -> pi/2
        assert ExactAngle(-1, 0) == ExactAngle(1, 0)          # -pi -> pi
        assert ExactAngle(3, 0) == ExactAngle(1, 0)

    def test_negative_power_rejected(self):
        with pytest.raises(ValueError):
            ExactAngle(1, -1)


class TestHalve:
    def test_tiny(self):
        assert ExactAngle(1, 127).halve() == ExactAngle(1, 128)

    def test_zero(self):
        assert ExactAngle(0, 0).halve() == ExactAngle(0, 0)

    def test_three_quarters(self):
        assert ExactAngle(3, 2).halve() == ExactAngle(3, 3)


class TestAdd:
    def test_eighth_plus_quarter(self):
        assert ExactAngle(1, 3) + ExactAngle(1, 2) == ExactAngle(3, 3)

    def test_wraparound(self):
        assert ExactAngle(1, 0) + ExactAngle(1, 1) == ExactAngle(-1, 1)

    def test_inverse(self):
        x = ExactAngle(7, 5)
        assert (x + (-x)).is_zero


class TestQueries:
    def test_eighths(self):
        assert ExactAngle(1, 3).eighths() == 1
        assert ExactAngle(3, 3).eighths() == 3
        assert ExactAngle(1, 2).eighths() == 2
        assert ExactAngle(1, 4).eighths() is None

    def test_magnitude(self):
        assert ExactAngle(1, 3).magnitude_lt_quarter_pi
        assert not ExactAngle(1, 2).magnitude_lt_quarter_pi
        assert not ExactAngle(3, 3).magnitude_lt_quarter_pi

    def test_to_float_tiny(self):
        assert ExactAngle(1, 128).to_float() == pytest.approx(math.pi / 2**128, rel=1e-12)

    def test_str(self):
        assert str(ExactAngle(1, 2)) == "pi/4"
        assert str(ExactAngle(3, 3)) == "3*pi/8"
        assert str(ExactAngle(0, 0)) == "0"


@given(angles, angles)
def test_add_matches_rational_oracle(a, b):
    got = (a + b).as_pi_fraction()
    assert got == oracle_normalize(a.as_pi_fraction() + b.as_pi_fraction())


@given(angles)
def test_halve_matches_rational_oracle(a):
    assert a.halve().as_pi_fraction() == a.as_pi_fraction() / 2


@given(angles)
def test_neg_roundtrip(a):
    assert -(-a) == a
    assert (a + (-a)).is_zero


@given(angles)
def test_canonical_invariants(a):
    assert a.numerator == 0 or a.numerator % 2 == 1
    fraction = a.as_pi_fraction()
    assert -1 < fraction <= 1
