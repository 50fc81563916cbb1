"""Exact dyadic angles: integer multiples of pi / 2^k with arbitrary precision.

Angles in the front half of the pipeline are never floats.  An angle is
``numerator * pi / 2**denom_power`` with a Python big integer numerator, so
values like pi/2**128 are represented exactly.  All values are kept in a
canonical form: the numerator is odd (or the angle is exactly zero) and the
value lies in the half-open interval (-pi, pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True, order=False)
class ExactAngle:
    """An angle ``numerator * pi / 2**denom_power``, canonicalized on init.

    Canonical form: numerator odd or zero; zero stored as (0, 0); value
    normalized into (-pi, pi] modulo 2*pi.
    """

    numerator: int
    denom_power: int

    def __post_init__(self) -> None:
        if self.denom_power < 0:
            raise ValueError(f"denom_power must be >= 0, got {self.denom_power}")
        num, power = self.numerator, self.denom_power
        # Reduce: make the numerator odd (or zero).
        if num == 0:
            power = 0
        else:
            while num % 2 == 0 and power > 0:
                num //= 2
                power -= 1
        # Normalize into (-pi, pi]: numerator taken mod 2**(power+1) into
        # the window (-2**power, 2**power].
        period = 1 << (power + 1)
        num %= period
        if num > (1 << power):
            num -= period
        if num == 0:
            power = 0
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denom_power", power)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> ExactAngle:
        return cls(0, 0)

    @classmethod
    def pi(cls) -> ExactAngle:
        return cls(1, 0)

    @classmethod
    def pi_over(cls, denominator: int) -> ExactAngle:
        """Angle pi/denominator where denominator is a power of two."""
        power = _power_of_two_exponent(denominator)
        return cls(1, power)

    @classmethod
    def from_pi_fraction(cls, numerator: int, denominator: int) -> ExactAngle:
        """Angle numerator*pi/denominator where denominator is a power of two."""
        power = _power_of_two_exponent(denominator)
        return cls(numerator, power)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: ExactAngle) -> ExactAngle:
        p = max(self.denom_power, other.denom_power)
        a = self.numerator << (p - self.denom_power)
        b = other.numerator << (p - other.denom_power)
        return ExactAngle(a + b, p)

    def __sub__(self, other: ExactAngle) -> ExactAngle:
        return self + (-other)

    def __neg__(self) -> ExactAngle:
        return ExactAngle(-self.numerator, self.denom_power)

    def halve(self) -> ExactAngle:
        """Exactly half this angle; pi/2**k becomes pi/2**(k+1)."""
        return ExactAngle(self.numerator, self.denom_power + 1)

    # -- queries -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.numerator == 0

    def as_pi_fraction(self) -> Fraction:
        """The angle divided by pi, as an exact rational."""
        return Fraction(self.numerator, 1 << self.denom_power)

    def eighths(self) -> int | None:
        """This angle as an integer multiple of pi/8, or None if not one."""
        if self.denom_power > 3:
            return None
        return self.numerator << (3 - self.denom_power)

    def quarters(self) -> int | None:
        """This angle as an integer multiple of pi/4, or None if not one."""
        if self.denom_power > 2:
            return None
        return self.numerator << (2 - self.denom_power)

    @property
    def magnitude_lt_quarter_pi(self) -> bool:
        """True when |angle| < pi/4."""
        # |n|/2**p < 1/4  <=>  |n| * 4 < 2**p
        return abs(self.numerator) << 2 < (1 << self.denom_power)

    def to_float(self) -> float:
        """Double-precision value in radians (for the simulation back half)."""
        # Fraction -> float is correctly rounded even for huge integers.
        return float(self.as_pi_fraction()) * math.pi

    def __str__(self) -> str:
        if self.numerator == 0:
            return "0"
        if self.denom_power == 0:
            return f"{self.numerator}*pi" if self.numerator != 1 else "pi"
        if self.numerator == 1:
            return f"pi/{1 << self.denom_power}"
        return f"{self.numerator}*pi/{1 << self.denom_power}"


def _power_of_two_exponent(value: int) -> int:
    if value <= 0 or value & (value - 1):
        raise ValueError(f"{value} is not a positive power of two")
    return value.bit_length() - 1
