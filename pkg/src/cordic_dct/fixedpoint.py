"""Two's-complement fixed-point formats and the arithmetic-mode switch.

The rotator core runs either in plain binary64 (``ArithmeticMode.exact``)
or on raw two's-complement integers with a configurable word length
(``ArithmeticMode.fixed``).  Fixed-point right shifts round toward
negative infinity, matching a hardware arithmetic shifter.  Out-of-range
results either saturate or raise, per the mode's overflow policy, and an
optional :class:`OpCounter` tallies the adds/shifts/multiplies the
fixed-point datapath performs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum


class FixedPointOverflowError(OverflowError):
    """A result left the representable range under OverflowPolicy.ERROR."""


class OverflowPolicy(Enum):
    ERROR = "error"
    SATURATE = "saturate"


@dataclass(frozen=True)
class FixedPointFormat:
    """Signed fixed-point layout: ``total_bits`` wide, ``frac_bits`` fractional."""

    total_bits: int = 16
    frac_bits: int = 12

    def __post_init__(self):
        if not 8 <= self.total_bits <= 32:
            raise ValueError(f"total_bits {self.total_bits} outside [8, 32]")
        if not 0 <= self.frac_bits <= self.total_bits - 2:
            raise ValueError(
                f"frac_bits {self.frac_bits} outside [0, {self.total_bits - 2}]"
            )

    @property
    def lsb(self) -> float:
        return 2.0 ** -self.frac_bits

    @property
    def min_raw(self) -> int:
        return -(1 << (self.total_bits - 1))

    @property
    def max_raw(self) -> int:
        return (1 << (self.total_bits - 1)) - 1

    @property
    def min_value(self) -> float:
        return self.min_raw * self.lsb

    @property
    def max_value(self) -> float:
        return self.max_raw * self.lsb

    def to_raw(self, x: float) -> int:
        """Quantize ``x`` to a raw integer, rounding half away from zero.

        Range checking is left to the call site so the caller can apply
        its overflow policy.
        """
        scaled = x * (1 << self.frac_bits)
        return int(math.floor(scaled + 0.5)) if scaled >= 0 else int(math.ceil(scaled - 0.5))

    def from_raw(self, raw: int) -> float:
        return raw * self.lsb


@dataclass
class OpCounter:
    """Running operation tally for the fixed-point datapath."""

    adds: int = 0
    shifts: int = 0
    multiplies: int = 0
    saturations: int = 0

    def as_dict(self) -> dict:
        return {
            "adds": self.adds,
            "shifts": self.shifts,
            "multiplies": self.multiplies,
            "saturations": self.saturations,
        }


@dataclass(frozen=True)
class ArithmeticMode:
    """Either exact binary64 or fixed point with a format and overflow policy.

    ``fmt is None`` selects the exact-float variant; exactly one variant
    is ever active.  ``counter`` (shared, mutable) is only ticked by the
    fixed-point paths.
    """

    fmt: FixedPointFormat | None = None
    overflow: OverflowPolicy = OverflowPolicy.ERROR
    counter: OpCounter | None = field(default=None, compare=False)

    @property
    def is_fixed(self) -> bool:
        return self.fmt is not None

    @classmethod
    def exact(cls) -> "ArithmeticMode":
        return cls()

    @classmethod
    def fixed(
        cls,
        total_bits: int = 16,
        frac_bits: int = 12,
        overflow: OverflowPolicy = OverflowPolicy.ERROR,
        counter: OpCounter | None = None,
    ) -> "ArithmeticMode":
        return cls(FixedPointFormat(total_bits, frac_bits), overflow, counter)


def fit_raw(raw: int, mode: ArithmeticMode) -> int:
    """Clamp or reject a raw integer that fell outside the format range."""
    fmt = mode.fmt
    if fmt.min_raw <= raw <= fmt.max_raw:
        return raw
    if mode.overflow is OverflowPolicy.ERROR:
        raise FixedPointOverflowError(
            f"raw value {raw} outside [{fmt.min_raw}, {fmt.max_raw}] "
            f"for {fmt.total_bits}.{fmt.frac_bits} format"
        )
    if mode.counter is not None:
        mode.counter.saturations += 1
    return fmt.min_raw if raw < fmt.min_raw else fmt.max_raw
