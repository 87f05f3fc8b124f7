"""Binary fixed-point values with hardware-style truncation.

A :class:`FixedPoint` is a raw integer plus a :class:`QFormat`; its real
value is ``raw * 2**-frac_bits``.  Every datapath operation works on the raw
integers only.  Right shifts and multiplier outputs truncate toward minus
infinity (dropped wires), overflow raises :class:`RangeError`.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError, DomainError, FormatMismatchError, RangeError

MAX_WIDTH = 64

TRUNCATE = "truncate"
NEAREST_EVEN = "nearest-even"

_QFMT_RE = re.compile(r"^(S|U)?Q(\d+)\.(\d+)$", re.IGNORECASE)


@dataclass(frozen=True)
class QFormat:
    """Fixed-point layout: ``int_bits`` before the point (sign excluded)."""

    int_bits: int
    frac_bits: int
    signed: bool = False

    def __post_init__(self):
        if self.int_bits < 0 or self.frac_bits < 0:
            raise ConfigError(f"negative bit count in {self!r}")
        if self.width > MAX_WIDTH:
            raise ConfigError(f"{self} is {self.width} bits wide, limit is {MAX_WIDTH}")

    @property
    def width(self) -> int:
        return self.int_bits + self.frac_bits + int(self.signed)

    @property
    def max_raw(self) -> int:
        return (1 << (self.int_bits + self.frac_bits)) - 1

    @property
    def min_raw(self) -> int:
        return -(1 << (self.int_bits + self.frac_bits)) if self.signed else 0

    @property
    def step(self) -> float:
        return math.ldexp(1.0, -self.frac_bits)

    @property
    def max_value(self) -> float:
        return math.ldexp(self.max_raw, -self.frac_bits)

    @property
    def min_value(self) -> float:
        return math.ldexp(self.min_raw, -self.frac_bits)

    def contains_raw(self, raw: int) -> bool:
        return self.min_raw <= raw <= self.max_raw

    @classmethod
    def parse(cls, text: str) -> "QFormat":
        """Parse ``Q16.16`` / ``UQ16.16`` (unsigned) or ``SQ3.17`` (signed)."""
        m = _QFMT_RE.match(text.strip())
        if m is None:
            raise ConfigError(f"not a Q-format: {text!r}")
        prefix, ib, fb = m.groups()
        return cls(int(ib), int(fb), signed=(prefix or "").upper() == "S")

    def __str__(self) -> str:
        return f"{'S' if self.signed else ''}Q{self.int_bits}.{self.frac_bits}"


@dataclass(frozen=True)
class FixedPoint:
    raw: int
    fmt: QFormat

    def __post_init__(self):
        if not isinstance(self.raw, int):
            object.__setattr__(self, "raw", int(self.raw))
        if not self.fmt.contains_raw(self.raw):
            raise RangeError(
                f"raw {self.raw} outside {self.fmt} "
                f"[{self.fmt.min_raw}, {self.fmt.max_raw}]"
            )

    def to_real(self) -> float:
        return math.ldexp(self.raw, -self.fmt.frac_bits)

    def as_fraction(self) -> Fraction:
        return Fraction(self.raw, 1 << self.fmt.frac_bits)

    def __float__(self) -> float:
        return self.to_real()

    def __repr__(self) -> str:
        return f"FixedPoint({self.to_real()!r} raw={self.raw:#x} {self.fmt})"


def quantize(v, fmt: QFormat, mode: str = TRUNCATE) -> FixedPoint:
    """Quantize a real (float, int or Fraction) into ``fmt``.

    ``truncate`` floors, ``nearest-even`` rounds to nearest with ties to even.
    Exact arithmetic is used so dyadic inputs round-trip bit for bit.
    """
    scaled = Fraction(v) * (1 << fmt.frac_bits)
    if mode == TRUNCATE:
        raw = math.floor(scaled)
    elif mode == NEAREST_EVEN:
        raw = round(scaled)
    else:
        raise ConfigError(f"unknown rounding mode {mode!r}")
    return FixedPoint(raw, fmt)


def _rescale(raw: int, from_frac: int, to_frac: int) -> int:
    shift = from_frac - to_frac
    return raw >> shift if shift >= 0 else raw << -shift


def fx_mul(a: FixedPoint, b: FixedPoint, out: QFormat) -> FixedPoint:
    """Full-precision product, then floor to ``out.frac_bits``."""
    raw = _rescale(a.raw * b.raw, a.fmt.frac_bits + b.fmt.frac_bits, out.frac_bits)
    return FixedPoint(raw, out)


def _check_aligned(a: FixedPoint, b: FixedPoint, out: QFormat | None) -> QFormat:
    if a.fmt.frac_bits != b.fmt.frac_bits:
        raise FormatMismatchError(f"binary points differ: {a.fmt} vs {b.fmt}")
    out = a.fmt if out is None else out
    if out.frac_bits != a.fmt.frac_bits:
        raise FormatMismatchError(f"output {out} not aligned with {a.fmt}")
    return out


def fx_add(a: FixedPoint, b: FixedPoint, out: QFormat | None = None) -> FixedPoint:
    """Exact sum; result format defaults to ``a``'s."""
    out = _check_aligned(a, b, out)
    return FixedPoint(a.raw + b.raw, out)


def fx_sub(a: FixedPoint, b: FixedPoint, out: QFormat | None = None) -> FixedPoint:
    out = _check_aligned(a, b, out)
    return FixedPoint(a.raw - b.raw, out)


def fx_shift(a: FixedPoint, k: int) -> FixedPoint:
    """Shift raw bits right by ``k`` (left if negative); format unchanged.

    Right shifts floor, so ``-3 >> 1 == -2``.
    """
    raw = a.raw >> k if k >= 0 else a.raw << -k
    return FixedPoint(raw, a.fmt)


def fx_cast(a: FixedPoint, fmt: QFormat) -> FixedPoint:
    """Move ``a`` into another format, truncating dropped fraction bits."""
    return FixedPoint(_rescale(a.raw, a.fmt.frac_bits, fmt.frac_bits), fmt)


def fx_round(a: FixedPoint, fmt: QFormat) -> FixedPoint:
    """Round half-up into ``fmt`` (one half-LSB adder, then truncation)."""
    shift = a.fmt.frac_bits - fmt.frac_bits
    if shift <= 0:
        return fx_cast(a, fmt)
    return FixedPoint((a.raw + (1 << (shift - 1))) >> shift, fmt)


def leading_one(x: FixedPoint) -> int:
    """Priority encoder: weight of the most significant set bit of ``x``."""
    if x.raw <= 0:
        raise DomainError(f"leading_one needs x > 0, got {x.to_real()}")
    return x.raw.bit_length() - 1 - x.fmt.frac_bits
