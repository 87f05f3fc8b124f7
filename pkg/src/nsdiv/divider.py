"""Bit-exact combinational models of the degree-2 and degree-4 dividers.

Both compute ``w / x`` in one pass:

1. priority-encode ``x`` to get ``z``, normalize to ``m = x * 2**-z``,
2. evaluate the correction polynomial on ``m`` (factored forms),
3. form the chord numerator ``3 - m``,
4. pre-shift the dividend, ``w * 2**-(z+1)``,
5. multiply ``(corr * (3 - m)) * w_shifted`` and round to the output format.

Every multiplier output is truncated to ``internal_frac_bits`` fraction bits.
The output stage rounds half-up (a half-LSB adder followed by truncation).
Pipeline registers are not modeled.

:func:`divide` walks the wires with :mod:`nsdiv.fixed_point` values and
returns a full :class:`DividerTrace`.  :func:`divide_batch` runs the same
integer recipe through :mod:`nsdiv.kernels` for sweeps.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConfigError, DomainError, RangeError
from .fixed_point import (
    NEAREST_EVEN,
    FixedPoint,
    QFormat,
    fx_add,
    fx_cast,
    fx_mul,
    fx_round,
    fx_shift,
    fx_sub,
    leading_one,
    quantize,
)
from .polyfit import (
    QUARTIC_Q1_CONST,
    QUARTIC_Q2_CONST,
    QUARTIC_SCALE,
    factor_degree2,
    table_polynomial,
)

Q16_0 = QFormat(16, 0)
Q16_16 = QFormat(16, 16)
Q1_16 = QFormat(1, 16)


@dataclass(frozen=True)
class DividerConfig:
    """Architecture and bit widths.

    Defaults follow the averaging scenario: ``x`` is an unsigned 16-bit
    integer count, ``w`` has 16 bits on each side of the point, internals
    carry 17 fraction bits and the result is a 1.16 fractional value.
    """

    degree: int = 4
    x_format: QFormat = Q16_0
    w_format: QFormat = Q16_16
    internal_frac_bits: int = 17
    out_format: QFormat = Q1_16

    def __post_init__(self):
        if self.degree not in (2, 4):
            raise ConfigError(f"hardware models exist for degree 2 and 4, not {self.degree}")
        if self.internal_frac_bits < self.out_format.frac_bits:
            raise ConfigError("internal_frac_bits must be >= out_format.frac_bits")
        if self.x_format.signed or self.w_format.signed:
            raise ConfigError("negative operands are not modeled; use unsigned formats")
        if self.x_format.int_bits < 1:
            raise ConfigError("x_format cannot hold x >= 1")

    @property
    def wires(self) -> "_Wires":
        return _wires(self)

    def constants(self) -> dict[str, FixedPoint]:
        """Polynomial constants, quantized nearest-even to the internal grid."""
        return dict(self.wires.constants)


@dataclass(frozen=True)
class _Wires:
    m: QFormat
    a: QFormat
    s: QFormat
    sq: QFormat
    two_a: QFormat
    q: QFormat
    qq: QFormat
    corr: QFormat
    chord: QFormat
    product: QFormat
    w_int: QFormat
    r: QFormat
    constants: tuple[tuple[str, FixedPoint], ...]


_WIRE_CACHE: dict[DividerConfig, _Wires] = {}


def _wires(cfg: DividerConfig) -> _Wires:
    # Integer widths are the smallest that hold each wire's range for x >= 1.
    if cfg in _WIRE_CACHE:
        return _WIRE_CACHE[cfg]
    f = cfg.internal_frac_bits
    m = QFormat(1, f)                # [1, 2)
    a = QFormat(0, f)                # [0, 1)
    s = QFormat(0, f, signed=True)   # m - 1.5 in [-0.5, 0.5)
    sq = QFormat(0, f)               # s^2 <= 0.25, a^2 < 1
    two_a = QFormat(1, f)            # 2a < 2
    q = QFormat(2, f)                # quartic factors, 2.5a, both < 4
    qq = QFormat(4, f)               # q1 * q2 < 9.5
    corr = QFormat(1, f)             # correction factor ~ 1
    chord = QFormat(2, f)            # 3 - m in (1, 2]
    product = QFormat(2, f)          # corr * chord < 2
    w_int = QFormat(cfg.w_format.int_bits, f)
    r = QFormat(cfg.w_format.int_bits + 1, f)
    if cfg.degree == 2:
        fac = factor_degree2(table_polynomial(2))
        consts = (
            ("c2", quantize(fac.c2, QFormat(0, f), NEAREST_EVEN)),
            ("c_prime", quantize(fac.c_prime, QFormat(0, f), NEAREST_EVEN)),
        )
    else:
        consts = (
            ("scale", quantize(QUARTIC_SCALE, QFormat(0, f), NEAREST_EVEN)),
            ("q1_const", quantize(QUARTIC_Q1_CONST, q, NEAREST_EVEN)),
            ("q2_const", quantize(QUARTIC_Q2_CONST, q, NEAREST_EVEN)),
        )
    w = _Wires(m, a, s, sq, two_a, q, qq, corr, chord, product, w_int, r, consts)
    _WIRE_CACHE[cfg] = w
    return w


@dataclass(frozen=True)
class DividerTrace:
    """Every named wire of one evaluation.

    ``a_signal`` is ``m - 1.5`` for degree 2 and ``m - 1`` for degree 4.
    ``y_l`` is the chord numerator ``3 - m``; its ``2**-(z+1)`` factor is
    carried by ``w_shifted``.
    """

    z: int
    m: FixedPoint
    a_signal: FixedPoint
    correction: FixedPoint
    y_l: FixedPoint
    w_shifted: FixedPoint
    product: FixedPoint
    result: FixedPoint
    constants: dict[str, FixedPoint] = field(default_factory=dict)


def normalize(x: FixedPoint, frac_bits: int = 17) -> tuple[FixedPoint, int]:
    """Return ``(m, z)`` with ``m = x * 2**-z`` in ``[1, 2)`` on a Q1.frac_bits wire."""
    if x.raw <= 0 or x.raw < (1 << x.fmt.frac_bits):
        raise DomainError(f"divider input must satisfy x >= 1, got {x.to_real()}")
    z = leading_one(x)
    wide = fx_cast(x, QFormat(x.fmt.int_bits, frac_bits))
    m = fx_cast(fx_shift(wide, z), QFormat(1, frac_bits))
    return m, z


def _check_operands(w: FixedPoint, x: FixedPoint, cfg: DividerConfig):
    if x.fmt != cfg.x_format:
        raise ConfigError(f"x is {x.fmt}, config expects {cfg.x_format}")
    if w.fmt != cfg.w_format:
        raise ConfigError(f"w is {w.fmt}, config expects {cfg.w_format}")


def _correction_deg2(m: FixedPoint, wr: _Wires, consts):
    one_half = FixedPoint(3 << (wr.m.frac_bits - 1), wr.m)
    # m - 1.5 can go negative: subtract on a signed wire
    s = fx_sub(fx_cast(m, QFormat(1, wr.s.frac_bits, True)),
               fx_cast(one_half, QFormat(1, wr.s.frac_bits, True)), wr.s)
    s2 = fx_mul(s, s, wr.sq)
    corr = fx_add(fx_cast(fx_mul(consts["c2"], s2, wr.sq), wr.corr),
                  fx_cast(consts["c_prime"], wr.corr), wr.corr)
    return s, corr


def _correction_deg4(m: FixedPoint, wr: _Wires, consts):
    a = fx_sub(m, FixedPoint(1 << wr.m.frac_bits, wr.m), wr.a)
    a2 = fx_mul(a, a, wr.sq)
    half_a = fx_shift(a, 1)
    two_a = fx_shift(fx_cast(a, wr.two_a), -1)
    two_half_a = fx_add(fx_cast(two_a, wr.q), fx_cast(half_a, wr.q), wr.q)
    a2_q = fx_cast(a2, wr.q)
    q1 = fx_add(fx_sub(consts["q1_const"], two_half_a, wr.q), a2_q, wr.q)
    q2 = fx_add(fx_add(consts["q2_const"], fx_cast(half_a, wr.q), wr.q), a2_q, wr.q)
    corr = fx_mul(consts["scale"], fx_mul(q1, q2, wr.qq), wr.corr)
    return a, corr


def divide(w: FixedPoint, x: FixedPoint, cfg: DividerConfig) -> tuple[FixedPoint, DividerTrace]:
    _check_operands(w, x, cfg)
    wr = cfg.wires
    consts = dict(wr.constants)
    m, z = normalize(x, cfg.internal_frac_bits)
    if cfg.degree == 2:
        a_signal, corr = _correction_deg2(m, wr, consts)
    else:
        a_signal, corr = _correction_deg4(m, wr, consts)
    three = FixedPoint(3 << cfg.internal_frac_bits, wr.chord)
    chord = fx_sub(three, fx_cast(m, wr.chord), wr.chord)
    w_shifted = fx_shift(fx_cast(w, wr.w_int), z + 1)
    product = fx_mul(corr, chord, wr.product)
    r = fx_mul(product, w_shifted, wr.r)
    try:
        result = fx_round(r, cfg.out_format)
    except RangeError as exc:
        raise RangeError(f"w/x = {r.to_real()} does not fit {cfg.out_format}") from exc
    trace = DividerTrace(z, m, a_signal, corr, chord, w_shifted, product, result, consts)
    return result, trace


def divide_deg2(w: FixedPoint, x: FixedPoint, cfg: DividerConfig):
    if cfg.degree != 2:
        raise ConfigError("divide_deg2 needs a degree-2 config")
    return divide(w, x, cfg)


def divide_deg4(w: FixedPoint, x: FixedPoint, cfg: DividerConfig):
    if cfg.degree != 4:
        raise ConfigError("divide_deg4 needs a degree-4 config")
    return divide(w, x, cfg)


def reciprocal(x: FixedPoint, cfg: DividerConfig) -> FixedPoint:
    one = quantize(1, cfg.w_format)
    return divide(one, x, cfg)[0]


def _kernel_constants(cfg: DividerConfig) -> np.ndarray:
    consts = dict(cfg.wires.constants)
    if cfg.degree == 2:
        vals = [consts["c2"].raw, consts["c_prime"].raw, 0]
    else:
        vals = [consts["scale"].raw, consts["q1_const"].raw, consts["q2_const"].raw]
    return np.array(vals, dtype=np.int64)


def divide_batch(x_raw, w_raw, cfg: DividerConfig, backend=None):
    """Vectorized :func:`divide` on raw integers; returns ``(result_raw, z)``.

    ``w_raw`` may be a scalar.  ``backend`` picks a kernel module explicitly
    (defaults to :data:`nsdiv.kernels.active`).
    """
    x_raw = np.ascontiguousarray(x_raw, dtype=np.int64)
    w_raw = np.ascontiguousarray(np.broadcast_to(w_raw, x_raw.shape), dtype=np.int64)
    if np.any(x_raw < (1 << cfg.x_format.frac_bits)):
        raise DomainError("divider input must satisfy x >= 1")
    if np.any(x_raw > cfg.x_format.max_raw):
        raise RangeError(f"x outside {cfg.x_format}")
    if np.any((w_raw < 0) | (w_raw > cfg.w_format.max_raw)):
        raise RangeError(f"w outside {cfg.w_format}")
    f = cfg.internal_frac_bits
    impl = backend or kernels.active
    if impl is not kernels.python and (
        cfg.w_format.int_bits + 2 * f + 3 > 62 or cfg.x_format.width + f > 62
    ):
        # products would overflow int64 in the compiled kernel
        impl = kernels.python
    res, z = impl.divide_raw(
        x_raw, w_raw, cfg.degree, cfg.x_format.frac_bits, cfg.w_format.frac_bits,
        f, cfg.out_format.frac_bits, _kernel_constants(cfg),
    )
    res = np.asarray(res, dtype=np.int64)
    if np.any(res > cfg.out_format.max_raw):
        raise RangeError(f"quotient does not fit {cfg.out_format}")
    return res, np.asarray(z, dtype=np.int64)
