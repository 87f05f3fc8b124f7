"""Real-valued (double precision) reciprocal approximation.

These are the oracles for everything quantized.  All functions accept a
scalar or a numpy array; scalars come back as numpy floats.

Notation used throughout the package:

* ``z``  octave index, ``2**z <= x < 2**(z+1)``
* ``m``  normalized input ``x * 2**-z`` in ``[1, 2)``
* ``a``  position inside the octave, ``m - 1`` in ``[0, 1)``
* ``y_l`` chord of ``1/x`` across the octave, ``(C - m) * 2**-(z+1)``
"""
from __future__ import annotations

import numpy as np

from .errors import ConfigError, DomainError

LINEARIZATION_CONSTANT = 3.0


def _positive(x):
    x = np.asarray(x, dtype=np.float64)
    if np.any(~(x > 0)):
        raise DomainError("x must be positive and finite")
    if np.any(~np.isfinite(x)):
        raise DomainError("x must be positive and finite")
    return x


def _decompose(x):
    # frexp gives x = f * 2**e with f in [0.5, 1): exact, no log call
    f, e = np.frexp(x)
    return 2.0 * f, e - 1


def floor_log2(x):
    """Octave index ``z`` with ``2**z <= x < 2**(z+1)``, by exponent extraction."""
    _, z = _decompose(_positive(x))
    return z[()] if z.ndim == 0 else z


def fractional_position(x):
    m, _ = _decompose(_positive(x))
    return (m - 1.0)[()]


def linear_approx(x, C: float = LINEARIZATION_CONSTANT):
    """Chord approximation of ``1/x`` on the octave containing ``x``."""
    m, z = _decompose(_positive(x))
    return np.ldexp(C - m, -(z + 1))[()]


def correction_exact(a):
    """Exact correction factor: ``2 / (3(1+a) - (1+a)**2)`` on ``[0, 1]``."""
    a = np.asarray(a, dtype=np.float64)
    if np.any(~((a >= 0) & (a <= 1))):
        raise DomainError("correction factor is only defined here on 0 <= a <= 1")
    # 3(1+a) - (1+a)^2 factors as (1+a)(2-a); avoids cancellation
    return (2.0 / ((1.0 + a) * (2.0 - a)))[()]


def corrected_reciprocal(x, poly, C: float = LINEARIZATION_CONSTANT):
    """Unquantized model of the full method: ``poly(a) * y_l(x, 3)``.

    ``poly`` is anything callable on ``a``: a
    :class:`~nsdiv.polyfit.CorrectionPolynomial` or
    :func:`correction_exact` itself.
    """
    if C != LINEARIZATION_CONSTANT:
        raise ConfigError("the correction function is derived for C = 3 only")
    m, z = _decompose(_positive(x))
    a = m - 1.0
    return (poly(a) * np.ldexp(LINEARIZATION_CONSTANT - m, -(z + 1)))[()]
