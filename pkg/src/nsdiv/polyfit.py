"""Correction polynomials: published table, Chebyshev-node LS fitting, factoring.

Coefficients are stored ascending (``c0`` first).  The published table lists
them descending, so :func:`table_polynomial` reverses on load.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .errors import ConfigError, FactoringError, NumericalError
from .reference import correction_exact

SUPPORTED_DEGREES = (2, 4, 6, 8, 10, 12, 14, 16)

# Published coefficient vectors, highest power first.
_TABLE_DESCENDING = {
    2: (0.444059373310529, -0.444059378998574, 0.998316470026731),
    4: (0.209150199411479, -0.418300401501980, 0.705497065458358,
        -0.496346863702732, 0.999950441820227),
    6: (0.098508912421565, -0.295526738526111, 0.541617753193361,
        -0.590690940810007, 0.745901070861286, -0.499810057154873,
        0.999998541152684),
    8: (0.046397306119941, -0.185589225073683, 0.400091390713315,
        -0.550711883119918, 0.661235760287096, -0.621139145442145,
        0.749707092244658, -0.499991295729843, 0.999999957055819),
    10: (0.021852946554248, -0.109264732943323, 0.278584857665575,
         -0.458751032417924, 0.594292338298524, -0.636160280553253,
         0.684123714654436, -0.624660366579099, 0.749982187229885,
         -0.499999631909091, 0.999999998735847),
    12: (0.010292651888006, -0.061755913969247, 0.183962224976114,
         -0.353715232937807, 0.512340641363993, -0.606386252715474,
         0.656490500342412, -0.653408505661428, 0.687155627762944,
         -0.624974786919717, 0.749999031146584, -0.499999985276385,
         0.999999999962789),
    14: (0.004847557219273, -0.033932867266309, 0.116332750240922,
         -0.256869471884100, 0.418707931272722, -0.547635332581819,
         0.624725982459027, -0.652257742453188, 0.669535180214450,
         -0.655925894486105, 0.687470300538450, -0.624998345227464,
         0.749999951387920, -0.499999999433776, 0.999999999998901),
    16: (0.002280382320975, -0.018242765293630, 0.070976706318807,
         -0.177591353506595, 0.324764737187105, -0.469933369923315,
         0.576458350792034, -0.633272693434323, 0.658848078752916,
         -0.662148630845731, 0.671580922961134, -0.656218168654479,
         0.687497704369226, -0.624999898693680, 0.749999997627261,
         -0.499999999977700, 0.999999999999963),
}

# Degree-4 table row written as scale * (k1 + l1*a + a^2) * (k2 + l2*a + a^2).
QUARTIC_SCALE = 0.209150199411479
QUARTIC_Q1_CONST = 3.0616168632399
QUARTIC_Q1_LIN = -2.500018461800448
QUARTIC_Q2_CONST = 1.561598389171924
QUARTIC_Q2_LIN = 0.5000184489913662
QUARTIC_Q1_LIN_HW = -2.5
QUARTIC_Q2_LIN_HW = 0.5

FACTOR_DEG2_TOL = 1e-6


@dataclass(frozen=True)
class CorrectionPolynomial:
    degree: int
    coeffs: tuple[float, ...]
    provenance: str = "table"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if len(self.coeffs) != self.degree + 1:
            raise ConfigError(
                f"degree {self.degree} needs {self.degree + 1} coefficients, "
                f"got {len(self.coeffs)}"
            )

    def __call__(self, a):
        return eval_poly(self, a)

    def to_json(self) -> str:
        return json.dumps(
            {
                "degree": self.degree,
                "coeffs_ascending": [float(c) for c in self.coeffs],
                "provenance": self.provenance,
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "CorrectionPolynomial":
        doc = json.loads(text)
        try:
            degree = int(doc["degree"])
            coeffs = doc["coeffs_ascending"]
            provenance = doc.get("provenance", "fitted")
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed coefficient file: {exc}") from exc
        if provenance not in ("fitted", "table"):
            raise ConfigError(f"unknown provenance {provenance!r}")
        return cls(degree, coeffs, provenance)


@dataclass(frozen=True)
class FitSpec:
    """Sampling grid for the LS fit.

    The angle grid is the lattice ``theta_start + k*theta_step`` cut at
    ``theta_stop``.  The stop angle is only a node when it falls on the
    lattice (it does not for the default step, where the last node sits
    about 2.65e-6 below zero).  A coarser ``theta_step`` decimates the grid
    for quick runs.
    """

    degree: int
    theta_step: float = 1e-5
    theta_range: tuple[float, float] = field(default=(-math.pi, 0.0))

    def thetas(self) -> np.ndarray:
        start, stop = self.theta_range
        if not self.theta_step > 0:
            raise ConfigError("theta_step must be positive")
        if stop < start:
            raise ConfigError(f"empty theta range {self.theta_range}")
        n = math.floor((stop - start) / self.theta_step + 1e-9)
        th = start + np.arange(n + 1, dtype=np.float64) * self.theta_step
        return th[th <= stop]


def chebyshev_nodes(spec: FitSpec) -> np.ndarray:
    """Cosine-spaced samples of ``[0, 1]``: ``(cos(theta) + 1) / 2``."""
    th = spec.thetas()
    if th.size == 0:
        raise ConfigError("theta grid is empty")
    return (np.cos(th) + 1.0) / 2.0


def fit_correction(spec: FitSpec) -> CorrectionPolynomial:
    """Least-squares fit of the correction factor on the Chebyshev nodes.

    Solved through a Householder QR of the Vandermonde matrix rather than
    the normal equations, whose condition number is the square.
    """
    if spec.degree not in SUPPORTED_DEGREES:
        raise ConfigError(f"degree must be one of {SUPPORTED_DEGREES}")
    a = chebyshev_nodes(spec)
    if a.size < spec.degree + 1:
        raise ConfigError(f"{a.size} nodes cannot determine degree {spec.degree}")
    target = correction_exact(a)
    vander = np.vander(a, spec.degree + 1, increasing=True)
    q, r = np.linalg.qr(vander, mode="reduced")
    diag = np.abs(np.diag(r))
    if diag.min() <= diag.max() * np.finfo(np.float64).eps * a.size:
        raise NumericalError("design matrix is rank deficient")
    coeffs = solve_triangular(r, q.T @ target, lower=False)
    return CorrectionPolynomial(spec.degree, tuple(coeffs), "fitted")


def table_polynomial(degree: int) -> CorrectionPolynomial:
    try:
        row = _TABLE_DESCENDING[degree]
    except KeyError:
        raise ConfigError(
            f"no published polynomial of degree {degree}; "
            f"choose from {SUPPORTED_DEGREES}"
        ) from None
    return CorrectionPolynomial(degree, tuple(reversed(row)), "table")


def eval_poly(poly: CorrectionPolynomial, a):
    """Horner evaluation, scalar or elementwise over an array."""
    c = poly.coeffs
    acc = np.full(np.shape(a), c[-1], dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    for cj in reversed(c[:-1]):
        acc = acc * a + cj
    return acc[()]


def max_deviation(p: CorrectionPolynomial, q: CorrectionPolynomial,
                  points: int = 100_001) -> float:
    """Function-space distance: ``max |p(a) - q(a)|`` on a uniform grid of [0, 1]."""
    grid = np.linspace(0.0, 1.0, points)
    return float(np.max(np.abs(eval_poly(p, grid) - eval_poly(q, grid))))


@dataclass(frozen=True)
class FactoredDeg2:
    """``c2 * (a - 0.5)**2 + c_prime`` with ``c_prime = c0 - c2/4``."""

    c2: float
    c_prime: float

    def __call__(self, a):
        a = np.asarray(a, dtype=np.float64)
        d = a - 0.5
        return (self.c2 * d * d + self.c_prime)[()]


def factor_degree2(poly: CorrectionPolynomial) -> FactoredDeg2:
    if poly.degree != 2:
        raise FactoringError(f"expected a quadratic, got degree {poly.degree}")
    c0, c1, c2 = poly.coeffs
    if abs(c1 + c2) > FACTOR_DEG2_TOL:
        raise FactoringError(
            f"|c1 + c2| = {abs(c1 + c2):.3g} exceeds {FACTOR_DEG2_TOL}; "
            "the completed square would not reproduce the polynomial"
        )
    return FactoredDeg2(c2=c2, c_prime=c0 - 0.25 * c2)


@dataclass(frozen=True)
class FactoredDeg4:
    scale: float
    q1_const: float
    q1_lin: float
    q2_const: float
    q2_lin: float

    @classmethod
    def published(cls, hardware_rounded: bool = False) -> "FactoredDeg4":
        """The published factorization; optionally with the linear terms
        rounded to the shift-friendly -2.5 and 0.5."""
        if hardware_rounded:
            return cls(QUARTIC_SCALE, QUARTIC_Q1_CONST, QUARTIC_Q1_LIN_HW,
                       QUARTIC_Q2_CONST, QUARTIC_Q2_LIN_HW)
        return cls(QUARTIC_SCALE, QUARTIC_Q1_CONST, QUARTIC_Q1_LIN,
                   QUARTIC_Q2_CONST, QUARTIC_Q2_LIN)

    def __call__(self, a):
        a = np.asarray(a, dtype=np.float64)
        q1 = self.q1_const + self.q1_lin * a + a * a
        q2 = self.q2_const + self.q2_lin * a + a * a
        return (self.scale * q1 * q2)[()]


def expand_factored_quartic(f: FactoredDeg4) -> CorrectionPolynomial:
    q1 = (f.q1_const, f.q1_lin, 1.0)
    q2 = (f.q2_const, f.q2_lin, 1.0)
    out = [0.0] * 5
    for i, u in enumerate(q1):
        for j, v in enumerate(q2):
            out[i + j] += u * v
    return CorrectionPolynomial(4, tuple(f.scale * c for c in out), "table")
