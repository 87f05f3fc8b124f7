"""Error sweeps of every model layer against exact ``1/x``.

A sweep evaluates one model over an x grid and yields :class:`ErrorRow`
records ordered by x.  Absolute error is ``|exact - approx|``; relative
error is ``x * abs_err`` (the error measured against ``1/x``).
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .divider import DividerConfig, divide_batch
from .errors import ConfigError, DomainError
from .polyfit import CorrectionPolynomial, table_polynomial
from .reference import correction_exact, corrected_reciprocal

MODELS = ("real", "exact", "fixed", "optimal16")
REFERENCES = ("exact", "optimal16")
CSV_COLUMNS = ("x", "approx", "exact", "abs_err", "rel_err")


class ErrorRow(NamedTuple):
    x: float
    approx: float
    exact: float
    abs_err: float
    rel_err: float


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep.

    ``model``: ``real`` (float polynomial correction), ``exact`` (exact
    correction factor), ``fixed`` (bit-exact divider, degree 2 or 4) or
    ``optimal16`` (``1/x`` rounded to 16 fraction bits).

    Grid: ``points_per_octave`` uniform points in each octave, or a fixed
    ``step`` when given.  Fixed-point sweeps keep only x values representable
    in the divider's x format.  ``include_start=False`` makes the range
    open at ``x_start``.  ``random_points`` extra uniform samples are drawn
    with ``seed``.
    """

    x_start: float = 1.0
    x_end: float = 256.0
    model: str = "real"
    degree: int = 2
    points_per_octave: int = 4096
    step: float | None = None
    include_start: bool = True
    reference: str = "exact"
    random_points: int = 0
    seed: int = 0
    divider: DividerConfig | None = None
    poly: CorrectionPolynomial | None = None

    def validate(self):
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}")
        if self.reference not in REFERENCES:
            raise ConfigError(f"reference must be one of {REFERENCES}")
        if not (self.x_start > 0 and self.x_end >= self.x_start):
            raise ConfigError(f"invalid range [{self.x_start}, {self.x_end}]")
        if self.step is not None and not self.step > 0:
            raise ConfigError("step must be positive")
        if self.points_per_octave < 1:
            raise ConfigError("points_per_octave must be >= 1")
        if self.model == "fixed":
            if self.x_start < 1:
                raise DomainError("fixed-point models need x_start >= 1")
            if self.degree not in (2, 4):
                raise ConfigError("fixed-point models exist for degree 2 and 4")

    def divider_config(self) -> DividerConfig:
        if self.divider is not None:
            if self.divider.degree != self.degree:
                raise ConfigError("divider config degree differs from sweep degree")
            return self.divider
        return DividerConfig(degree=self.degree)


def x_grid(spec: SweepSpec) -> np.ndarray:
    lo, hi = spec.x_start, spec.x_end
    if spec.step is not None:
        n = math.floor((hi - lo) / spec.step + 1e-9)
        xs = lo + np.arange(n + 1) * spec.step
    else:
        parts = []
        z = math.floor(math.log2(lo))
        while 2.0 ** z <= hi:
            base = 2.0 ** z
            parts.append(base + np.arange(spec.points_per_octave) * (base / spec.points_per_octave))
            z += 1
        parts.append(np.array([hi]))
        xs = np.concatenate(parts)
    if spec.random_points:
        rng = np.random.default_rng(spec.seed)
        xs = np.concatenate([xs, rng.uniform(lo, hi, spec.random_points)])
    if spec.model == "fixed":
        fmt = spec.divider_config().x_format
        xs = np.floor(xs * 2.0 ** fmt.frac_bits) / 2.0 ** fmt.frac_bits
    xs = np.unique(xs)
    keep = (xs <= hi) & ((xs >= lo) if spec.include_start else (xs > lo))
    return xs[keep]


def optimal_16bit(x):
    """``1/x`` rounded to the nearest multiple of ``2**-16``."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(~(x >= 1)):
        raise DomainError("optimal_16bit is defined for x >= 1")
    return (np.rint(np.ldexp(1.0 / x, 16)) / 65536.0)[()]


def evaluate_model(spec: SweepSpec, xs: np.ndarray) -> np.ndarray:
    if spec.model == "exact":
        return np.asarray(corrected_reciprocal(xs, correction_exact))
    if spec.model == "real":
        poly = spec.poly or table_polynomial(spec.degree)
        return np.asarray(corrected_reciprocal(xs, poly))
    if spec.model == "optimal16":
        return np.asarray(optimal_16bit(xs))
    cfg = spec.divider_config()
    x_raw = np.rint(xs * 2.0 ** cfg.x_format.frac_bits).astype(np.int64)
    w_raw = 1 << cfg.w_format.frac_bits
    res, _ = divide_batch(x_raw, w_raw, cfg)
    return res.astype(np.float64) / 2.0 ** cfg.out_format.frac_bits


def sweep_arrays(spec: SweepSpec) -> dict[str, np.ndarray]:
    spec.validate()
    xs = x_grid(spec)
    if xs.size == 0:
        raise ConfigError("sweep grid is empty")
    approx = evaluate_model(spec, xs)
    exact = 1.0 / xs if spec.reference == "exact" else np.asarray(optimal_16bit(xs))
    abs_err = np.abs(exact - approx)
    return {"x": xs, "approx": approx, "exact": exact,
            "abs_err": abs_err, "rel_err": xs * abs_err}


def sweep(spec: SweepSpec) -> list[ErrorRow]:
    cols = sweep_arrays(spec)
    return [ErrorRow(*map(float, r)) for r in zip(*(cols[c] for c in CSV_COLUMNS))]


def summarize(rows) -> dict[str, float]:
    """Maxima of abs and rel error with their x locations (first on ties)."""
    if isinstance(rows, dict):
        x, abs_err, rel_err = rows["x"], rows["abs_err"], rows["rel_err"]
    else:
        if not rows:
            raise ValueError("summarize needs at least one row")
        x = np.array([r.x for r in rows])
        abs_err = np.array([r.abs_err for r in rows])
        rel_err = np.array([r.rel_err for r in rows])
    if len(x) == 0:
        raise ValueError("summarize needs at least one row")
    ia, ir = int(np.argmax(abs_err)), int(np.argmax(rel_err))
    return {"max_abs": float(abs_err[ia]), "argmax_abs": float(x[ia]),
            "max_rel": float(rel_err[ir]), "argmax_rel": float(x[ir])}


def octave_maxima(cols: dict[str, np.ndarray], key: str = "rel_err") -> dict[int, float]:
    """Per-octave maximum of ``key``, keyed by octave index."""
    z = np.floor(np.log2(cols["x"])).astype(int)
    return {int(k): float(cols[key][z == k].max()) for k in np.unique(z)}


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_csv(rows, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    if isinstance(rows, dict):
        rows = zip(*(rows[c] for c in CSV_COLUMNS))
    for r in rows:
        writer.writerow([_fmt(v) for v in r])


def read_csv(fh) -> list[ErrorRow]:
    reader = csv.reader(fh)
    header = next(reader)
    if tuple(header) != CSV_COLUMNS:
        raise ConfigError(f"unexpected CSV header {header}")
    return [ErrorRow(*map(float, r)) for r in reader]


def csv_text(rows) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def summary_json(spec: SweepSpec, summary: dict[str, float]) -> str:
    return json.dumps(
        {"model": spec.model, "degree": spec.degree,
         "range": [spec.x_start, spec.x_end], **summary},
        indent=2,
    )
