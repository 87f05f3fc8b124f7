"""Golden test vectors for an HDL testbench.

One vector per line, five hexadecimal fields without prefix::

    x_raw w_raw degree result_raw z

Lines starting with ``#`` are comments; the writer records the formats there.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .divider import DividerConfig, divide_batch
from .errors import ConfigError


@dataclass(frozen=True)
class Vector:
    x_raw: int
    w_raw: int
    degree: int
    result_raw: int
    z: int

    def line(self) -> str:
        return f"{self.x_raw:x} {self.w_raw:x} {self.degree:x} {self.result_raw:x} {self.z:x}"


def generate(x_raw, w_raw, cfg: DividerConfig) -> list[Vector]:
    x_raw = np.asarray(x_raw, dtype=np.int64)
    w_arr = np.broadcast_to(np.asarray(w_raw, dtype=np.int64), x_raw.shape)
    res, z = divide_batch(x_raw, w_arr, cfg)
    return [Vector(int(x), int(w), cfg.degree, int(r), int(k))
            for x, w, r, k in zip(x_raw, w_arr, res, z)]


def write(vectors, fh, cfg: DividerConfig) -> None:
    fh.write(f"# x {cfg.x_format} w {cfg.w_format} result {cfg.out_format} "
             f"internal_frac_bits {cfg.internal_frac_bits}\n")
    fh.write("# x_raw w_raw degree result_raw z\n")
    for v in vectors:
        fh.write(v.line() + "\n")


def read(fh) -> list[Vector]:
    out = []
    for lineno, line in enumerate(fh, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 5:
            raise ConfigError(f"line {lineno}: expected 5 fields, got {len(fields)}")
        try:
            out.append(Vector(*(int(f, 16) for f in fields)))
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return out


def check(vectors, cfg: DividerConfig) -> list[Vector]:
    """Re-simulate ``vectors``; return those whose result or z disagree."""
    if not vectors:
        return []
    bad = [v for v in vectors if v.degree != cfg.degree]
    good = [v for v in vectors if v.degree == cfg.degree]
    if good:
        res, z = divide_batch([v.x_raw for v in good], [v.w_raw for v in good], cfg)
        bad += [v for v, r, k in zip(good, res, z) if (v.result_raw, v.z) != (r, k)]
    return bad
