"""``nsdiv`` command line: fit, eval, simulate, sweep, vectors, summary."""
from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager

from . import harness, vectors
from .divider import DividerConfig, divide
from .errors import ConfigError, DomainError, NsdivError
from .fixed_point import FixedPoint, QFormat, quantize
from .polyfit import (
    SUPPORTED_DEGREES,
    CorrectionPolynomial,
    FitSpec,
    fit_correction,
    max_deviation,
    table_polynomial,
)
from .reference import corrected_reciprocal


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _raw_operand(text: str, default_fmt: QFormat) -> FixedPoint:
    """``0x6:Q16.0`` or ``6`` (decimal/hex raw, optional format suffix)."""
    raw_text, _, fmt_text = text.partition(":")
    fmt = QFormat.parse(fmt_text) if fmt_text else default_fmt
    try:
        raw = int(raw_text, 0)
    except ValueError:
        raise ConfigError(f"bad raw value {raw_text!r}") from None
    return FixedPoint(raw, fmt)


def _divider_config(args, **overrides) -> DividerConfig:
    kw = dict(
        degree=args.degree,
        x_format=QFormat.parse(args.x_format),
        w_format=QFormat.parse(args.w_format),
        internal_frac_bits=args.internal_frac_bits,
        out_format=QFormat.parse(args.out_format),
    )
    kw.update(overrides)
    return DividerConfig(**kw)


def _add_format_flags(p):
    p.add_argument("--x-format", default="Q16.0")
    p.add_argument("--w-format", default="Q16.16")
    p.add_argument("--out-format", default="Q1.16")
    p.add_argument("--internal-frac-bits", type=int, default=17)


def _load_poly(args) -> CorrectionPolynomial:
    if getattr(args, "coeffs", None):
        with open(args.coeffs) as fh:
            poly = CorrectionPolynomial.from_json(fh.read())
        if poly.degree != args.degree:
            raise ConfigError(f"{args.coeffs} holds degree {poly.degree}, not {args.degree}")
        return poly
    return table_polynomial(args.degree)


def cmd_fit(args) -> None:
    poly = fit_correction(FitSpec(args.degree, theta_step=args.theta_step))
    with _output(args.out) as fh:
        fh.write(poly.to_json() + "\n")
    if args.out not in (None, "-"):
        dev = max_deviation(poly, table_polynomial(args.degree))
        print(f"degree {args.degree}: wrote {args.out}; max |fitted - table| on [0,1] = {dev:.3e}")


def cmd_eval(args) -> None:
    poly = _load_poly(args)
    x = args.x
    print(f"exact      {1.0 / x:.17g}")
    print(f"real       {float(corrected_reciprocal(x, poly)):.17g}")
    if args.degree in (2, 4) and x >= 1:
        cfg = _divider_config(args)
        xq = quantize(x, cfg.x_format)
        if xq.to_real() != x:
            print(f"fixed      n/a (x not representable in {cfg.x_format})")
            return
        res, _ = divide(quantize(1, cfg.w_format), xq, cfg)
        print(f"fixed      {res.to_real():.17g} raw={res.raw:#x} {cfg.out_format}")


def cmd_simulate(args) -> None:
    overrides = {}
    if args.x_raw is not None:
        x = _raw_operand(args.x_raw, QFormat.parse(args.x_format))
        overrides["x_format"] = x.fmt
    if args.w_raw is not None:
        w = _raw_operand(args.w_raw, QFormat.parse(args.w_format))
        overrides["w_format"] = w.fmt
    cfg = _divider_config(args, **overrides)
    if args.x_raw is None:
        if args.x is None:
            raise ConfigError("simulate needs --x or --x-raw")
        if not args.x >= 1:
            raise DomainError(f"divider input must satisfy x >= 1, got {args.x}")
        x = quantize(args.x, cfg.x_format)
    if args.w_raw is None:
        w = quantize(args.w, cfg.w_format)
    res, trace = divide(w, x, cfg)
    print(f"w/x = {res.to_real():.17g} raw={res.raw:#x} {cfg.out_format}")
    if args.trace:
        print(f"  z          {trace.z}")
        for name in ("m", "a_signal", "correction", "y_l", "w_shifted", "product", "result"):
            v = getattr(trace, name)
            print(f"  {name:<10} {v.to_real():.17g} raw={v.raw:#x} {v.fmt}")
        for name, v in trace.constants.items():
            print(f"  const {name:<8} {v.to_real():.17g} raw={v.raw:#x} {v.fmt}")


def _sweep_spec(args) -> harness.SweepSpec:
    divider = None
    if args.model == "fixed":
        divider = _divider_config(args)
    return harness.SweepSpec(
        x_start=args.start, x_end=args.end, model=args.model, degree=args.degree,
        points_per_octave=args.points_per_octave, step=args.step,
        include_start=not args.open_start, reference=args.reference,
        random_points=args.random, seed=args.seed, divider=divider,
        poly=_load_poly(args) if args.model == "real" else None,
    )


def cmd_sweep(args) -> None:
    spec = _sweep_spec(args)
    cols = harness.sweep_arrays(spec)
    with _output(args.out) as fh:
        harness.write_csv(cols, fh)
    if args.summary_json:
        with open(args.summary_json, "w") as fh:
            fh.write(harness.summary_json(spec, harness.summarize(cols)) + "\n")


def cmd_summary(args) -> None:
    spec = _sweep_spec(args)
    print(harness.summary_json(spec, harness.summarize(harness.sweep_arrays(spec))))


def cmd_vectors(args) -> None:
    import numpy as np

    cfg = _divider_config(args)
    if args.check:
        with open(args.check) as fh:
            vecs = vectors.read(fh)
        bad = vectors.check(vecs, cfg)
        if bad:
            raise NsdivError(f"{len(bad)} of {len(vecs)} vectors disagree, first: {bad[0].line()}")
        print(f"{len(vecs)} vectors match")
        return
    scale = 1 << cfg.x_format.frac_bits
    lo = int(round(args.x_start * scale))
    hi = int(round(args.x_end * scale))
    if lo < scale or hi < lo:
        raise DomainError("vector range must satisfy 1 <= x-start <= x-end")
    xs = np.arange(lo, hi + 1, max(1, args.x_step), dtype=np.int64)
    if args.random:
        rng = np.random.default_rng(args.seed)
        xs = np.concatenate([xs, rng.integers(lo, hi + 1, args.random, dtype=np.int64)])
    w_raw = quantize(args.w, cfg.w_format).raw
    vecs = vectors.generate(xs, w_raw, cfg)
    with _output(args.out) as fh:
        vectors.write(vecs, fh, cfg)


def _add_sweep_flags(p):
    p.add_argument("--model", choices=harness.MODELS, default="real")
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--start", type=float, default=1.0)
    p.add_argument("--end", type=float, default=256.0)
    p.add_argument("--points-per-octave", type=int, default=4096)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--open-start", action="store_true", help="exclude x == start")
    p.add_argument("--reference", choices=harness.REFERENCES, default="exact")
    p.add_argument("--random", type=int, default=0, help="extra random x samples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coeffs", help="coefficient JSON for the real model")
    _add_format_flags(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nsdiv", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a correction polynomial on Chebyshev nodes")
    p.add_argument("--degree", type=int, required=True, choices=SUPPORTED_DEGREES)
    p.add_argument("--theta-step", type=float, default=1e-5)
    p.add_argument("--out", help="JSON output path (default stdout)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("eval", help="corrected reciprocal of one x")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--degree", type=int, default=4, choices=SUPPORTED_DEGREES)
    p.add_argument("--coeffs")
    _add_format_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("simulate", help="run the bit-exact divider on w / x")
    p.add_argument("--x", type=float)
    p.add_argument("--x-raw", help="raw x, e.g. 0x6:Q16.0")
    p.add_argument("--w", type=float, default=1.0)
    p.add_argument("--w-raw", help="raw w, e.g. 0x10000:Q16.16")
    p.add_argument("--degree", type=int, default=4, choices=(2, 4))
    p.add_argument("--trace", action="store_true")
    _add_format_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="write an error sweep as CSV")
    _add_sweep_flags(p)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--summary-json", help="also write the JSON summary here")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("summary", help="print error maxima of a sweep as JSON")
    _add_sweep_flags(p)
    p.set_defaults(func=cmd_summary)

    p = sub.add_parser("vectors", help="write or check HDL golden vectors")
    p.add_argument("--degree", type=int, default=4, choices=(2, 4))
    p.add_argument("--x-start", type=float, default=1.0)
    p.add_argument("--x-end", type=float, default=2.0 ** 15)
    p.add_argument("--x-step", type=int, default=1, help="raw step between x values")
    p.add_argument("--w", type=float, default=1.0)
    p.add_argument("--random", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="vector file path (default stdout)")
    p.add_argument("--check", help="re-simulate an existing vector file instead")
    _add_format_flags(p)
    p.set_defaults(func=cmd_vectors)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (NsdivError, OSError) as exc:
        print(f"nsdiv: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
