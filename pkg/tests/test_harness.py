import io
import json
import math

import numpy as np
import pytest

from nsdiv.errors import ConfigError, DomainError
from nsdiv.harness import (
    CSV_COLUMNS,
    ErrorRow,
    SweepSpec,
    csv_text,
    octave_maxima,
    optimal_16bit,
    read_csv,
    summarize,
    summary_json,
    sweep,
    sweep_arrays,
    x_grid,
)


@pytest.mark.parametrize("x,expected", [(2, 0.5), (3, 21845 / 65536), (2**15, 2 / 65536)])
def test_optimal_16bit(x, expected):
    assert optimal_16bit(x) == expected


def test_optimal_16bit_domain():
    with pytest.raises(DomainError):
        optimal_16bit(0.5)


class TestGrid:
    def test_points_per_octave(self):
        xs = x_grid(SweepSpec(1, 4, points_per_octave=4))
        assert list(xs) == [1, 1.25, 1.5, 1.75, 2, 2.5, 3, 3.5, 4]

    def test_open_start(self):
        xs = x_grid(SweepSpec(1, 4, points_per_octave=4, include_start=False))
        assert xs[0] == 1.25

    def test_step(self):
        xs = x_grid(SweepSpec(1.6, 2.0, step=0.1))
        assert np.allclose(xs, [1.6, 1.7, 1.8, 1.9, 2.0])

    def test_fixed_grid_is_representable(self):
        xs = x_grid(SweepSpec(3, 40, model="fixed", degree=4, step=0.5, random_points=50))
        assert np.all(xs == np.floor(xs))
        assert xs.min() >= 3 and xs.max() <= 40

    def test_sorted_unique(self):
        xs = x_grid(SweepSpec(1, 100, points_per_octave=16, random_points=100, seed=3))
        assert np.all(np.diff(xs) > 0)


class TestValidate:
    @pytest.mark.parametrize("kw", [
        {"model": "bogus"},
        {"reference": "bogus"},
        {"x_start": 5, "x_end": 2},
        {"x_start": 0},
        {"step": -1.0},
        {"model": "fixed", "degree": 6},
    ])
    def test_config_errors(self, kw):
        with pytest.raises(ConfigError):
            sweep_arrays(SweepSpec(**kw))

    def test_fixed_needs_x_ge_1(self):
        with pytest.raises(DomainError):
            sweep_arrays(SweepSpec(0.5, 4, model="fixed", degree=2))


class TestSweep:
    def test_rows_and_definitions(self):
        rows = sweep(SweepSpec(1, 16, points_per_octave=64, degree=4))
        assert all(isinstance(r, ErrorRow) for r in rows)
        for r in rows:
            assert r.abs_err == abs(r.exact - r.approx)
            assert abs(r.rel_err - r.x * r.abs_err) <= math.ulp(r.rel_err)
        assert [r.x for r in rows] == sorted(r.x for r in rows)

    def test_headline_d2(self):
        s = summarize(sweep_arrays(SweepSpec(1, 256, include_start=False, degree=2)))
        assert abs(s["max_abs"] - 1.684e-3) <= 5e-5
        cols = sweep_arrays(SweepSpec(1.6, 256, degree=2))
        assert cols["abs_err"].max() < 1e-3

    def test_exact_correction(self):
        cols = sweep_arrays(SweepSpec(1, 256, model="exact"))
        assert cols["abs_err"].max() < 1e-12

    def test_optimal16_reference(self):
        cols = sweep_arrays(SweepSpec(1, 64, model="optimal16", reference="optimal16"))
        assert np.all(cols["abs_err"] == 0)

    def test_fixed_vs_real(self):
        real = sweep_arrays(SweepSpec(1, 2**12, model="real", degree=2, step=1.0))
        fixed = sweep_arrays(SweepSpec(1, 2**12, model="fixed", degree=2, step=1.0))
        assert np.array_equal(real["x"], fixed["x"])
        assert np.all(fixed["abs_err"] >= real["abs_err"] - 2.0**-16)

    def test_custom_polynomial(self):
        from nsdiv.polyfit import FitSpec, fit_correction
        poly = fit_correction(FitSpec(4, theta_step=1e-3))
        a = sweep_arrays(SweepSpec(1, 8, degree=4, poly=poly))
        b = sweep_arrays(SweepSpec(1, 8, degree=4))
        assert np.abs(a["approx"] - b["approx"]).max() < 1e-6

    def test_relative_error_flat_across_octaves(self):
        cols = sweep_arrays(SweepSpec(2, 256, degree=4))
        per = octave_maxima(cols)
        vals = [v for k, v in per.items() if 1 <= k <= 7]
        assert max(vals) / min(vals) <= 2


class TestSummarize:
    def test_single_row(self):
        r = ErrorRow(3.0, 0.3, 1 / 3, 1 / 3 - 0.3, 3 * (1 / 3 - 0.3))
        s = summarize([r])
        assert s == {"max_abs": r.abs_err, "argmax_abs": 3.0,
                     "max_rel": r.rel_err, "argmax_rel": 3.0}

    def test_empty(self):
        with pytest.raises(ValueError):
            summarize([])

    def test_rows_and_arrays_agree(self):
        spec = SweepSpec(1, 32, points_per_octave=32)
        assert summarize(sweep(spec)) == summarize(sweep_arrays(spec))

    def test_degree_ratio(self):
        m2 = summarize(sweep_arrays(SweepSpec(1, 256, include_start=False, degree=2)))
        m4 = summarize(sweep_arrays(SweepSpec(1, 256, include_start=False, degree=4)))
        assert 20 <= m2["max_abs"] / m4["max_abs"] <= 50

    def test_json(self):
        spec = SweepSpec(1, 8, points_per_octave=8)
        doc = json.loads(summary_json(spec, summarize(sweep_arrays(spec))))
        assert set(doc) == {"model", "degree", "range", "max_abs", "argmax_abs",
                            "max_rel", "argmax_rel"}


def test_csv_roundtrip_is_exact():
    rows = sweep(SweepSpec(1, 8, points_per_octave=100, degree=6))
    text = csv_text(rows)
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    assert read_csv(io.StringIO(text)) == rows
    assert csv_text(sweep_arrays(SweepSpec(1, 8, points_per_octave=100, degree=6))) == text


def test_csv_bad_header():
    with pytest.raises(ConfigError):
        read_csv(io.StringIO("a,b\n1,2\n"))
