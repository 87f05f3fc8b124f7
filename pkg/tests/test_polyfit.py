import json
import math
from fractions import Fraction

import numpy as np
import pytest

from nsdiv.errors import ConfigError, FactoringError
from nsdiv.polyfit import (
    SUPPORTED_DEGREES,
    CorrectionPolynomial,
    FactoredDeg4,
    FitSpec,
    chebyshev_nodes,
    eval_poly,
    expand_factored_quartic,
    factor_degree2,
    fit_correction,
    max_deviation,
    table_polynomial,
)
from nsdiv.reference import correction_exact


def naive_exact(poly, a):
    """Power sum in exact rationals, rounded once."""
    fa = Fraction(a)
    return float(sum(Fraction(c) * fa**j for j, c in enumerate(poly.coeffs)))


class TestTable:
    @pytest.mark.parametrize("degree,c0", [
        (2, 0.998316470026731), (4, 0.999950441820227), (16, 0.999999999999963),
    ])
    def test_constant_terms(self, degree, c0):
        p = table_polynomial(degree)
        assert p.coeffs[0] == c0
        assert p.degree == degree and len(p.coeffs) == degree + 1

    def test_loader_reverses_published_order(self):
        # published d=2 row is [c2, c1, c0]
        assert table_polynomial(2).coeffs == (0.998316470026731, -0.444059378998574, 0.444059373310529)

    @pytest.mark.parametrize("degree", SUPPORTED_DEGREES)
    def test_c0_invariant(self, degree):
        assert 0.99 < table_polynomial(degree).coeffs[0] <= 1.0

    @pytest.mark.parametrize("degree", [0, 3, 18])
    def test_unsupported(self, degree):
        with pytest.raises(ConfigError):
            table_polynomial(degree)

    def test_error_decreases_with_degree(self):
        a = np.linspace(0, 1, 20_001)
        g = correction_exact(a)
        errs = [np.abs(g - eval_poly(table_polynomial(d), a)).max() for d in SUPPORTED_DEGREES]
        assert all(e1 > e2 for e1, e2 in zip(errs, errs[1:]))
        assert errs[0] <= 2e-3

    @pytest.mark.parametrize("degree", SUPPORTED_DEGREES[:6])
    def test_error_roughly_equioscillating(self, degree):
        # endpoint errors are of the same size as the interior ones
        p = table_polynomial(degree)
        a = np.linspace(0, 1, 20_001)
        interior = np.abs(correction_exact(a) - eval_poly(p, a))[2000:-2000].max()
        for end in (0.0, 1.0):
            assert abs(eval_poly(p, end) - 1.0) <= 3 * interior


class TestEval:
    def test_examples(self):
        p2 = table_polynomial(2)
        assert eval_poly(p2, 0.0) == 0.998316470026731
        assert eval_poly(p2, 0.5) == pytest.approx(0.8873016238550763, abs=1e-15)
        assert eval_poly(p2, 1.0) == pytest.approx(0.998316464338686, abs=1e-15)

    def test_callable_and_array(self):
        p = table_polynomial(4)
        a = np.array([0.0, 0.25, 1.0])
        assert np.array_equal(p(a), np.array([eval_poly(p, v) for v in a]))

    @pytest.mark.parametrize("degree", SUPPORTED_DEGREES)
    def test_horner_matches_exact_power_sum(self, degree):
        p = table_polynomial(degree)
        rng = np.random.default_rng(degree)
        for a in rng.random(300):
            h = eval_poly(p, a)
            assert abs(h - naive_exact(p, a)) <= 2 * math.ulp(h)


class TestChebyshev:
    @pytest.mark.parametrize("theta,a", [(-math.pi, 0.0), (0.0, 1.0), (-math.pi / 2, 0.5)])
    def test_node_map(self, theta, a):
        spec = FitSpec(2, theta_step=1.0, theta_range=(theta, theta))
        assert chebyshev_nodes(spec)[0] == pytest.approx(a, abs=1e-16)

    def test_default_grid(self):
        nodes = chebyshev_nodes(FitSpec(2))
        assert nodes.size == 314_160
        assert nodes[0] == 0.0
        # the lattice stops 2.65e-6 short of theta = 0
        assert 1 - 1e-11 < nodes[-1] < 1.0
        assert np.all((nodes >= 0) & (nodes <= 1))

    def test_endpoint_included_when_on_lattice(self):
        nodes = chebyshev_nodes(FitSpec(2, theta_step=math.pi / 4))
        assert nodes.size == 5
        assert nodes[-1] == 1.0

    def test_empty(self):
        with pytest.raises(ConfigError):
            chebyshev_nodes(FitSpec(2, theta_range=(0.0, -1.0)))


class TestFit:
    @pytest.mark.parametrize("degree,tol", [(2, 1e-9), (4, 1e-9), (16, 1e-7)])
    def test_reproduces_table(self, degree, tol):
        fitted = fit_correction(FitSpec(degree))
        assert fitted.provenance == "fitted"
        assert max_deviation(fitted, table_polynomial(degree)) <= tol

    def test_deterministic(self):
        spec = FitSpec(6, theta_step=1e-3)
        assert fit_correction(spec).coeffs == fit_correction(spec).coeffs

    def test_too_few_nodes(self):
        with pytest.raises(ConfigError):
            fit_correction(FitSpec(4, theta_step=1.0))

    def test_unsupported_degree(self):
        with pytest.raises(ConfigError):
            fit_correction(FitSpec(3))

    def test_decimated_grid_close(self):
        fitted = fit_correction(FitSpec(4, theta_step=1e-3))
        assert max_deviation(fitted, table_polynomial(4)) < 1e-6


class TestJson:
    def test_roundtrip(self):
        p = table_polynomial(8)
        doc = json.loads(p.to_json())
        assert doc["degree"] == 8 and doc["provenance"] == "table"
        assert doc["coeffs_ascending"][0] == p.coeffs[0]
        assert CorrectionPolynomial.from_json(p.to_json()) == p

    def test_rejects_bad(self):
        with pytest.raises(ConfigError):
            CorrectionPolynomial.from_json('{"degree": 2}')
        with pytest.raises(ConfigError):
            CorrectionPolynomial.from_json('{"degree": 2, "coeffs_ascending": [1, 2]}')
        with pytest.raises(ConfigError):
            CorrectionPolynomial.from_json(
                '{"degree": 1, "coeffs_ascending": [1, 2], "provenance": "guess"}')


class TestFactoring:
    def test_degree2_constant(self):
        f = factor_degree2(table_polynomial(2))
        assert f.c2 == 0.444059373310529
        assert f.c_prime == pytest.approx(0.8873016266990987, abs=1e-16)

    def test_degree2_function_space(self):
        p = table_polynomial(2)
        f = factor_degree2(p)
        c0, c1, c2 = p.coeffs
        a = np.linspace(0, 1, 100_001)
        dev = np.abs(f(a) - eval_poly(p, a))
        # factored - p2 = -(c1 + c2) * a exactly; worst at a = 1
        assert dev.max() == pytest.approx(abs(c1 + c2), abs=1e-15)
        assert dev.max() < 6e-9

    def test_degree2_exact_when_symmetric(self):
        p = CorrectionPolynomial(2, (0.875, -0.5, 0.5))
        f = factor_degree2(p)
        a = np.linspace(0, 1, 1025)
        assert np.array_equal(f(a), eval_poly(p, a))

    def test_degree2_rejects(self):
        with pytest.raises(FactoringError):
            factor_degree2(CorrectionPolynomial(2, (1.0, -0.4, 0.5)))
        with pytest.raises(FactoringError):
            factor_degree2(table_polynomial(4))

    def test_quartic_unrounded(self):
        got = expand_factored_quartic(FactoredDeg4.published())
        want = table_polynomial(4)
        assert max(abs(g - w) for g, w in zip(got.coeffs, want.coeffs)) <= 1e-9

    def test_quartic_rounded(self):
        got = expand_factored_quartic(FactoredDeg4.published(hardware_rounded=True))
        want = table_polynomial(4)
        assert max(abs(g - w) for g, w in zip(got.coeffs, want.coeffs)) <= 1e-4

    def test_quartic_monomial(self):
        got = expand_factored_quartic(FactoredDeg4(1.0, 0.0, 0.0, 0.0, 0.0))
        assert got.coeffs == (0.0, 0.0, 0.0, 0.0, 1.0)

    def test_quartic_callable_matches_expansion(self):
        f = FactoredDeg4.published(hardware_rounded=True)
        a = np.linspace(0, 1, 1001)
        assert np.allclose(f(a), eval_poly(expand_factored_quartic(f), a), atol=1e-14)
