"""analysis: lemma checks, ramp quadrature/moments, derivative identity, fits."""
import cmath
import math

import numpy as np
import pytest

from qzeta import (DomainError, PoleProximityError, TruncationPolicy,
                   check_alpha_derivative, check_pointwise_bounds,
                   check_pole_term_split, check_reciprocal_telescoping,
                   inner_integral, ramp_moment, ramp_quadrature,
                   ramp_representation, tail_decay_fit, weighted_piece_integral,
                   weighted_ramp_representation, zeta_q, zeta_q_two_cont)
from qzeta.qcore import as_q, q_int

from oracles import qint

TIGHT = TruncationPolicy(tol=1e-13)

# frozen quadrature-validated ramp moments at (s=2.5, alpha=4, q=0.5)
H1_REF = 0.07742342371044374
H2_REF = 0.02546888203344368


class TestTelescoping:
    def test_m1_equals_q(self):
        rep = check_reciprocal_telescoping(1, 0.5, TIGHT)
        assert rep.rhs.real == pytest.approx(0.5, abs=0)
        assert rep.abs_diff < 1e-13

    def test_moderate(self):
        assert check_reciprocal_telescoping(3, 0.5, TIGHT).abs_diff < 1e-12

    def test_large_m1_high_q(self):
        assert check_reciprocal_telescoping(20, 0.9, TIGHT).abs_diff < 1e-10


class TestPieceIntegrals:
    def test_inner_integral_closed_case(self):
        # alpha = 2: antiderivative gives 1/[1] - 1/[2]
        val = inner_integral(2, 2.0, 0.5)
        assert val.real == pytest.approx(1.0 - 1.0 / 1.5, rel=1e-14)

    def test_inner_integral_against_quadrature(self):
        q = 0.5
        m2, alpha = 5, 2.5
        nodes, weights = np.polynomial.legendre.leggauss(32)
        a, b = 0.0, q ** (m2 - 1)
        t = 0.5 * (b - a) * nodes + 0.5 * (a + b)
        quad = 0.5 * (b - a) * np.sum(weights * (qint(m2, q) - t) ** -alpha)
        assert inner_integral(m2, alpha, q).real == pytest.approx(quad, rel=1e-12)

    def test_inner_integral_pole(self):
        with pytest.raises(PoleProximityError):
            inner_integral(3, 1.0, 0.5)

    def test_weighted_piece_against_quadrature(self):
        q, m2, alpha = 0.5, 4, 2.5
        nodes, weights = np.polynomial.legendre.leggauss(48)
        a, b = qint(m2 - 1, q), qint(m2, q)
        x = 0.5 * (b - a) * nodes + 0.5 * (a + b)
        psi = q * (1 - (1 - q) * x) ** (alpha - 2) * x ** -alpha
        quad = 0.5 * (b - a) * np.sum(weights * psi)
        assert weighted_piece_integral(m2, alpha, q).real == pytest.approx(
            quad, rel=1e-12)


class TestPoleTermSplit:
    def test_example_grid(self):
        assert check_pole_term_split(4.0, 2.5, 0.5, TIGHT).abs_diff < 1e-9
        assert check_pole_term_split(5.0 + 1.0j, 3.0, 0.3, TIGHT).abs_diff < 1e-8

    def test_records_divergent_unweighted_reading(self):
        rep = check_pole_term_split(4.0, 2.5, 0.5, TIGHT)
        assert "diverges" in rep.convention_note

    def test_pole_error(self):
        with pytest.raises(PoleProximityError):
            check_pole_term_split(4.0, 1.0, 0.5)


class TestRampQuadrature:
    def test_constant_integrand(self):
        # integral of the bare ramp: sum_n q^{2n} * 1/2 = 1/(2(1-q^2))
        q = 0.5
        val = ramp_quadrature(lambda n, v, u: np.ones_like(v), q, TIGHT)
        assert val.real == pytest.approx(0.5 / (1 - q * q), rel=1e-13)

    def test_linear_integrand(self):
        # f(u) = u: sum_n q^{2n} int v ([n]_q + q^n v) dv
        q = 0.5
        val = ramp_quadrature(lambda n, v, u: u, q, TIGHT)
        expect = sum(q ** (2 * n) * ((1 - q**n) / (1 - q) / 2 + q**n / 3)
                     for n in range(200))
        assert val.real == pytest.approx(expect, rel=1e-13)


class TestRampMoments:
    def test_kind3_closed_form(self):
        val = ramp_moment(3, 4.0, 3.0, 0.5, TIGHT)
        ref = zeta_q((3.0,), 0.5, TIGHT).value / 4.0
        assert cmath.isclose(val, ref, rel_tol=1e-11)

    def test_kind1_regression(self):
        val = ramp_moment(1, 2.5, 4.0, 0.5, TIGHT)
        assert val.real == pytest.approx(H1_REF, rel=1e-9)
        assert abs(val.imag) < 1e-15

    def test_kind2_log_factor_bound(self):
        # the log factor is bounded by log(1 + 1/((1-q) [1]_q)) on the range
        val = ramp_moment(2, 2.5, 4.0, 0.5, TIGHT)
        assert val.real == pytest.approx(H2_REF, rel=1e-9)
        assert 0 < val.real < H1_REF * math.log(1 + 1 / (1 - 0.5))


class TestRepresentations:
    def test_weighted_form_reproduces_continuation(self):
        for (s, alpha, q) in ((4.0, 2.5, 0.5), (4.5, 2.2, 0.3), (3.2, 1.8, 0.8)):
            lhs = weighted_ramp_representation(s, alpha, q, TIGHT)
            rhs = zeta_q((s - alpha, alpha), q, TIGHT).value
            assert abs(lhs - rhs) < 1e-9, (s, alpha, q)

    def test_single_kernel_form_does_not(self):
        # the printed single-kernel functional is a different function
        lhs = ramp_representation(4.0, 2.5, 0.5, TIGHT)
        rhs = zeta_q((1.5, 2.5), 0.5, TIGHT).value
        assert abs(lhs - rhs) > 1e-2

    def test_weighted_form_domain_guard(self):
        with pytest.raises(DomainError):
            weighted_ramp_representation(1.8, 2.0, 0.5)


class TestAlphaDerivative:
    @pytest.mark.parametrize("s,alpha,q,tol", [
        (2.5, 4.0, 0.5, 1e-5),
        (4.0, 2.5, 0.3, 1e-5),
        (1.5, 3.0, 0.8, 1e-4),
    ])
    def test_relative_residual(self, s, alpha, q, tol):
        rep = check_alpha_derivative(s, alpha, q, TIGHT)
        assert rep.abs_diff < tol

    def test_notes_true_continuation_difference(self):
        rep = check_alpha_derivative(2.5, 4.0, 0.5, TIGHT)
        assert "differs" in rep.convention_note


class TestPointwiseBounds:
    def test_equality_point(self):
        assert check_pointwise_bounds(1, 0.0, 2.0, 2.0, 0.5) == (True, True)

    def test_examples(self):
        assert check_pointwise_bounds(7, 3.1, 5.0, 1.5, 0.3) == (True, True)
        assert check_pointwise_bounds(50, 100.0, 1.5, 1.9, 0.9) == (True, True)

    def test_m1_never_violates(self):
        # at m = 1 both kernels coincide, so the bounds hold with equality
        rng = np.random.default_rng(11)
        for _ in range(300):
            u = float(rng.uniform(0, 1000))
            alpha = float(rng.uniform(1 + 1e-9, 20))
            s = float(rng.uniform(1 + 1e-9, 2))
            q = float(rng.uniform(0.05, 0.95))
            assert check_pointwise_bounds(1, u, alpha, s, q) == (True, True)

    def test_documented_counterexample(self):
        # the stated bounds are FALSE in general: the comparison function
        # tends to (m/[m])^(alpha-s) q^{(m-1)(alpha-1)} as u grows, which
        # drops below 1 for alpha > 1 and m >= 2.  This pins the concrete
        # counterexample so the finding stays visible.
        assert check_pointwise_bounds(7, 709.5, 6.71, 1.747, 0.8) == (False, False)

    def test_violations_exist_on_stated_grid(self):
        # ~30 percent of the (m <= 100, u <= 1e3, alpha <= 20, 1 < s < 2) grid
        # violates the bounds; zero-violation claims over this grid cannot hold
        rng = np.random.default_rng(20240802)
        bad = 0
        for _ in range(2000):
            m = int(rng.integers(1, 101))
            u = float(rng.uniform(0, 1000))
            alpha = float(rng.uniform(1 + 1e-9, 20))
            s = float(rng.uniform(1 + 1e-9, 2))
            q = float(rng.choice(np.arange(0.1, 0.95, 0.1)))
            ok1, ok2 = check_pointwise_bounds(m, u, alpha, s, q)
            bad += (not ok1) + (not ok2)
        assert bad > 100


class TestDecayFits:
    def test_ramp1_rate(self):
        fit = tail_decay_fit("ramp1_alpha", 1.5, 0.5, (8, 64), TIGHT)
        assert fit.exponent <= -1.5 + 0.15
        assert fit.r_squared > 0.99

    def test_ramp2_rate(self):
        fit = tail_decay_fit("ramp2_alpha", 1.5, 0.5, (8, 64), TIGHT)
        assert fit.exponent <= -2.5 + 0.15
        assert fit.r_squared > 0.99

    def test_interp_terms_rate(self):
        fit = tail_decay_fit("interp_terms", 2.5, 0.5, (26, 38), TIGHT)
        delta = min(1.0, 2.5 - 1.0) * (1 - 1e-3)
        assert fit.exponent <= -(1 + delta) + 0.15
        assert fit.r_squared > 0.99

    def test_domain_guards(self):
        with pytest.raises(DomainError):
            tail_decay_fit("ramp1_alpha", 2.5, 0.5, (8, 64))
        with pytest.raises(ValueError):
            tail_decay_fit("nope", 1.5, 0.5, (8, 64))
