"""auxseries: chain DP, the four series, convention experiment, growth bound."""
import cmath

import numpy as np
import pytest

from qzeta import (AuxSpec, DomainError, TruncationPolicy, aux_series,
                   chain_sum, check_aux_bound, check_aux_identity)

from oracles import aux_naive, chain_naive, qint

TIGHT = TruncationPolicy(tol=1e-13)


class TestChainSum:
    def test_degenerate_cases(self):
        assert chain_sum(3, 2, 1, 0.5) == 0.0
        assert chain_sum(3, 10, 0, 0.5) == 1.0

    def test_single_point_window(self):
        q = 0.5
        assert chain_sum(4, 4, 3, q) == pytest.approx(
            (q**4 / qint(4, q)) ** 3, rel=1e-14)

    def test_against_naive(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            q = rng.choice([0.3, 0.5, 0.8])
            hi = int(rng.integers(2, 40))
            lo = int(rng.integers(1, hi))
            d = int(rng.integers(1, 4))
            assert chain_sum(lo, hi, d, q) == pytest.approx(
                chain_naive(lo, hi, d, q), rel=1e-12)


class TestAuxSeries:
    def test_kind0_collapses_for_D0_d1(self):
        # with D = 0 the chain pins to the outer variable, giving
        # sum_m q^{3m}/[m]^4 at s = 4, d = 1
        q = 0.5
        res = aux_series(AuxSpec(0, 0, 4.0, 1), q, TIGHT)
        direct = sum(q ** (3 * m) / qint(m, q) ** 4 for m in range(1, 300))
        assert res.value.real == pytest.approx(direct, rel=1e-12)

    def test_kind1_positive_and_matches_naive(self):
        res = aux_series(AuxSpec(1, 1, 6.0, 1), 0.5,
                         TruncationPolicy(tol=1e-300, max_outer=40))
        ref = aux_naive(1, 1, 6.0, 1, 0.5, 40, 40)
        assert res.value.real > 0.0
        assert cmath.isclose(res.value, ref, rel_tol=1e-12)

    def test_kind2_matches_naive(self):
        # naive oracle with the same (corrected) outer q-power carrier
        res = aux_series(AuxSpec(2, 0, 5.5, 2), 0.3,
                         TruncationPolicy(tol=1e-300, max_outer=40))
        ref = aux_naive(2, 0, 5.5, 2, 0.3, 40, 40)
        assert cmath.isclose(res.value, ref, rel_tol=1e-10)

    def test_kind3_matches_naive(self):
        res = aux_series(AuxSpec(3, 2, 6.5, 1), 0.5,
                         TruncationPolicy(tol=1e-300, max_outer=40))
        ref = aux_naive(3, 2, 6.5, 1, 0.5, 40, 40)
        assert cmath.isclose(res.value, ref, rel_tol=1e-12)

    def test_positivity_real_s(self):
        for kind in (0, 1, 2, 3):
            res = aux_series(AuxSpec(kind, 1, 6.0, 1), 0.5, TIGHT)
            assert res.value.real > 0.0 and abs(res.value.imag) < 1e-15

    def test_modulus_bounded_by_real_part_series(self):
        # |series at complex s| <= series at sigma, with equality at real s
        q = 0.5
        for kind in (1, 2, 3):
            cval = aux_series(AuxSpec(kind, 1, 6.0 + 1.5j, 1), q, TIGHT).value
            rval = aux_series(AuxSpec(kind, 1, 6.0, 1), q, TIGHT).value
            assert abs(cval) <= rval.real * (1 + 1e-12)

    def test_monotone_in_D(self):
        for kind in (0, 1, 2, 3):
            a = aux_series(AuxSpec(kind, 1, 6.5, 1), 0.5, TIGHT).value.real
            b = aux_series(AuxSpec(kind, 4, 6.5, 1), 0.5, TIGHT).value.real
            assert b <= a * (1 + 1e-12)

    def test_spec_validation(self):
        with pytest.raises(DomainError):
            AuxSpec(1, 0, 2.5, 1)  # needs Re(s) > 3
        with pytest.raises(DomainError):
            AuxSpec(0, 0, 0.9, 1)
        with pytest.raises(ValueError):
            AuxSpec(4, 0, 5.0, 1)


class TestConventionExperiment:
    def test_verdict_is_proof_reading(self):
        rep = check_aux_identity(1, 6.0, 1, 0.5, TIGHT)
        assert rep.abs_diff < 1e-10
        assert "verdict: C" in rep.convention_note

    def test_statement_and_display_readings_fail(self):
        rep = check_aux_identity(1, 6.0, 1, 0.5, TIGHT)
        # parse recorded residuals
        parts = dict(p.split("=") for p in
                     rep.convention_note.split(";")[0].replace("residual ", "").split(" "))
        assert float(parts["A"]) > 1e-4
        assert float(parts["B"]) > 1e-4

    def test_printed_carrier_closes_nothing(self):
        # with the q-power carrier on the inner variable (as printed), even the
        # proof reading fails by orders of magnitude
        q, D, s, d = 0.5, 1, 7.0, 1
        pol = TIGHT
        f0d1 = aux_series(AuxSpec(0, D, s, d + 1), q, pol).value
        f1 = aux_series(AuxSpec(1, D, s, d), q, pol).value
        f2_printed = aux_series(AuxSpec(2, D, s, d), q, pol, _carrier_t=False).value
        f3 = aux_series(AuxSpec(3, D, s, d), q, pol).value
        residual = abs(f0d1 - (f1 - f2_printed - f3))
        assert residual > 1e-3 * abs(f0d1)

    def test_replication_points(self):
        for (D, s, d, q) in ((2, 7.0, 2, 0.3), (3, 6.5 + 0.5j, 1, 0.8)):
            rep = check_aux_identity(D, s, d, q, TIGHT)
            assert "verdict: C" in rep.convention_note
            assert rep.abs_diff < 1e-8

    def test_D0_degeneracy_recorded(self):
        # at D = 0 the kind-0 series is d-independent, so A coincides with C
        rep = check_aux_identity(0, 7.0, 2, 0.3, TIGHT)
        assert "ambiguous:A,C" in rep.convention_note
        assert "degenerate" in rep.convention_note


class TestGrowthBound:
    def test_uniformity_spot_checks(self):
        base = check_aux_bound(1, 6.0, 1, 0.5, TIGHT)
        assert 0.0 < base < float("inf")
        assert check_aux_bound(10, 6.0, 1, 0.5, TIGHT) <= 2.0 * base
        assert check_aux_bound(1, 8.0, 1, 0.5, TIGHT) <= 2.0 * base
