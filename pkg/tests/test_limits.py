"""limits: classical references and q -> 1 Richardson extrapolation."""
import math

import numpy as np
import pytest

from qzeta import (TruncationPolicy, mzv_reference, q_to_1_extrapolate, zeta_q)

from oracles import classical_zeta

PI2_6 = math.pi**2 / 6.0
PI4_90 = math.pi**4 / 90.0


class TestMzvReference:
    def test_depth1_weight2(self):
        assert mzv_reference((2,), 10**6) == pytest.approx(PI2_6, abs=1e-9)

    def test_depth1_weight4(self):
        assert mzv_reference((4,), 10**5) == pytest.approx(PI4_90, abs=1e-9)

    def test_weight3_series_oracle(self):
        assert mzv_reference((3,), 10**6).real == pytest.approx(
            classical_zeta(3), abs=1e-9)

    def test_depth2_classical_sum_formula(self):
        # classical weight-3 identity: value at (1,2) equals the depth-1 value
        assert mzv_reference((1, 2), 10**6).real == pytest.approx(
            classical_zeta(3), abs=1e-5)

    def test_rejects_non_admissible(self):
        with pytest.raises(ValueError):
            mzv_reference((1, 1))
        with pytest.raises(ValueError):
            mzv_reference((1.5, 2))


class TestExtrapolation:
    def test_depth1_weight2(self):
        rep = q_to_1_extrapolate((2,))
        assert abs(rep.extrapolated - PI2_6) < 1e-4
        assert 0.8 < rep.observed_order < 1.2

    def test_depth1_weight3(self):
        rep = q_to_1_extrapolate((3,))
        assert abs(rep.extrapolated.real - classical_zeta(3)) < 1e-4

    def test_weight3_depth2_matches_depth1(self):
        a = q_to_1_extrapolate((1, 2))
        b = q_to_1_extrapolate((3,))
        assert abs(a.extrapolated - b.extrapolated) < 2e-4

    def test_estimates_sorted_by_q(self):
        rep = q_to_1_extrapolate((2,))
        qs = [qv for qv, _ in rep.estimates]
        assert qs == sorted(qs)
        assert len(qs) == 8

    def test_monotone_in_q_for_real_indices(self):
        # empirical regression property of the scan values, not a theorem
        rep = q_to_1_extrapolate((2,))
        vals = [v.real for _, v in rep.estimates]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_custom_grid_and_reference(self):
        rep = q_to_1_extrapolate((2,), q_grid=[1 - 2.0**-j for j in range(4, 9)],
                                 reference=PI2_6)
        assert rep.reference == PI2_6
        assert abs(rep.extrapolated - PI2_6) < 1e-3

    def test_weight5_grid_against_reference(self):
        for index in ((2, 3), (1, 4), (5,)):
            rep = q_to_1_extrapolate(index)
            ref = mzv_reference(index, 10**5)
            assert abs(rep.extrapolated - ref) < 5e-4, index
