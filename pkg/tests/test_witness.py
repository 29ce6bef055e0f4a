"""Boundary curve, its formulations, inversion and classification."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qngmoments.witness import (
    BOUNDARY_BAND,
    G2Point,
    IntensityMoments,
    MomentPair,
    VerdictTag,
    boundary_fano,
    boundary_g2,
    boundary_intensity,
    boundary_mean,
    boundary_second_moment,
    boundary_variance,
    boundary_variance_at_mean,
    classify_fano,
    classify_g2,
    classify_intensity,
    classify_moments,
    g2_asymptotic,
    multimode_identical_boundary,
    ng_boundary,
    ng_inverse_mean,
    nonparametric_min_mean,
)

# frozen with mpmath at 40 digits: m(0.2), s2(0.2)
M_AT_02 = 0.49760924219304669757
S2_AT_02 = 0.39074396869932805065


def oracle_bisect_r(m_target, lo=0.0, hi=10.0):
    # independent inversion: raw exponentials, plain loop
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        val = math.exp(6 * mid) / 4 - 0.5 + math.exp(-2 * mid) / 4
        if val < m_target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _near_a_border(m, s2, boundary_s2):
    # equivalence checks must avoid strict-inequality ties at both borders
    scale = 1e-6 * max(1.0, m, s2)
    return abs(s2 - boundary_s2) < scale or abs(s2 - m) < scale


class TestBoundaryCurve:
    def test_vacuum_endpoint(self):
        point = ng_boundary(0.0)
        assert point.m == 0.0 and point.s2 == 0.0

    def test_frozen_value_r02(self):
        point = ng_boundary(0.2)
        assert point.m == pytest.approx(M_AT_02, rel=1e-14)
        assert point.s2 == pytest.approx(S2_AT_02, rel=1e-14)

    @pytest.mark.parametrize("r", [3.0, 4.0])
    def test_large_r_asymptotics(self, r):
        point = ng_boundary(r)
        assert point.m == pytest.approx(math.exp(6 * r) / 4, rel=1e-4)
        assert point.s2 == pytest.approx(0.375 * (4 * point.m) ** (2 / 3), rel=1e-4)

    @pytest.mark.parametrize("bad", [-0.1, math.nan, math.inf, 51.0])
    def test_rejects_bad_r(self, bad):
        with pytest.raises(ValueError):
            ng_boundary(bad)

    def test_monotone_in_r(self):
        rs = np.linspace(0, 3, 3000)
        ms = np.array([boundary_mean(r) for r in rs])
        s2s = np.array([boundary_variance(r) for r in rs])
        assert np.all(np.diff(ms) > 0)
        assert np.all(np.diff(s2s) > 0)


class TestInverseMean:
    def test_origin(self):
        assert ng_inverse_mean(0.0) == 0.0

    def test_roundtrip(self):
        assert ng_inverse_mean(boundary_mean(0.5)) == pytest.approx(0.5, abs=1e-10)

    def test_against_independent_bisection(self):
        assert ng_inverse_mean(15.0) == pytest.approx(oracle_bisect_r(15.0), abs=1e-10)

    @pytest.mark.parametrize("m", [1e-6, 0.1, 1.0, 15.0, 1e4, 1e8])
    def test_residual_bound(self, m):
        r = ng_inverse_mean(m)
        assert abs(boundary_mean(r) - m) <= 1e-12 * max(1.0, m)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            ng_inverse_mean(-0.5)


class TestClassification:
    def test_deep_qng_point(self):
        verdict = classify_moments(MomentPair(2.0, 0.0))
        assert verdict.tag is VerdictTag.QNG
        assert verdict.margin < 0

    def test_coherent_point_unwitnessed(self):
        assert classify_moments(MomentPair(1.0, 1.0)).tag is VerdictTag.UNWITNESSED

    def test_boundary_point_unwitnessed(self):
        point = ng_boundary(0.3)
        verdict = classify_moments(MomentPair(point.m, point.s2))
        assert verdict.tag is VerdictTag.UNWITNESSED
        assert abs(verdict.margin) <= 1e-10

    def test_nonclassical_only_band(self):
        # below the Poisson line but above the QNG boundary
        verdict = classify_moments(MomentPair(1.0, 0.9))
        assert verdict.tag is VerdictTag.NONCLASSICAL_ONLY
        assert verdict.margin > 0

    def test_nonfinite_invalid(self):
        assert classify_moments(MomentPair(math.nan, 1.0)).tag is VerdictTag.INVALID
        assert classify_moments(MomentPair(1.0, math.inf)).tag is VerdictTag.INVALID

    def test_negative_fields_invalid(self):
        assert classify_moments(MomentPair(-1.0, 1.0)).tag is VerdictTag.INVALID
        assert classify_moments(MomentPair(1.0, -0.2)).tag is VerdictTag.INVALID

    def test_integer_statistics_floor_flagged(self):
        # no photon-number distribution with mean 0.5 has variance below 0.25
        verdict = classify_moments(MomentPair(0.5, 0.2))
        assert verdict.tag is VerdictTag.INVALID
        assert "floor" in verdict.reason

    def test_tiny_mean_degeneracy(self):
        assert classify_moments(MomentPair(0.0, 0.0)).tag is VerdictTag.UNWITNESSED
        assert classify_moments(MomentPair(1e-13, 0.0)).tag is VerdictTag.UNWITNESSED


class TestSecondMomentForm:
    def test_vacuum(self):
        assert boundary_second_moment(0.0) == 0.0

    def test_matches_m2_plus_s2(self):
        for r in np.linspace(0, 3, 301):
            point = ng_boundary(r)
            expected = point.m**2 + point.s2
            assert boundary_second_moment(r) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_convex_in_mean(self):
        # uniform grid in m; discrete second difference of <N^2>(m)
        ms = np.linspace(0.0, boundary_mean(2.0), 400)
        n2 = np.array([boundary_second_moment(ng_inverse_mean(m)) for m in ms])
        assert np.all(np.diff(n2, 2) >= -1e-9)

    def test_closed_form_curvature_nonnegative(self):
        rs = np.linspace(0, 3, 500)
        curvature = 2 - 4 / (3 * np.exp(8 * rs) - 1)
        assert np.all(curvature >= 0)


class TestIntensityForm:
    def test_vacuum(self):
        w = boundary_intensity(0.0)
        assert w.w1 == 0.0 and w.w2 == 0.0

    def test_defining_identity(self):
        for r in np.linspace(0, 3, 301):
            w = boundary_intensity(r)
            expected = boundary_second_moment(r) - boundary_mean(r)
            assert w.w2 == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_classification_agreement(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            m = rng.uniform(0.05, 20.0)
            bd = boundary_variance_at_mean(m)
            s2 = bd * rng.uniform(0.2, 2.0)
            if _near_a_border(m, s2, bd):
                continue  # stay clear of the strict-inequality bands
            pair = MomentPair(m, s2)
            if not pair.is_physical:
                continue
            assert classify_intensity(pair.to_intensity()).tag is classify_moments(pair).tag

    def test_below_hard_floor_invalid(self):
        # w2 < w1^2 - w1 converts to a negative photon variance
        assert classify_intensity(IntensityMoments(2.0, 1.0)).tag is VerdictTag.INVALID

    def test_subpoissonian_points_are_valid_input(self):
        # the classical bound w2 >= w1^2 must NOT be enforced: QNG points
        # violate it by construction
        w = MomentPair(2.0, 0.0).to_intensity()
        assert not w.is_classical_compatible
        assert classify_intensity(w).tag is VerdictTag.QNG


class TestG2Form:
    def test_matches_closed_rational_form(self):
        for r in np.linspace(0.1, 3, 200):
            u = math.exp(2 * r)
            closed = (u**6 + 2 * u**5 + 3 * u**4 - 4 * u**3 - 3 * u**2 - 2 * u + 3) / (
                u**3 + u**2 + u - 1
            ) ** 2
            assert boundary_g2(r).g2 == pytest.approx(closed, rel=1e-12)

    def test_fock_points_stay_witnessed(self):
        # g2 of Fock |n> is 1 - 1/n; the boundary at the same mean sits above
        # it for every n (the gap shrinks as n grows)
        gaps = []
        for n in range(1, 15):
            bound = boundary_g2(ng_inverse_mean(float(n))).g2
            gaps.append(bound - (1 - 1 / n))
        assert all(gap > 0 for gap in gaps)
        assert gaps[-1] < gaps[0]

    def test_conversion_roundtrip(self):
        pair = MomentPair(3.7, 1.9)
        back = pair.to_g2().to_moments()
        assert back.s2 == pytest.approx(pair.s2, rel=1e-12)

    def test_requires_positive_r(self):
        with pytest.raises(ValueError):
            boundary_g2(0.0)

    def test_classify_agreement(self):
        pair = MomentPair(4.0, 1.0)
        assert classify_g2(pair.to_g2()).tag is classify_moments(pair).tag


class TestG2Asymptotic:
    def test_frozen_value(self):
        assert g2_asymptotic(10.0) == pytest.approx(0.93678943731052340893, rel=1e-14)

    def test_below_boundary_g2(self):
        for m in np.linspace(1, 100, 150):
            assert g2_asymptotic(m) < boundary_g2(ng_inverse_mean(m)).g2

    def test_limit_is_one(self):
        assert g2_asymptotic(1e9) == pytest.approx(1.0, abs=1e-8)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            g2_asymptotic(0.0)


class TestFanoForm:
    def test_consistency(self):
        for r in np.linspace(0.05, 3, 100):
            m, fano = boundary_fano(r)
            assert fano * m == pytest.approx(boundary_variance(r), rel=1e-12)

    def test_below_one(self):
        for r in np.linspace(1e-4, 3, 300):
            assert boundary_fano(r)[1] < 1.0

    def test_origin_limit_is_one(self):
        # series: both m and s2 start at r, so the ratio tends to 1
        assert boundary_fano(1e-8)[1] == pytest.approx(1.0, abs=1e-6)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            boundary_fano(0.0)

    def test_classify_agreement(self):
        pair = MomentPair(4.0, 1.0)
        assert classify_fano(pair.m, pair.fano()).tag is classify_moments(pair).tag


class TestMultimode:
    def test_single_mode_reduces(self):
        point = ng_boundary(0.4)
        pair = multimode_identical_boundary(1, 0.4)
        assert (pair.m, pair.s2) == (point.m, point.s2)

    def test_frozen_two_mode_value(self):
        pair = multimode_identical_boundary(2, 0.3)
        assert pair.m == pytest.approx(2.2992295502534862582, rel=1e-14)
        assert pair.s2 == pytest.approx(3.1307724900609222826, rel=1e-14)

    def test_single_mode_is_worst_case(self):
        # at equal total mean the M = 1 curve lies below every M > 1 curve
        for n_modes in (2, 3, 5):
            for r in np.linspace(0.05, 1.5, 40):
                pair = multimode_identical_boundary(n_modes, r)
                assert boundary_variance_at_mean(pair.m) < pair.s2

    def test_rejects_bad_mode_count(self):
        with pytest.raises(ValueError):
            multimode_identical_boundary(0, 0.5)


class TestSpecInvariants:
    def test_parametric_nonparametric_consistency(self):
        for r in np.linspace(0, 3, 1000):
            m = boundary_mean(r)
            assert abs(nonparametric_min_mean(boundary_variance(r)) - m) <= 1e-9 * max(1.0, m)

    def test_small_mean_expansion(self):
        for s2 in np.linspace(1e-4, 0.05, 200):
            lo, hi = 0.0, 1.0
            while hi - lo > 1e-15:
                mid = 0.5 * (lo + hi)
                if boundary_variance(mid) < s2:
                    lo = mid
                else:
                    hi = mid
            m = boundary_mean(0.5 * (lo + hi))
            assert abs(m - (s2 + s2**2)) <= 2 * s2**3

    def test_formulation_equivalence_grid(self):
        rng = np.random.default_rng(7)
        checked = 0
        while checked < 200:
            m = rng.uniform(0.2, 30.0)
            bd = boundary_variance_at_mean(m)
            s2 = bd * rng.uniform(0.3, 1.8)
            if _near_a_border(m, s2, bd):
                continue
            pair = MomentPair(m, s2)
            if not pair.is_physical:
                continue
            tags = {
                classify_moments(pair).tag,
                classify_intensity(pair.to_intensity()).tag,
                classify_g2(pair.to_g2()).tag,
                classify_fano(pair.m, pair.fano()).tag,
            }
            assert len(tags) == 1
            checked += 1


@given(
    m=st.floats(min_value=0.1, max_value=1e3),
    s2=st.floats(min_value=0.0, max_value=1e3),
)
@settings(max_examples=150, deadline=None)
def test_verdict_invariant_under_representation_roundtrip(m, s2):
    pair = MomentPair(m, s2)
    if _near_a_border(m, s2, s2 - classify_moments(pair).margin):
        return  # strict-inequality ties are excluded by construction
    base = classify_moments(pair)
    via_w = classify_moments(pair.to_intensity().to_moments())
    via_g2 = classify_moments(pair.to_g2().to_moments())
    assert via_w.tag is base.tag
    assert via_g2.tag is base.tag


@given(r=st.floats(min_value=0.0, max_value=3.0))
@settings(max_examples=200, deadline=None)
def test_boundary_points_never_certify(r):
    point = ng_boundary(r)
    assert classify_moments(MomentPair(point.m, point.s2)).tag is not VerdictTag.QNG
