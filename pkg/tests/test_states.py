"""State models, channels and their cross-checks against brute-force oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sps

from qngmoments.states import (
    ChannelSpec,
    FockSpec,
    GaussianSpec,
    MixtureSpec,
    NoiseSpec,
    apply_channel,
    apply_loss_pmf,
    attenuate,
    coherent,
    correct_channel,
    fock_pmf,
    gaussian_moments,
    lossy_fock_moments,
    lossy_fock_probs,
    mixture_moments,
    optimal_dsv_for_mean,
    photon_added_thermal_moments,
    photon_added_thermal_pmf,
    poissonian_noise,
    squeezed_vacuum,
    thermal,
    thermal_noise,
    vacuum,
)
from qngmoments.witness import (
    MomentPair,
    boundary_second_moment,
    boundary_variance_at_mean,
    ng_boundary,
    ng_inverse_mean,
)


class TestGaussianMoments:
    def test_vacuum(self):
        pair = gaussian_moments(vacuum())
        assert pair.m == 0.0 and pair.s2 == 0.0

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.3])
    def test_coherent_is_poissonian(self, alpha):
        pair = gaussian_moments(coherent(alpha))
        assert pair.m == pytest.approx(alpha**2, rel=1e-14)
        assert pair.s2 == pytest.approx(alpha**2, rel=1e-14)

    @pytest.mark.parametrize("nbar", [0.3, 1.0, 4.0])
    def test_thermal(self, nbar):
        pair = gaussian_moments(thermal(nbar))
        assert pair.m == pytest.approx(nbar, rel=1e-13)
        assert pair.s2 == pytest.approx(nbar * (nbar + 1), rel=1e-13)

    @pytest.mark.parametrize("r", [0.2, 0.8])
    def test_squeezed_vacuum(self, r):
        pair = gaussian_moments(squeezed_vacuum(r))
        assert pair.m == pytest.approx(math.sinh(r) ** 2, rel=1e-12)
        assert pair.s2 == pytest.approx(math.sinh(2 * r) ** 2 / 2, rel=1e-12)

    def test_heisenberg_violation_rejected(self):
        with pytest.raises(ValueError):
            GaussianSpec(sigma2=0.2)

    def test_phi_normalized_mod_pi(self):
        g = GaussianSpec(r=0.3, phi=math.pi + 0.4)
        assert g.phi == pytest.approx(0.4, abs=1e-12)

    def test_rotation_at_zero_is_optimal(self):
        # dp = 0: rotating the squeeze axis away from the displacement can
        # only increase the variance; the mean never moves
        for sigma2, r, d in [(0.25, 0.5, 1.0), (0.4, 0.3, 2.0), (0.6, 0.8, 0.5)]:
            base = gaussian_moments(GaussianSpec(sigma2, r, 0.0, d, 0.0))
            for phi in np.linspace(0.1, math.pi - 0.05, 15):
                other = gaussian_moments(GaussianSpec(sigma2, r, phi, d, 0.0))
                assert other.m == pytest.approx(base.m, rel=1e-12)
                assert other.s2 >= base.s2 - 1e-12

    def test_squeezed_vacuum_replacement_lowers_variance(self):
        # swap the thermal core for vacuum at equal mean and squeezing
        for sigma2, r, d in [(0.5, 0.4, 1.2), (0.3, 0.0, 0.7), (0.8, 0.6, 0.0)]:
            g = GaussianSpec(sigma2, r, 0.0, d, 0.0)
            pair = gaussian_moments(g)
            d2 = pair.m + 0.5 - 0.5 * math.cosh(2 * r)
            assert d2 >= -1e-12
            replacement = GaussianSpec(0.25, r, 0.0, math.sqrt(max(d2, 0.0)), 0.0)
            rep_pair = gaussian_moments(replacement)
            assert rep_pair.m == pytest.approx(pair.m, rel=1e-12)
            assert rep_pair.s2 <= pair.s2 + 1e-12


class TestMixtures:
    def test_single_component_reduces(self):
        g = GaussianSpec(0.3, 0.2, 0.5, 1.0, -0.3)
        mix = MixtureSpec(((1.0, g),))
        single = gaussian_moments(g)
        pair = mixture_moments(mix)
        assert pair.m == pytest.approx(single.m, rel=1e-14)
        assert pair.s2 == pytest.approx(single.s2, rel=1e-13)

    def test_sixty_forty_of_optimal_states(self):
        mix = MixtureSpec(
            ((0.6, optimal_dsv_for_mean(1.0)), (0.4, optimal_dsv_for_mean(3.0)))
        )
        pair = mixture_moments(mix)
        assert pair.m == pytest.approx(1.8, abs=1e-10)
        # the chord lies strictly above the convex second-moment curve
        assert pair.second_moment() > boundary_second_moment(ng_inverse_mean(1.8))

    def test_hand_computed_vacuum_thermal_mix(self):
        mix = MixtureSpec(((0.5, vacuum()), (0.5, thermal(2.0))))
        pair = mixture_moments(mix)
        assert pair.m == pytest.approx(1.0, rel=1e-13)
        assert pair.second_moment() == pytest.approx(5.0, rel=1e-13)
        assert pair.s2 == pytest.approx(4.0, rel=1e-13)

    def test_second_moment_mixes_linearly_variance_does_not(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            w = rng.uniform(0.1, 0.9)
            a = GaussianSpec(0.25 + rng.uniform(0, 0.5), rng.uniform(0, 0.6), 0.0,
                             rng.normal(0, 1.5), rng.normal(0, 1.5))
            b = GaussianSpec(0.25 + rng.uniform(0, 0.5), rng.uniform(0, 0.6), 0.0,
                             rng.normal(0, 1.5), rng.normal(0, 1.5))
            mix = mixture_moments(MixtureSpec(((w, a), (1 - w, b))))
            pa, pb = gaussian_moments(a), gaussian_moments(b)
            lin = w * pa.second_moment() + (1 - w) * pb.second_moment()
            assert mix.second_moment() == pytest.approx(lin, rel=1e-12)

    def test_weight_validation(self):
        with pytest.raises(ValueError):
            MixtureSpec(((0.6, vacuum()), (0.6, vacuum())))
        with pytest.raises(ValueError):
            MixtureSpec(())


class TestLossyFock:
    def test_no_loss(self):
        assert lossy_fock_moments(3, 1.0) == MomentPair(3.0, 0.0)

    def test_full_loss(self):
        assert lossy_fock_moments(3, 0.0) == MomentPair(0.0, 0.0)

    def test_against_binomial_bruteforce(self):
        n, eta = 2, 0.5
        k = np.arange(n + 1)
        pmf = sps.binom.pmf(k, n, eta)
        mean = float(pmf @ k)
        var = float(pmf @ k**2) - mean**2
        pair = lossy_fock_moments(n, eta)
        assert pair.m == pytest.approx(mean, rel=1e-14)
        assert pair.s2 == pytest.approx(var, rel=1e-14)
        assert (pair.m, pair.s2) == (1.0, 0.5)

    def test_probs(self):
        assert lossy_fock_probs(1, 1.0) == (0.0, 1.0)
        assert lossy_fock_probs(2, 0.5) == (0.25, 0.5)

    def test_probs_complete_with_higher_terms(self):
        n, eta = 4, 0.37
        p0, p1 = lossy_fock_probs(n, eta)
        rest = sps.binom.pmf(np.arange(2, n + 1), n, eta).sum()
        assert p0 + p1 + rest == pytest.approx(1.0, abs=1e-14)

    def test_fock_g2_identity_independent_of_eta(self):
        for n in (2, 3, 5):
            for eta in (0.2, 0.6, 0.95):
                g2 = lossy_fock_moments(n, eta).to_g2().g2
                assert g2 == pytest.approx(1 - 1 / n, rel=1e-12)


class TestPhotonAddedThermal:
    def test_nbar_zero_is_fock(self):
        pmf = photon_added_thermal_pmf(2, 0.0)
        assert pmf.probs[2] == 1.0 and pmf.moments() == MomentPair(2.0, 0.0)

    def test_normalization_with_tail(self):
        pmf = photon_added_thermal_pmf(1, 0.5)
        assert pmf.probs.sum() >= 1.0 - pmf.tail_bound - 1e-12
        assert pmf.tail_bound < 1e-9

    @pytest.mark.parametrize("k,nbar", [(1, 0.5), (2, 0.3), (3, 0.4)])
    def test_pmf_moments_match_closed_form(self, k, nbar):
        # series summation against the lossless closed form
        series = photon_added_thermal_pmf(k, nbar).moments()
        closed = photon_added_thermal_moments(k, nbar, 1.0)
        assert series.m == pytest.approx(closed.m, abs=1e-7)
        assert series.s2 == pytest.approx(closed.s2, abs=1e-7)

    def test_loss_reduction_to_fock(self):
        for eta in (0.3, 0.8):
            assert photon_added_thermal_moments(2, 0.0, eta) == lossy_fock_moments(2, eta)

    def test_lossless_single_photon_added_near_border_at_04(self):
        pair = photon_added_thermal_moments(1, 0.4, 1.0)
        assert abs(pair.s2 - boundary_variance_at_mean(pair.m)) < 0.01

    def test_frozen_value(self):
        pair = photon_added_thermal_moments(2, 0.3, 0.7)
        assert pair.m == pytest.approx(2.03, rel=1e-13)
        assert pair.s2 == pytest.approx(1.1823, rel=1e-13)

    def test_thinned_pmf_matches_lossy_closed_form(self):
        k, nbar, eta = 2, 0.3, 0.7
        thinned = apply_loss_pmf(photon_added_thermal_pmf(k, nbar), eta).moments()
        closed = photon_added_thermal_moments(k, nbar, eta)
        assert thinned.m == pytest.approx(closed.m, abs=1e-7)
        assert thinned.s2 == pytest.approx(closed.s2, abs=1e-7)

    def test_cutoff_below_k_rejected(self):
        with pytest.raises(ValueError):
            photon_added_thermal_pmf(3, 0.5, cutoff=2)


class TestBinomialThinning:
    def test_identity_at_full_transmission(self):
        pmf = photon_added_thermal_pmf(1, 0.4)
        assert apply_loss_pmf(pmf, 1.0) is pmf

    def test_fock_input_reproduces_closed_form_probs(self):
        for n, eta in [(1, 0.5), (3, 0.2), (4, 0.85)]:
            thinned = apply_loss_pmf(fock_pmf(n), eta)
            p0, p1 = lossy_fock_probs(n, eta)
            assert thinned.p0 == pytest.approx(p0, abs=1e-14)
            assert thinned.p1 == pytest.approx(p1, abs=1e-14)

    def test_moments_match_channel_map(self):
        pmf = photon_added_thermal_pmf(2, 0.6)
        for eta in (0.25, 0.7):
            thinned = apply_loss_pmf(pmf, eta).moments()
            mapped = apply_channel(pmf.moments(), ChannelSpec(eta))
            assert thinned.m == pytest.approx(mapped.m, abs=1e-7)
            assert thinned.s2 == pytest.approx(mapped.s2, abs=1e-7)


class TestChannel:
    def test_identity(self):
        pair = MomentPair(2.0, 1.5)
        assert apply_channel(pair, ChannelSpec(1.0)) == pair

    def test_fock_with_poissonian_noise(self):
        n, nbar, eta = 3, 0.5, 0.8
        out = apply_channel(MomentPair(n, 0.0), ChannelSpec(eta, poissonian_noise(nbar)))
        assert out.m == pytest.approx(eta * n + nbar)
        assert out.s2 == pytest.approx(eta * (1 - eta) * n + nbar)

    def test_thermal_noise_spec(self):
        noise = thermal_noise(0.7)
        assert noise.m_noise == pytest.approx(0.7)
        assert noise.s2_noise == pytest.approx(0.7 * 1.7)

    def test_lossy_fock3_corrected_recovers_input(self):
        observed = lossy_fock_moments(3, 0.6)
        restored = correct_channel(observed, ChannelSpec(0.6))
        assert restored.m == pytest.approx(3.0, rel=1e-12)
        assert restored.s2 == pytest.approx(0.0, abs=1e-12)

    def test_overcorrection_flagged_not_clamped(self):
        # claiming more loss than actually occurred drives s2 negative
        observed = lossy_fock_moments(2, 0.9)
        restored = correct_channel(observed, ChannelSpec(0.5, poissonian_noise(0.5)))
        assert restored.s2 < 0
        assert "negative variance" in restored.violations()

    def test_zero_eta_not_invertible(self):
        with pytest.raises(ValueError):
            correct_channel(MomentPair(1.0, 1.0), ChannelSpec(0.0))

    def test_noise_validation(self):
        with pytest.raises(ValueError):
            NoiseSpec(-0.1, 0.0)


@given(
    m=st.floats(min_value=0.0, max_value=50.0),
    s2=st.floats(min_value=0.0, max_value=50.0),
    eta=st.floats(min_value=0.05, max_value=1.0),
    m_noise=st.floats(min_value=0.0, max_value=5.0),
    s2_noise=st.floats(min_value=0.0, max_value=5.0),
)
@settings(max_examples=200, deadline=None)
def test_channel_roundtrip_is_identity(m, s2, eta, m_noise, s2_noise):
    ch = ChannelSpec(eta, NoiseSpec(m_noise, s2_noise))
    pair = MomentPair(m, s2)
    back = correct_channel(apply_channel(pair, ch), ch)
    assert back.m == pytest.approx(m, rel=1e-12, abs=1e-10)
    assert back.s2 == pytest.approx(s2, rel=1e-12, abs=1e-10)


class TestAttenuate:
    def test_gaussian_matches_channel_map(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            g = GaussianSpec(
                0.25 + rng.uniform(0, 1.0),
                rng.uniform(0, 0.8),
                rng.uniform(0, math.pi),
                rng.normal(0, 1.5),
                rng.normal(0, 1.5),
            )
            eta = rng.uniform(0.05, 1.0)
            direct = gaussian_moments(attenuate(g, eta))
            mapped = apply_channel(gaussian_moments(g), ChannelSpec(eta))
            assert direct.m == pytest.approx(mapped.m, rel=1e-10, abs=1e-12)
            assert direct.s2 == pytest.approx(mapped.s2, rel=1e-10, abs=1e-12)

    def test_fock_composes_transmittance(self):
        state = attenuate(FockSpec(2, 0.8), 0.5)
        assert state == FockSpec(2, 0.4)


class TestOptimalDSV:
    def test_zero_mean_is_vacuum(self):
        assert optimal_dsv_for_mean(0.0) == vacuum()

    def test_displacement_squared_nonnegative(self):
        for m in np.linspace(0, 20, 50):
            g = optimal_dsv_for_mean(m)
            assert g.dx >= 0 and g.dp == 0.0 and g.sigma2 == 0.25

    @pytest.mark.parametrize("m", [0.5, 2.0, 5.0, 15.0])
    def test_lands_on_boundary(self, m):
        point = ng_boundary(ng_inverse_mean(m))
        pair = gaussian_moments(optimal_dsv_for_mean(m))
        assert pair.m == pytest.approx(point.m, rel=1e-10, abs=1e-10)
        assert pair.s2 == pytest.approx(point.s2, rel=1e-10, abs=1e-10)


class TestIndependentModes:
    def test_summed_variance_subadditive(self):
        # splitting photons across independent modes can only raise the total
        for m1, m2 in [(1.0, 2.0), (5.0, 25.0), (0.5, 0.5), (10.0, 0.3)]:
            split = boundary_variance_at_mean(m1) + boundary_variance_at_mean(m2)
            pooled = boundary_variance_at_mean(m1 + m2)
            assert split >= pooled - 1e-12

    def test_fifteen_photon_splits_ranked(self):
        # total mean 30 over two modes: (0,30) beats (5,25) beats (15,15)
        extreme = boundary_variance_at_mean(30.0)
        uneven = boundary_variance_at_mean(5.0) + boundary_variance_at_mean(25.0)
        even = 2 * boundary_variance_at_mean(15.0)
        assert extreme < uneven < even
