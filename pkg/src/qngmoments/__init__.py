"""Certification of quantum non-Gaussianity from photon-number moments.

The central object is the minimum-variance curve of Gaussian mixtures in the
(mean, variance) plane; anything strictly below it is quantum non-Gaussian.
Submodules cover the boundary and its equivalent formulations (:mod:`witness`),
state models and loss/noise channels (:mod:`states`), measurement-scheme
estimators and samplers (:mod:`measurement`), loss tolerance a.k.a. QNG depth
(:mod:`depth`), the vacuum/single-photon probability witness
(:mod:`prob_witness`), and an independent Fock-basis brute-force check
(:mod:`fockbasis`).
"""

from .witness import (
    BoundaryPoint,
    G2Point,
    IntensityMoments,
    MomentPair,
    Verdict,
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
from .states import (
    ChannelSpec,
    FockSpec,
    GaussianSpec,
    MixtureSpec,
    NoiseSpec,
    PhotonPMF,
    apply_channel,
    apply_loss_pmf,
    attenuate,
    coherent,
    correct_channel,
    gaussian_moments,
    lossy_fock_moments,
    lossy_fock_probs,
    mixture_moments,
    optimal_dsv_for_mean,
    photon_added_thermal_moments,
    photon_added_thermal_pmf,
    poissonian_noise,
    thermal,
    thermal_noise,
    squeezed_vacuum,
    vacuum,
)
from .measurement import (
    GainEstimate,
    QuadratureStats,
    SampleSet,
    double_homodyne_correct,
    homodyne_moments,
    phase_random_moments,
    pia_forward,
    pia_invert,
    q_boundary,
    sample_phase_random,
    sample_quadrature,
)
from .depth import (
    DepthResult,
    FamilyCurve,
    asymptotic_fock_depth,
    depth_with_noise,
    pats_threshold,
    qng_depth_moment,
    qng_depth_prob,
)
from .prob_witness import (
    ProbPoint,
    classify_probs,
    converted_curve,
    p0_star,
    p0p1_curve,
    s2_bound_from_prob,
)
from .fockbasis import build_gaussian_state, pmf_of, tightness_scan

__version__ = "0.1.0"
