"""Analytic moment and probability models for the state families of interest.

Gaussian states are parameterized as a thermal state of variance
``sigma2 = (2 nbar + 1)/4`` squeezed along x by ``r``, rotated by ``phi`` and
displaced by ``(dx, dp)``; the quadrature convention puts the vacuum variance
at 1/4.  On top of single Gaussians and their mixtures, the module covers
lossy Fock states, photon-added thermal states (negative-binomial photon
statistics), binomial-thinning of photon-number distributions, and the
loss-plus-additive-noise channel acting on moment pairs, together with its
algebraic inverse used for measurement correction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .witness import MomentPair, ng_inverse_mean

__all__ = [
    "VACUUM_VARIANCE",
    "GaussianSpec",
    "MixtureSpec",
    "FockSpec",
    "PhotonPMF",
    "NoiseSpec",
    "ChannelSpec",
    "vacuum",
    "coherent",
    "thermal",
    "squeezed_vacuum",
    "gaussian_moments",
    "mix_moment_pairs",
    "mixture_moments",
    "lossy_fock_moments",
    "lossy_fock_probs",
    "fock_pmf",
    "photon_added_thermal_pmf",
    "photon_added_thermal_moments",
    "apply_loss_pmf",
    "poissonian_noise",
    "thermal_noise",
    "apply_channel",
    "correct_channel",
    "attenuate",
    "optimal_dsv_for_mean",
]

VACUUM_VARIANCE = 0.25

_PMF_TAIL_TARGET = 1e-10


@dataclass(frozen=True)
class GaussianSpec:
    """Single Gaussian state (sigma2, r, phi, dx, dp).

    ``sigma2`` is the isotropic variance of the initial thermal state and must
    respect the Heisenberg bound sigma2 >= 1/4.  ``phi`` is reduced modulo pi,
    which loses no generality for a centered ellipse orientation.
    """

    sigma2: float = VACUUM_VARIANCE
    r: float = 0.0
    phi: float = 0.0
    dx: float = 0.0
    dp: float = 0.0

    def __post_init__(self):
        for name in ("sigma2", "r", "phi", "dx", "dp"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"GaussianSpec.{name} must be finite")
        if self.sigma2 < VACUUM_VARIANCE - 1e-12:
            raise ValueError(f"sigma2 must be >= 1/4 (Heisenberg), got {self.sigma2}")
        if self.r < 0:
            raise ValueError(f"squeezing must be >= 0, got {self.r}")
        object.__setattr__(self, "phi", self.phi % math.pi)

    @property
    def nbar(self) -> float:
        """Mean photon number of the underlying thermal state."""
        return 2 * self.sigma2 - 0.5

    def covariance(self) -> np.ndarray:
        """2x2 quadrature covariance matrix (vacuum variance 1/4)."""
        c, s = math.cos(self.phi), math.sin(self.phi)
        rot = np.array([[c, -s], [s, c]])
        core = np.diag([self.sigma2 * math.exp(-2 * self.r), self.sigma2 * math.exp(2 * self.r)])
        return rot @ core @ rot.T

    def displacement(self) -> np.ndarray:
        return np.array([self.dx, self.dp])


def vacuum() -> GaussianSpec:
    return GaussianSpec()


def coherent(alpha_x: float, alpha_p: float = 0.0) -> GaussianSpec:
    return GaussianSpec(dx=alpha_x, dp=alpha_p)


def thermal(nbar: float) -> GaussianSpec:
    if nbar < 0:
        raise ValueError(f"thermal mean photon number must be >= 0, got {nbar}")
    return GaussianSpec(sigma2=(2 * nbar + 1) / 4)


def squeezed_vacuum(r: float, phi: float = 0.0) -> GaussianSpec:
    return GaussianSpec(r=r, phi=phi)


def gaussian_moments(g: GaussianSpec) -> MomentPair:
    """Photon-number mean and variance of a single Gaussian state.

    With covariance C and displacement d these are
    m = tr C + |d|^2 - 1/2 and s2 = 2 tr(C^2) + 4 d.C.d - 1/4, the moments of
    the quadratic form x^2 + p^2 - 1/2 under the Gaussian Wigner function.
    """
    cov = g.covariance()
    d = g.displacement()
    m = float(np.trace(cov) + d @ d - 0.5)
    s2 = float(2 * np.trace(cov @ cov) + 4 * d @ cov @ d - 0.25)
    return MomentPair(m, s2)


@dataclass(frozen=True)
class MixtureSpec:
    """Finite mixture of Gaussian states with probability weights."""

    components: tuple[tuple[float, GaussianSpec], ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("mixture must have at least one component")
        object.__setattr__(self, "components", tuple((float(w), g) for w, g in self.components))
        weights = [w for w, _ in self.components]
        if any(w < 0 for w in weights):
            raise ValueError("mixture weights must be non-negative")
        if abs(sum(weights) - 1.0) > 1e-12:
            raise ValueError(f"mixture weights must sum to 1, got {sum(weights)}")


def mix_moment_pairs(weighted: list[tuple[float, MomentPair]]) -> MomentPair:
    """Moments of a statistical mixture: means and <N^2> average linearly."""
    m = sum(w * p.m for w, p in weighted)
    n2 = sum(w * p.second_moment() for w, p in weighted)
    return MomentPair(m, n2 - m * m)


def mixture_moments(mix: MixtureSpec) -> MomentPair:
    return mix_moment_pairs([(w, gaussian_moments(g)) for w, g in mix.components])


@dataclass(frozen=True)
class FockSpec:
    """Fock state |n>, optionally after a beam splitter of transmittance eta."""

    n: int
    eta: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"Fock index must be an integer >= 0, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"transmittance must lie in [0, 1], got {self.eta}")

    def moments(self) -> MomentPair:
        return lossy_fock_moments(self.n, self.eta)

    def number_weights(self) -> np.ndarray:
        """Binomial photon-number distribution after the loss."""
        return stats.binom.pmf(np.arange(self.n + 1), self.n, self.eta)


def lossy_fock_moments(n: int, eta: float) -> MomentPair:
    """Moments of Fock |n> after transmittance eta: (eta n, eta(1-eta) n)."""
    if int(n) != n or n < 0:
        raise ValueError(f"Fock index must be an integer >= 0, got {n}")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmittance must lie in [0, 1], got {eta}")
    return MomentPair(eta * n, eta * (1 - eta) * n)


def lossy_fock_probs(n: int, eta: float) -> tuple[float, float]:
    """(p0, p1) of a lossy Fock state: ((1-eta)^n, n eta (1-eta)^(n-1))."""
    if int(n) != n or n < 1:
        raise ValueError(f"Fock index must be an integer >= 1, got {n}")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmittance must lie in [0, 1], got {eta}")
    return float((1 - eta) ** n), float(n * eta * (1 - eta) ** (n - 1))


@dataclass(frozen=True)
class PhotonPMF:
    """Truncated photon-number distribution with a bound on the lost tail."""

    probs: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise ValueError("probs must be a non-empty 1-d vector")
        if np.any(probs < -1e-12) or np.any(probs > 1 + 1e-12):
            raise ValueError("probabilities must lie in [0, 1]")
        probs = np.clip(probs, 0.0, 1.0)
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        total = probs.sum() + self.tail_bound
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities plus tail bound must sum to 1, got {total}")

    @property
    def cutoff(self) -> int:
        return self.probs.size - 1

    @property
    def p0(self) -> float:
        return float(self.probs[0])

    @property
    def p1(self) -> float:
        return float(self.probs[1]) if self.probs.size > 1 else 0.0

    def moments(self) -> MomentPair:
        n = np.arange(self.probs.size)
        m = float(self.probs @ n)
        return MomentPair(m, float(self.probs @ n**2) - m * m)


def fock_pmf(n: int, cutoff: int | None = None) -> PhotonPMF:
    if cutoff is None:
        cutoff = n
    if cutoff < n:
        raise ValueError("cutoff must be at least the Fock index")
    probs = np.zeros(cutoff + 1)
    probs[n] = 1.0
    return PhotonPMF(probs)


def photon_added_thermal_pmf(k: int, nbar: float, cutoff: int | None = None) -> PhotonPMF:
    """Photon-number distribution of a k-photon-added thermal state.

    p(n) = nbar^(n-k) / (1+nbar)^(n+1) * C(n, k) for n >= k, i.e. k plus a
    negative-binomial variable NB(k+1, 1/(1+nbar)).  The default cutoff keeps
    the negative-binomial tail below 1e-10.
    """
    if int(k) != k or k < 1:
        raise ValueError(f"number of added photons must be an integer >= 1, got {k}")
    k = int(k)
    if nbar < 0:
        raise ValueError(f"thermal mean must be >= 0, got {nbar}")
    if nbar == 0:
        if cutoff is None:
            cutoff = k
        return fock_pmf(k, cutoff)
    p_succ = 1.0 / (1.0 + nbar)
    if cutoff is None:
        cutoff = k + int(stats.nbinom.isf(_PMF_TAIL_TARGET, k + 1, p_succ)) + 2
    if cutoff < k:
        raise ValueError(f"cutoff {cutoff} is below the added-photon number {k}")
    probs = np.zeros(cutoff + 1)
    probs[k:] = stats.nbinom.pmf(np.arange(cutoff + 1 - k), k + 1, p_succ)
    tail = float(stats.nbinom.sf(cutoff - k, k + 1, p_succ))
    return PhotonPMF(probs, tail_bound=tail)


def photon_added_thermal_moments(k: int, nbar: float, eta: float = 1.0) -> MomentPair:
    """Moments of a lossy k-photon-added thermal state.

    m = eta [k + (k+1) nbar],
    s2 = eta^2 (k+1) nbar (nbar+1) + eta (1-eta) [k + (k+1) nbar].
    """
    if int(k) != k or k < 1:
        raise ValueError(f"number of added photons must be an integer >= 1, got {k}")
    if nbar < 0:
        raise ValueError(f"thermal mean must be >= 0, got {nbar}")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmittance must lie in [0, 1], got {eta}")
    mean0 = k + (k + 1) * nbar
    return MomentPair(eta * mean0, eta**2 * (k + 1) * nbar * (nbar + 1) + eta * (1 - eta) * mean0)


def apply_loss_pmf(pmf: PhotonPMF, eta: float) -> PhotonPMF:
    """Binomial thinning of a photon-number distribution.

    probs'[j] = sum_n probs[n] C(n, j) eta^j (1-eta)^(n-j).  Mass beyond the
    stored cutoff is carried over unchanged in the tail bound, which is
    conservative (thinning can only move tail mass downwards).
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmittance must lie in [0, 1], got {eta}")
    if eta == 1.0:
        return pmf
    n = np.arange(pmf.probs.size)
    thin = stats.binom.pmf(n[:, None], n[None, :], eta)
    return PhotonPMF(thin @ pmf.probs, tail_bound=pmf.tail_bound)


@dataclass(frozen=True)
class NoiseSpec:
    """Independent additive noise with given mean and variance."""

    m_noise: float = 0.0
    s2_noise: float = 0.0

    def __post_init__(self):
        if self.m_noise < 0 or self.s2_noise < 0:
            raise ValueError("noise mean and variance must be non-negative")


def poissonian_noise(nbar: float) -> NoiseSpec:
    """Poissonian background: m_noise = s2_noise = nbar."""
    return NoiseSpec(nbar, nbar)


def thermal_noise(nbar: float) -> NoiseSpec:
    """Thermal background: m_noise = nbar, s2_noise = nbar(nbar + 1)."""
    return NoiseSpec(nbar, nbar * (nbar + 1))


@dataclass(frozen=True)
class ChannelSpec:
    """Aggregate transmittance followed by independent additive noise."""

    eta: float
    noise: NoiseSpec = field(default_factory=NoiseSpec)

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"transmittance must lie in [0, 1], got {self.eta}")


def apply_channel(p: MomentPair, ch: ChannelSpec) -> MomentPair:
    """Loss-and-noise map: m' = eta m + m_n, s2' = eta(1-eta)m + eta^2 s2 + s2_n."""
    eta = ch.eta
    m = eta * p.m + ch.noise.m_noise
    s2 = eta * (1 - eta) * p.m + eta**2 * p.s2 + ch.noise.s2_noise
    return MomentPair(m, s2)


def correct_channel(observed: MomentPair, ch: ChannelSpec) -> MomentPair:
    """Exact algebraic inverse of :func:`apply_channel`.

    Overcorrection can leave the physical region (e.g. s2 < 0); the result is
    returned as-is and flagged by the classification path, never clamped.
    """
    if ch.eta == 0:
        raise ValueError("a zero-transmittance channel cannot be inverted")
    eta = ch.eta
    m = (observed.m - ch.noise.m_noise) / eta
    s2 = (observed.s2 - ch.noise.s2_noise - eta * (1 - eta) * m) / eta**2
    return MomentPair(m, s2)


def attenuate(state, eta: float):
    """State after a beam splitter of transmittance eta.

    Gaussian states stay Gaussian (C -> eta C + (1-eta)/4, d -> sqrt(eta) d,
    which this parameterization can always represent); mixtures transform
    componentwise and Fock states accumulate the transmittance.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmittance must lie in [0, 1], got {eta}")
    if isinstance(state, FockSpec):
        return FockSpec(state.n, state.eta * eta)
    if isinstance(state, MixtureSpec):
        return MixtureSpec(tuple((w, attenuate(g, eta)) for w, g in state.components))
    if isinstance(state, GaussianSpec):
        cov = eta * state.covariance() + (1 - eta) * VACUUM_VARIANCE * np.eye(2)
        # eigendecompose back into (sigma2, r, phi): eigenvalues are
        # sigma2 e^{-2r} <= sigma2 e^{2r}, the minor axis at angle phi
        evals, evecs = np.linalg.eigh(cov)
        sigma2 = math.sqrt(float(evals[0] * evals[1]))
        r = 0.25 * math.log(float(evals[1] / evals[0]))
        phi = math.atan2(float(evecs[1, 0]), float(evecs[0, 0]))
        scale = math.sqrt(eta)
        return GaussianSpec(sigma2=sigma2, r=r, phi=phi, dx=scale * state.dx, dp=scale * state.dp)
    raise ValueError(f"unsupported state kind: {type(state).__name__}")


def optimal_dsv_for_mean(m: float) -> GaussianSpec:
    """Displaced squeezed vacuum sitting on the QNG boundary at mean m.

    Squeezing solves boundary_mean(r) = m; the displacement (along x, positive
    root; photon statistics are phase-insensitive so the sign is free) is
    d^2 = e^{2r}(e^{4r} - 1)/4, which is non-negative for all r >= 0.
    """
    if not math.isfinite(m) or m < 0:
        raise ValueError(f"mean must be finite and >= 0, got {m}")
    r = ng_inverse_mean(m)
    d2 = math.exp(2 * r) * math.expm1(4 * r) / 4.0
    return GaussianSpec(r=r, dx=math.sqrt(max(d2, 0.0)))
