"""Moment estimators and samplers for the supported measurement schemes.

Covered schemes:

* four-direction homodyne (0, pi/4, pi/2, 3pi/4) giving (m, s2) from second
  and fourth quadrature moments;
* homodyne with a phase-random local oscillator (single direction of the
  phase-randomized state);
* double parametric homodyne, where both quadratures are read out behind a
  balanced splitter and the vacuum admixture is corrected out;
* phase-insensitive amplification with the forward moment map, its inversion
  and a conservative gain choice.

All quadratures use the convention with vacuum variance 1/4.  Samplers are
deterministic functions of (state, direction, count, seed) built on
``numpy.random.default_rng``; Fock-state quadratures are drawn by inverse CDF
on a tabulated grid of the Hermite-function density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np
from numpy.polynomial import hermite as np_hermite
from scipy.integrate import cumulative_trapezoid

from .states import FockSpec, GaussianSpec, MixtureSpec
from .witness import MomentPair

__all__ = [
    "HOMODYNE_ANGLES",
    "QuadratureStats",
    "GainEstimate",
    "AmplifiedMoments",
    "SampleSet",
    "DoubleHomodyneResult",
    "quadrature_moments",
    "quadrature_stats",
    "phase_averaged_moments",
    "homodyne_moments",
    "phase_random_moments",
    "q_boundary",
    "moments_from_quadratures",
    "sample_quadrature",
    "sample_phase_random",
    "sample_double_homodyne",
    "estimate_power_moments",
    "double_homodyne_forward",
    "double_homodyne_correct",
    "pia_forward",
    "pia_invert",
]

HOMODYNE_ANGLES = (0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4)

_VAC_Q2 = 0.25
_VAC_Q4 = 3.0 / 16.0

# Fock inverse-CDF tabulation: support half-width sqrt(2n+1) + 6 and a grid
# fine enough for ~1e-6 CDF accuracy.
_FOCK_GRID_POINTS = 40001
_FOCK_MAX_N = 60


@dataclass(frozen=True)
class QuadratureStats:
    """Second and fourth quadrature moments in the four homodyne directions."""

    q2: Mapping[float, float]
    q4: Mapping[float, float]

    def __post_init__(self):
        q2 = {self._canonical(phi): float(v) for phi, v in self.q2.items()}
        q4 = {self._canonical(phi): float(v) for phi, v in self.q4.items()}
        missing = [phi for phi in HOMODYNE_ANGLES if phi not in q2 or phi not in q4]
        if missing:
            raise ValueError(f"missing homodyne directions: {missing}")
        for phi in HOMODYNE_ANGLES:
            if q4[phi] < q2[phi] ** 2 - 1e-9:
                raise ValueError(
                    f"Jensen violation at phi={phi}: <q^4> = {q4[phi]} < <q^2>^2 = {q2[phi]**2}"
                )
        object.__setattr__(self, "q2", q2)
        object.__setattr__(self, "q4", q4)

    @staticmethod
    def _canonical(phi: float) -> float:
        for ref in HOMODYNE_ANGLES:
            if abs(float(phi) - ref) < 1e-9:
                return ref
        raise ValueError(f"direction {phi} is not one of the four homodyne angles")

    def sum_q2(self) -> float:
        return sum(self.q2[phi] for phi in HOMODYNE_ANGLES)

    def sum_q4(self) -> float:
        return sum(self.q4[phi] for phi in HOMODYNE_ANGLES)


def homodyne_moments(stats: QuadratureStats) -> MomentPair:
    """Photon moments from four-direction homodyne:

    m = (sum <q^2> - 1)/2, s2 = (2/3) sum <q^4> - (sum <q^2>)^2/4 - 1/4.
    """
    s2sum = stats.sum_q2()
    return MomentPair(
        0.5 * (s2sum - 1.0),
        (2.0 / 3.0) * stats.sum_q4() - 0.25 * s2sum**2 - 0.25,
    )


def phase_random_moments(q2: float, q4: float) -> MomentPair:
    """Photon moments from one quadrature of the phase-randomized state:

    m = 2 <q^2> - 1/2, s2 = (8/3) <q^4> - 4 <q^2>^2 - 1/4.
    """
    if not (math.isfinite(q2) and math.isfinite(q4)):
        raise ValueError("quadrature moments must be finite")
    if q4 < q2**2 - 1e-9 or q2 < 0:
        raise ValueError(f"Jensen violation: <q^4> = {q4} < <q^2>^2 = {q2**2}")
    return MomentPair(2 * q2 - 0.5, (8.0 / 3.0) * q4 - 4 * q2**2 - 0.25)


def q_boundary(r: float) -> tuple[float, float]:
    """QNG boundary in averaged quadrature moments:

    Q2 = (e^{6r} + e^{-2r})/8, Q4 = 3[e^{12r} + 8 e^{4r} - 4 + 3 e^{-4r}]/128.
    """
    if not math.isfinite(r) or r < 0:
        raise ValueError(f"squeezing parameter must be finite and >= 0, got {r}")
    q2 = (math.exp(6 * r) + math.exp(-2 * r)) / 8.0
    q4 = 3.0 / 128.0 * (math.exp(12 * r) + 8 * math.exp(4 * r) - 4 + 3 * math.exp(-4 * r))
    return q2, q4


def moments_from_quadratures(
    x2: float, x4: float, p2: float, p4: float, cov_x2p2: float
) -> MomentPair:
    """Photon moments from full quadrature statistics of one state:

    m = <x^2> + <p^2> - 1/2,
    s2 = Var x^2 + Var p^2 + 2 cov(x^2, p^2) - 1/4,
    with all moments taken against the Wigner function.
    """
    return MomentPair(
        x2 + p2 - 0.5,
        (x4 - x2**2) + (p4 - p2**2) + 2 * cov_x2p2 - 0.25,
    )


# ---------------------------------------------------------------------------
# analytic quadrature moments per state


def _gaussian_direction(state: GaussianSpec, phi: float) -> tuple[float, float]:
    """Mean and variance of q_phi = x cos(phi) + p sin(phi) for one Gaussian."""
    e = np.array([math.cos(phi), math.sin(phi)])
    var = float(e @ state.covariance() @ e)
    mu = state.dx * e[0] + state.dp * e[1]
    return mu, var


def quadrature_moments(state, phi: float) -> tuple[float, float]:
    """(<q^2>, <q^4>) in direction phi for a Gaussian, mixture or Fock state."""
    if isinstance(state, GaussianSpec):
        mu, v = _gaussian_direction(state, phi)
        return v + mu**2, 3 * v**2 + 6 * v * mu**2 + mu**4
    if isinstance(state, MixtureSpec):
        parts = [quadrature_moments(g, phi) for _, g in state.components]
        weights = [w for w, _ in state.components]
        return (
            sum(w * p[0] for w, p in zip(weights, parts)),
            sum(w * p[1] for w, p in zip(weights, parts)),
        )
    if isinstance(state, FockSpec):
        # phase-symmetric; a lossy Fock state is a binomial mixture of Fock
        # states with <q^2> = (2k+1)/4 and <q^4> = 3(2k^2+2k+1)/16
        k = np.arange(state.n + 1)
        w = state.number_weights()
        return (
            float(w @ ((2 * k + 1) / 4.0)),
            float(w @ (3 * (2 * k**2 + 2 * k + 1) / 16.0)),
        )
    raise ValueError(f"unsupported state kind: {type(state).__name__}")


def quadrature_stats(state) -> QuadratureStats:
    """Analytic four-direction statistics of a supported state."""
    pairs = {phi: quadrature_moments(state, phi) for phi in HOMODYNE_ANGLES}
    return QuadratureStats(
        q2={phi: v[0] for phi, v in pairs.items()},
        q4={phi: v[1] for phi, v in pairs.items()},
    )


def phase_averaged_moments(state) -> tuple[float, float]:
    """Phase-averaged (<q^2>, <q^4>) of a state.

    The average over the four homodyne directions equals the full continuous
    phase average because q^2 and q^4 are trigonometric polynomials in phi of
    degree at most four.
    """
    stats = quadrature_stats(state)
    return stats.sum_q2() / 4.0, stats.sum_q4() / 4.0


# ---------------------------------------------------------------------------
# samplers


@dataclass(frozen=True)
class SampleSet:
    """Quadrature samples with their provenance."""

    values: np.ndarray
    seed: int
    source: str
    phi: float = math.nan

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("sample set must be a non-empty 1-d vector")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def to_csv(self, path) -> None:
        """One value per line, header '# state=<desc> phi=<rad> seed=<int>'."""
        lines = [f"# state={self.source} phi={self.phi!r} seed={self.seed}"]
        lines.extend(repr(float(v)) for v in self.values)
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def from_csv(cls, path) -> "SampleSet":
        text = Path(path).read_text().strip().splitlines()
        header = text[0]
        if not header.startswith("# state="):
            raise ValueError("missing sample-set header")
        fields = dict(
            part.split("=", 1) for part in header[2:].split() if "=" in part
        )
        values = np.array([float(line) for line in text[1:]])
        return cls(
            values=values,
            seed=int(fields["seed"]),
            source=fields["state"],
            phi=float(fields["phi"]),
        )


def _fock_quadrature_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Grid and CDF of the Fock-n quadrature density
    sqrt(2/pi) H_n(sqrt 2 q)^2 exp(-2 q^2) / (2^n n!)."""
    if n > _FOCK_MAX_N:
        raise ValueError(f"Fock quadrature sampling supports n <= {_FOCK_MAX_N}")
    half_width = math.sqrt(2 * n + 1) + 6.0
    grid = np.linspace(-half_width, half_width, _FOCK_GRID_POINTS)
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    herm = np_hermite.hermval(np.sqrt(2.0) * grid, coeffs)
    density = (
        math.sqrt(2.0 / math.pi)
        / (2.0**n * math.factorial(n))
        * herm**2
        * np.exp(-2.0 * grid**2)
    )
    cdf = np.concatenate([[0.0], cumulative_trapezoid(density, grid)])
    cdf /= cdf[-1]
    return grid, cdf


def _sample_fock_fixed(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    grid, cdf = _fock_quadrature_table(n)
    return np.interp(rng.random(count), cdf, grid)


def _describe(state) -> str:
    if isinstance(state, GaussianSpec):
        return (
            f"gaussian(sigma2={state.sigma2:g},r={state.r:g},phi={state.phi:g},"
            f"dx={state.dx:g},dp={state.dp:g})"
        )
    if isinstance(state, MixtureSpec):
        return "mixture[" + ",".join(f"{w:g}*{_describe(g)}" for w, g in state.components) + "]"
    if isinstance(state, FockSpec):
        return f"fock(n={state.n},eta={state.eta:g})"
    return type(state).__name__


def _draw_quadrature(state, phi, count, rng) -> np.ndarray:
    if isinstance(state, GaussianSpec):
        mu, v = _gaussian_direction(state, phi)
        return rng.normal(mu, math.sqrt(v), count)
    if isinstance(state, MixtureSpec):
        weights = np.array([w for w, _ in state.components])
        choice = rng.choice(len(weights), size=count, p=weights / weights.sum())
        out = np.empty(count)
        for idx, (_, comp) in enumerate(state.components):
            mask = choice == idx
            if mask.any():
                mu, v = _gaussian_direction(comp, phi)
                out[mask] = rng.normal(mu, math.sqrt(v), int(mask.sum()))
        return out
    if isinstance(state, FockSpec):
        if state.eta < 1.0:
            surviving = rng.binomial(state.n, state.eta, count)
        else:
            surviving = np.full(count, state.n)
        out = np.empty(count)
        for k in np.unique(surviving):
            mask = surviving == k
            out[mask] = _sample_fock_fixed(int(k), int(mask.sum()), rng)
        return out
    raise ValueError(f"unsupported state kind: {type(state).__name__}")


def sample_quadrature(state, phi: float, count: int, seed: int) -> SampleSet:
    """Draw i.i.d. quadrature outcomes in direction phi; deterministic in seed."""
    if count < 1:
        raise ValueError(f"sample count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    values = _draw_quadrature(state, float(phi), int(count), rng)
    return SampleSet(values=values, seed=seed, source=_describe(state), phi=float(phi))


def sample_phase_random(state, count: int, seed: int) -> SampleSet:
    """Quadrature outcomes with a phase-random local oscillator.

    Each shot measures a uniformly random direction, which is equivalent to a
    fixed direction on the phase-randomized state.
    """
    if count < 1:
        raise ValueError(f"sample count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    if isinstance(state, FockSpec):
        # phase symmetric already
        values = _draw_quadrature(state, 0.0, int(count), rng)
    elif isinstance(state, GaussianSpec):
        phis = rng.uniform(0.0, 2 * math.pi, count)
        cov = state.covariance()
        cosp, sinp = np.cos(phis), np.sin(phis)
        vs = cov[0, 0] * cosp**2 + cov[1, 1] * sinp**2 + 2 * cov[0, 1] * cosp * sinp
        mus = state.dx * cosp + state.dp * sinp
        values = rng.normal(mus, np.sqrt(vs))
    elif isinstance(state, MixtureSpec):
        weights = np.array([w for w, _ in state.components])
        choice = rng.choice(len(weights), size=count, p=weights / weights.sum())
        phis = rng.uniform(0.0, 2 * math.pi, count)
        cosp, sinp = np.cos(phis), np.sin(phis)
        mus = np.empty(count)
        vs = np.empty(count)
        for idx, (_, comp) in enumerate(state.components):
            mask = choice == idx
            if mask.any():
                cov = comp.covariance()
                vs[mask] = (
                    cov[0, 0] * cosp[mask] ** 2
                    + cov[1, 1] * sinp[mask] ** 2
                    + 2 * cov[0, 1] * cosp[mask] * sinp[mask]
                )
                mus[mask] = comp.dx * cosp[mask] + comp.dp * sinp[mask]
        values = rng.normal(mus, np.sqrt(vs))
    else:
        raise ValueError(f"unsupported state kind: {type(state).__name__}")
    return SampleSet(values=values, seed=seed, source=_describe(state) + "+phase-random")


def estimate_power_moments(values: np.ndarray) -> dict:
    """Plain sample means of q^2 and q^4 with standard errors and covariance."""
    values = np.asarray(values, dtype=float)
    n = values.size
    sq = values**2
    qu = sq**2
    q2, q4 = float(sq.mean()), float(qu.mean())
    cov = np.cov(np.vstack([sq, qu]), ddof=1) / n
    return {
        "q2": q2,
        "q4": q4,
        "se_q2": float(np.sqrt(cov[0, 0])),
        "se_q4": float(np.sqrt(cov[1, 1])),
        "cov_q2_q4": float(cov[0, 1]),
        "count": int(n),
    }


# ---------------------------------------------------------------------------
# double parametric homodyne


@dataclass(frozen=True)
class DoubleHomodyneResult:
    """Corrected input moments recovered from a double homodyne measurement."""

    moments: MomentPair
    x2: float
    x4: float
    p2: float
    p4: float
    cov_x2p2: float
    nonphysical: bool


def double_homodyne_forward(
    x2: float, x4: float, p2: float, p4: float, cov_x2p2: float
) -> tuple[float, float, float, float, float]:
    """Measured arm moments when the input meets vacuum on a balanced splitter.

    Each arm sees q' = (q0 + q_vac)/sqrt 2, so
    <q'^2> = <q0^2>/2 + 1/8 and <q'^4> = [<q0^4> + (3/2)<q0^2> + 3/16]/4,
    where 3/16 is the vacuum fourth moment; the squared-quadrature covariance
    across the arms only picks up the factor 1/4.
    """
    return (
        0.5 * x2 + 0.125,
        0.25 * (x4 + 1.5 * x2 + _VAC_Q4),
        0.5 * p2 + 0.125,
        0.25 * (p4 + 1.5 * p2 + _VAC_Q4),
        0.25 * cov_x2p2,
    )


def double_homodyne_correct(
    x2_meas: float, x4_meas: float, p2_meas: float, p4_meas: float, cov_meas: float
) -> DoubleHomodyneResult:
    """Invert the vacuum admixture of the double homodyne scheme.

    Returns the input-state quadrature moments and the assembled photon
    moments; a Jensen violation after inversion marks the result nonphysical
    (it is reported, not clamped).
    """
    x2 = 2.0 * x2_meas - _VAC_Q2
    p2 = 2.0 * p2_meas - _VAC_Q2
    x4 = 4.0 * x4_meas - 1.5 * x2 - _VAC_Q4
    p4 = 4.0 * p4_meas - 1.5 * p2 - _VAC_Q4
    cov = 4.0 * cov_meas
    nonphysical = x2 < 0 or p2 < 0 or x4 < x2**2 - 1e-9 or p4 < p2**2 - 1e-9
    return DoubleHomodyneResult(
        moments=moments_from_quadratures(x2, x4, p2, p4, cov),
        x2=x2,
        x4=x4,
        p2=p2,
        p4=p4,
        cov_x2p2=cov,
        nonphysical=nonphysical,
    )


def sample_double_homodyne(state, count: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Joint samples (x arm, p arm) of the double homodyne readout.

    Only Gaussian states and their mixtures are supported: the scheme samples
    the joint Wigner distribution, which must be a true probability density.
    """
    if count < 1:
        raise ValueError(f"sample count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    if isinstance(state, GaussianSpec):
        xp = rng.multivariate_normal(state.displacement(), state.covariance(), count)
    elif isinstance(state, MixtureSpec):
        weights = np.array([w for w, _ in state.components])
        choice = rng.choice(len(weights), size=count, p=weights / weights.sum())
        xp = np.empty((count, 2))
        for idx, (_, comp) in enumerate(state.components):
            mask = choice == idx
            if mask.any():
                xp[mask] = rng.multivariate_normal(
                    comp.displacement(), comp.covariance(), int(mask.sum())
                )
    else:
        raise ValueError(
            f"double homodyne sampling needs a positive Wigner function; "
            f"unsupported state kind: {type(state).__name__}"
        )
    vac = rng.normal(0.0, math.sqrt(_VAC_Q2), (count, 2))
    x_arm = (xp[:, 0] + vac[:, 0]) / math.sqrt(2.0)
    p_arm = (xp[:, 1] - vac[:, 1]) / math.sqrt(2.0)
    return x_arm, p_arm


# ---------------------------------------------------------------------------
# phase-insensitive amplification


@dataclass(frozen=True)
class GainEstimate:
    """Amplifier gain point estimate with its confidence interval."""

    g_est: float
    g_min: float
    g_max: float

    def __post_init__(self):
        if not (self.g_min > 1.0):
            raise ValueError(f"gain lower bound must exceed 1, got {self.g_min}")
        if not (self.g_min <= self.g_est <= self.g_max):
            raise ValueError(
                f"gain interval must satisfy g_min <= g_est <= g_max, got "
                f"({self.g_min}, {self.g_est}, {self.g_max})"
            )

    @classmethod
    def exact(cls, gain: float) -> "GainEstimate":
        return cls(gain, gain, gain)


@dataclass(frozen=True)
class AmplifiedMoments:
    """Photon moments after phase-insensitive amplification."""

    M: float
    S2: float
    W2: float


def pia_forward(p: MomentPair, gain: float) -> AmplifiedMoments:
    """Amplified moments with a vacuum idler:

    M = m G + G - 1,
    S2 = G^2 s2 + G(G-1) m + (3G^2 - 2G - 1)/4,
    W2 = S2 + M^2 - M.
    """
    if not (gain > 1.0):
        raise ValueError(f"amplifier gain must exceed 1, got {gain}")
    big_m = p.m * gain + gain - 1.0
    big_s2 = gain**2 * p.s2 + gain * (gain - 1.0) * p.m + (3 * gain**2 - 2 * gain - 1) / 4.0
    return AmplifiedMoments(big_m, big_s2, big_s2 + big_m**2 - big_m)


def pia_invert(
    big_m: float, big_s2: float, gain: GainEstimate, mode: str = "point"
) -> MomentPair:
    """Invert the amplifier map with the point-estimate or conservative gain.

    Conservative mode uses g_min, which can only move the estimate away from
    the QNG region, so it never over-claims.  Results can leave the physical
    region under gain misestimation; they are returned unclamped and flagged
    downstream.
    """
    if mode not in ("point", "conservative"):
        raise ValueError(f"mode must be 'point' or 'conservative', got {mode!r}")
    g = gain.g_est if mode == "point" else gain.g_min
    m = (big_m - (g - 1.0)) / g
    s2 = (big_s2 - g * (g - 1.0) * m - (3 * g**2 - 2 * g - 1) / 4.0) / g**2
    return MomentPair(m, s2)


