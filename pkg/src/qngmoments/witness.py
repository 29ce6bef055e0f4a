"""Quantum non-Gaussianity (QNG) witness on photon-number mean and variance.

Mixtures of Gaussian states obey a sharp lower bound on the photon-number
variance ``s2`` at a fixed mean ``m``.  The bound is the parametric curve

    m(r)  = exp(6r)/4 - 1/2 + exp(-2r)/4
    s2(r) = 3 exp(4r)/8 - 1/2 + exp(-4r)/8,       r >= 0,

traced out by displaced squeezed vacuum states with optimally chosen
displacement.  A measured pair (m, s2) strictly below the curve certifies
that the state cannot be written as any mixture of Gaussian states.

The same region can be expressed through the non-centered second moment
``<N^2> = m^2 + s2``, the integrated-intensity moments ``<W> = m`` and
``<W^2> = <N^2> - m``, the second-order correlation
``g2 = 1 + s2/m^2 - 1/m``, or the Fano factor ``s2/m``; this module provides
all of these formulations, the curve inversion, and point classification.

All boundary evaluations use ``expm1`` so that the small-r regime (where the
raw exponential terms cancel to ~10^-16 of their magnitude) keeps full
relative precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "BOUNDARY_BAND",
    "MAX_SQUEEZING",
    "MEAN_DEGENERACY",
    "VerdictTag",
    "Verdict",
    "MomentPair",
    "IntensityMoments",
    "G2Point",
    "BoundaryPoint",
    "boundary_mean",
    "boundary_variance",
    "ng_boundary",
    "ng_inverse_mean",
    "boundary_variance_at_mean",
    "nonparametric_min_mean",
    "boundary_second_moment",
    "boundary_intensity",
    "boundary_g2",
    "g2_asymptotic",
    "boundary_fano",
    "multimode_identical_boundary",
    "classify_moments",
    "classify_intensity",
    "classify_g2",
    "classify_fano",
]

# Strict-inequality guard: points within this band of the boundary are never
# certified, so floating-point ties cannot produce a false QNG verdict.
BOUNDARY_BAND = 1e-9

# exp(6r) overflows double precision near r = 51.3; m(50) ~ 4.7e129 already
# exceeds any physically meaningful photon number.
MAX_SQUEEZING = 50.0

# Below this mean the curve is degenerate at the origin and the boundary
# variance is treated as exactly zero.
MEAN_DEGENERACY = 1e-12


class VerdictTag(Enum):
    QNG = "QNG"
    NONCLASSICAL_ONLY = "NONCLASSICAL_ONLY"
    UNWITNESSED = "UNWITNESSED"
    INVALID = "INVALID"


@dataclass(frozen=True)
class Verdict:
    """Classification outcome.

    ``margin`` is the signed distance in s2 at fixed m to the QNG boundary
    (negative means below the boundary).  For probability-space verdicts the
    margin is the signed distance in p1 at fixed p0, with the same sign
    convention.  ``margin`` is NaN when it cannot be computed.
    """

    tag: VerdictTag
    margin: float
    reason: str = ""

    @property
    def is_qng(self) -> bool:
        return self.tag is VerdictTag.QNG


@dataclass(frozen=True)
class MomentPair:
    """Photon-number mean ``m`` and variance ``s2`` (both dimensionless).

    Instances are plain value carriers: out-of-range fields are allowed so
    that loss/noise/gain corrections can return nonphysical points, which are
    then flagged (never silently accepted) by :func:`classify_moments`.
    """

    m: float
    s2: float

    def violations(self) -> tuple[str, ...]:
        """Physicality violations of this pair, empty if none.

        Besides non-negativity, integer-valued photon statistics with mean
        m < 1 must have variance at least m(1 - m) (the two-level bound).
        """
        out = []
        if not (math.isfinite(self.m) and math.isfinite(self.s2)):
            out.append("non-finite moment")
            return tuple(out)
        # negativity is judged with a conversion-roundtrip noise allowance
        # scaled to the second moment, so edge states like Fock |n> (s2 = 0)
        # survive representation roundtrips
        tol = 1e-12 * max(1.0, self.m * self.m, abs(self.s2))
        if self.m < -tol:
            out.append("negative mean")
        if self.s2 < -tol:
            out.append("negative variance")
        if 0 <= self.m < 1 and self.s2 < self.m * (1 - self.m) - BOUNDARY_BAND:
            out.append("variance below integer-statistics floor m(1-m)")
        return tuple(out)

    @property
    def is_physical(self) -> bool:
        return not self.violations()

    def second_moment(self) -> float:
        """Non-centered second moment <N^2> = m^2 + s2."""
        return self.m * self.m + self.s2

    def to_intensity(self) -> "IntensityMoments":
        """Integrated-intensity moments: <W> = m, <W^2> = <N^2> - m."""
        return IntensityMoments(self.m, self.second_moment() - self.m)

    def to_g2(self) -> "G2Point":
        if self.m <= 0:
            raise ValueError("g2 is undefined for m <= 0")
        g2 = 1.0 + self.s2 / self.m**2 - 1.0 / self.m
        return G2Point(self.m, g2)

    def fano(self) -> float:
        if self.m <= 0:
            raise ValueError("Fano factor is undefined for m <= 0")
        return self.s2 / self.m


@dataclass(frozen=True)
class IntensityMoments:
    """First and second moments of the integrated intensity W.

    Note that w2 >= w1^2 is the *classical* bound, not a validity condition:
    sub-Poissonian light violates it by construction (its intensity
    quasi-distribution is not a probability), and the QNG region lies inside
    the sub-Poissonian one.  The hard floor is w2 >= w1^2 - w1, which is
    s2 >= 0 of the converted photon moments.
    """

    w1: float
    w2: float

    def violations(self) -> tuple[str, ...]:
        out = []
        if not (math.isfinite(self.w1) and math.isfinite(self.w2)):
            return ("non-finite intensity moment",)
        if self.w1 < 0:
            out.append("negative mean intensity")
        if self.w2 < 0:
            out.append("negative second intensity moment")
        return tuple(out)

    @property
    def is_classical_compatible(self) -> bool:
        """Whether a true (classical) intensity distribution could carry these."""
        return self.w2 >= self.w1**2

    def to_moments(self) -> MomentPair:
        """Photon-number moments: m = w1, s2 = w2 + w1 - w1^2."""
        return MomentPair(self.w1, self.w2 + self.w1 - self.w1**2)


@dataclass(frozen=True)
class G2Point:
    """Mean photon number and second-order correlation g2(0)."""

    m: float
    g2: float

    def to_moments(self) -> MomentPair:
        """Invert g2 = 1 + s2/m^2 - 1/m at the stored mean."""
        return MomentPair(self.m, self.m**2 * (self.g2 - 1.0) + self.m)


@dataclass(frozen=True)
class BoundaryPoint:
    """Point on the minimum-variance curve with its parameter r."""

    r: float
    m: float
    s2: float

    def moments(self) -> MomentPair:
        return MomentPair(self.m, self.s2)


def _check_r(r: float, positive: bool = False) -> float:
    r = float(r)
    if not math.isfinite(r):
        raise ValueError(f"squeezing parameter must be finite, got {r}")
    if positive and r <= 0:
        raise ValueError(f"squeezing parameter must be > 0, got {r}")
    if r < 0:
        raise ValueError(f"squeezing parameter must be >= 0, got {r}")
    if r > MAX_SQUEEZING:
        raise ValueError(f"squeezing parameter {r} exceeds overflow guard {MAX_SQUEEZING}")
    return r


def boundary_mean(r: float) -> float:
    """Minimum-variance-curve mean m(r) = exp(6r)/4 - 1/2 + exp(-2r)/4."""
    r = _check_r(r)
    return (math.expm1(6 * r) + math.expm1(-2 * r)) / 4.0


def boundary_variance(r: float) -> float:
    """Minimum-variance-curve variance s2(r) = 3exp(4r)/8 - 1/2 + exp(-4r)/8."""
    r = _check_r(r)
    return (3 * math.expm1(4 * r) + math.expm1(-4 * r)) / 8.0


def ng_boundary(r: float) -> BoundaryPoint:
    """Evaluate the QNG boundary curve at squeezing parameter r >= 0."""
    r = _check_r(r)
    return BoundaryPoint(r, boundary_mean(r), boundary_variance(r))


def ng_inverse_mean(m: float) -> float:
    """Unique r >= 0 with boundary_mean(r) = m.

    The curve mean is smooth and strictly increasing, so bracketed bisection
    on [0, r_hi] is unconditionally safe; refined to |dr| < 1e-14.
    """
    m = float(m)
    if not math.isfinite(m) or m < 0:
        raise ValueError(f"mean must be finite and >= 0, got {m}")
    if m <= 0:
        return 0.0
    lo = 0.0
    hi = max(1.0, math.log(4 * m + 2) / 6 + 1.0)
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if boundary_mean(mid) < m:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def boundary_variance_at_mean(m: float) -> float:
    """Boundary variance s2(r(m)); zero below the origin degeneracy cutoff."""
    m = float(m)
    if not math.isfinite(m) or m < 0:
        raise ValueError(f"mean must be finite and >= 0, got {m}")
    if m < MEAN_DEGENERACY:
        return 0.0
    return boundary_variance(ng_inverse_mean(m))


def nonparametric_min_mean(s2: float) -> float:
    """Closed-form mean threshold: QNG requires m strictly above this value.

    This is the non-parametric companion of the boundary curve, obtained by
    eliminating r: with A = 4 s2 + sqrt(16 s2 (s2+1) + 1) + 2 the threshold is
    A^(3/2)/(12 sqrt 3) + sqrt(3)/(4 sqrt A) - 1/2.
    """
    s2 = float(s2)
    if not math.isfinite(s2) or s2 < 0:
        raise ValueError(f"variance must be finite and >= 0, got {s2}")
    a = 4 * s2 + math.sqrt(16 * s2 * (s2 + 1) + 1) + 2
    return a**1.5 / (12 * math.sqrt(3)) + math.sqrt(3) / (4 * math.sqrt(a)) - 0.5


def boundary_second_moment(r: float) -> float:
    """Lower bound on <N^2> at the curve mean m(r) for Gaussian mixtures."""
    r = _check_r(r)
    return (
        math.expm1(12 * r) / 16
        - math.expm1(6 * r) / 4
        + math.expm1(4 * r) / 2
        - math.expm1(-2 * r) / 4
        + 3 * math.expm1(-4 * r) / 16
    )


def boundary_intensity(r: float) -> IntensityMoments:
    """Boundary in integrated-intensity form: (<W>, <W^2>) = (m, <N^2> - m)."""
    r = _check_r(r)
    w2 = (
        math.expm1(12 * r) / 16
        - math.expm1(6 * r) / 2
        + math.expm1(4 * r) / 2
        - math.expm1(-2 * r) / 2
        + 3 * math.expm1(-4 * r) / 16
    )
    return IntensityMoments(boundary_mean(r), w2)


def boundary_g2(r: float) -> G2Point:
    """Boundary in (m, g2) form; requires r > 0 so that the mean is positive."""
    r = _check_r(r, positive=True)
    m = boundary_mean(r)
    # (m^2 + s2 - m)/m^2 = <W^2>/<W>^2; both factors are expm1-stable.
    w2 = boundary_intensity(r).w2
    return G2Point(m, w2 / (m * m))


def g2_asymptotic(m: float) -> float:
    """Large-mean approximation of the boundary g2, approaching it from below."""
    m = float(m)
    if not math.isfinite(m) or m <= 0:
        raise ValueError(f"mean must be finite and > 0, got {m}")
    x = m + 0.5
    return 1.0 - 1.0 / x + 3.0 / (2 ** (5.0 / 3.0) * x ** (4.0 / 3.0)) - 1.0 / x**2


def boundary_fano(r: float) -> tuple[float, float]:
    """Boundary Fano factor s2(r)/m(r) with its mean; requires r > 0.

    The r -> 0+ limit of the ratio is 1 (both series start with r), i.e. the
    curve leaves the origin tangent to the Poissonian line s2 = m.
    """
    r = _check_r(r, positive=True)
    m = boundary_mean(r)
    return m, boundary_variance(r) / m


def multimode_identical_boundary(n_modes: int, r: float) -> MomentPair:
    """Boundary for n_modes identical copies: (M m(r), M^2 s2(r)).

    The single-mode curve (n_modes = 1) is the worst case: a point below it
    is below every higher-mode curve at the same total mean.
    """
    if int(n_modes) != n_modes or n_modes < 1:
        raise ValueError(f"number of modes must be an integer >= 1, got {n_modes}")
    n_modes = int(n_modes)
    r = _check_r(r)
    return MomentPair(n_modes * boundary_mean(r), n_modes**2 * boundary_variance(r))


def classify_moments(pair: MomentPair) -> Verdict:
    """Classify a (m, s2) pair against the QNG and nonclassicality borders.

    QNG requires s2 strictly below the boundary variance at the same mean;
    points within ``BOUNDARY_BAND`` of the boundary are UNWITNESSED so that
    floating-point ties never certify.  Nonphysical input is flagged INVALID,
    never silently classified.
    """
    bad = pair.violations()
    if bad:
        margin = math.nan
        if math.isfinite(pair.m) and math.isfinite(pair.s2) and pair.m >= 0:
            margin = pair.s2 - boundary_variance_at_mean(pair.m)
        return Verdict(VerdictTag.INVALID, margin, "; ".join(bad))
    margin = pair.s2 - boundary_variance_at_mean(max(pair.m, 0.0))
    if margin < -BOUNDARY_BAND:
        return Verdict(VerdictTag.QNG, margin)
    if abs(margin) <= BOUNDARY_BAND:
        return Verdict(VerdictTag.UNWITNESSED, margin, "within boundary exclusion band")
    # the nonclassicality border s2 < m is strict as well and gets the same
    # tie treatment (scaled, since both sides grow with the mean)
    if pair.s2 < pair.m - BOUNDARY_BAND * max(1.0, pair.m):
        return Verdict(VerdictTag.NONCLASSICAL_ONLY, margin)
    return Verdict(VerdictTag.UNWITNESSED, margin)


def classify_intensity(w: IntensityMoments) -> Verdict:
    """Classify integrated-intensity moments (<W>, <W^2>)."""
    bad = w.violations()
    if bad:
        return Verdict(VerdictTag.INVALID, math.nan, "; ".join(bad))
    return classify_moments(w.to_moments())


def classify_g2(point: G2Point) -> Verdict:
    """Classify a (m, g2) pair."""
    if not (math.isfinite(point.m) and math.isfinite(point.g2)):
        return Verdict(VerdictTag.INVALID, math.nan, "non-finite g2 input")
    if point.m <= 0 or point.g2 < 0:
        return Verdict(VerdictTag.INVALID, math.nan, "g2 point requires m > 0 and g2 >= 0")
    return classify_moments(point.to_moments())


def classify_fano(m: float, fano: float) -> Verdict:
    """Classify a (mean, Fano factor) pair."""
    if not (math.isfinite(m) and math.isfinite(fano)):
        return Verdict(VerdictTag.INVALID, math.nan, "non-finite Fano input")
    if m <= 0 or fano < 0:
        return Verdict(VerdictTag.INVALID, math.nan, "Fano point requires m > 0 and F >= 0")
    return classify_moments(MomentPair(m, fano * m))
