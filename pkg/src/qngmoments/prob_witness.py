"""QNG witness on vacuum and single-photon probabilities, and its conversion.

For mixtures of Gaussian states the single-photon probability p1 at a fixed
vacuum probability p0 cannot exceed the curve

    p0(r) = exp{-(e^{4r}-1)(1-tanh r)/4} / cosh r,
    p1(r) = (e^{4r}-1) exp{-(e^{4r}-1)(1-tanh r)/4} / (4 cosh^3 r),  r >= 0.

A measured pair strictly above the curve certifies quantum non-Gaussianity.
Assuming no support on three or more photons, the witness converts to a bound
on the photon-number variance valid for means up to 2; the conversion is used
to compare the probability-based and moment-based witnesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .witness import BOUNDARY_BAND, MomentPair, Verdict, VerdictTag

__all__ = [
    "ProbPoint",
    "curve_p0",
    "curve_p1",
    "p0p1_curve",
    "invert_curve_p0",
    "classify_probs",
    "prob_margin",
    "p0_star",
    "converted_curve",
    "s2_bound_from_prob",
    "probs_from_moments_p3zero",
]

# curve_p0 underflows to 0 near r = 3.66; r = 10 covers every representable p0.
_R_MAX = 10.0


@dataclass(frozen=True)
class ProbPoint:
    """Vacuum and single-photon probabilities."""

    p0: float
    p1: float

    def violations(self) -> tuple[str, ...]:
        out = []
        if not (math.isfinite(self.p0) and math.isfinite(self.p1)):
            return ("non-finite probability",)
        if not 0.0 <= self.p0 <= 1.0:
            out.append("p0 outside [0, 1]")
        if not 0.0 <= self.p1 <= 1.0:
            out.append("p1 outside [0, 1]")
        if self.p0 + self.p1 > 1.0 + 1e-12:
            out.append("p0 + p1 exceeds 1")
        return tuple(out)


def _check_r(r: float) -> float:
    r = float(r)
    if not math.isfinite(r) or r < 0:
        raise ValueError(f"squeezing parameter must be finite and >= 0, got {r}")
    return r


def curve_p0(r: float) -> float:
    r = _check_r(r)
    return math.exp(-0.25 * math.expm1(4 * r) * (1 - math.tanh(r))) / math.cosh(r)


def curve_p1(r: float) -> float:
    r = _check_r(r)
    expo = math.exp(-0.25 * math.expm1(4 * r) * (1 - math.tanh(r)))
    return math.expm1(4 * r) * expo / (4 * math.cosh(r) ** 3)


def p0p1_curve(r: float) -> ProbPoint:
    """Maximal-p1 curve of Gaussian mixtures, parameterized by r >= 0."""
    return ProbPoint(curve_p0(r), curve_p1(r))


def invert_curve_p0(p0: float) -> float:
    """Unique r with curve_p0(r) = p0 for p0 in (0, 1]; curve_p0 is strictly
    decreasing from 1 to 0."""
    if not 0.0 < p0 <= 1.0:
        raise ValueError(f"p0 must lie in (0, 1], got {p0}")
    if p0 >= 1.0:
        return 0.0
    lo, hi = 0.0, _R_MAX
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if curve_p0(mid) > p0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def prob_margin(p0: float, p1: float) -> float:
    """Signed distance in p1 to the witness curve at fixed p0 (negative = QNG).

    For p0 at or below the representable range of the curve its p1 -> 0 limit
    applies, so any p1 > 0 witnesses.
    """
    if p0 <= 0.0:
        return -p1
    return curve_p1(invert_curve_p0(p0)) - p1


def classify_probs(point: ProbPoint) -> Verdict:
    """Classify a (p0, p1) pair; QNG needs p1 strictly above the curve.

    The corner p0 = p1 = 0 is inconclusive and reports UNWITNESSED.
    """
    bad = point.violations()
    if bad:
        return Verdict(VerdictTag.INVALID, math.nan, "; ".join(bad))
    if point.p0 == 0.0 and point.p1 == 0.0:
        return Verdict(VerdictTag.UNWITNESSED, 0.0, "p0 = p1 = 0 is inconclusive")
    margin = prob_margin(point.p0, point.p1)
    if margin < -BOUNDARY_BAND:
        return Verdict(VerdictTag.QNG, margin)
    if abs(margin) <= BOUNDARY_BAND:
        return Verdict(VerdictTag.UNWITNESSED, margin, "within boundary exclusion band")
    return Verdict(VerdictTag.UNWITNESSED, margin)


def p0_star(m: float) -> float:
    """Abscissa where the line p1 = 2 - m - 2 p0 meets the witness curve.

    The line carries all photon statistics with mean m and no support above
    two photons; the witness is only applicable for m in [0, 2].
    """
    if not 0.0 <= m <= 2.0:
        raise ValueError(f"converted witness applies to means in [0, 2], got {m}")
    if m == 0.0:
        return 1.0

    def gap(r: float) -> float:
        return curve_p1(r) + 2 * curve_p0(r) + m - 2.0

    # gap(0) = m >= 0 and gap -> m - 2 < 0; the combination p1 + 2 p0 is
    # strictly decreasing so the sign change is unique.
    lo, hi = 0.0, _R_MAX
    if gap(hi) >= 0.0:
        return 0.0
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0:
            lo = mid
        else:
            hi = mid
    return curve_p0(0.5 * (lo + hi))


def converted_curve(r: float) -> MomentPair:
    """Witness curve mapped to photon-number moments assuming p_{3+} = 0.

    m = p1 + 2(1 - p1 - p0) and <N^2> = p1 + 4(1 - p1 - p0); valid while the
    resulting mean stays at or below 2.
    """
    p0, p1 = curve_p0(r), curve_p1(r)
    m = p1 + 2 * (1 - p1 - p0)
    return MomentPair(m, p1 + 4 * (1 - p1 - p0) - m * m)


def s2_bound_from_prob(m: float) -> float:
    """Variance threshold of the converted witness: 2 p0*(m) - (m-2)(m-1).

    A state with s2 strictly below this value at mean m <= 2 is certainly QNG
    by the probability-based witness, whatever its p_{3+} mass.
    """
    return 2 * p0_star(m) - (m - 2) * (m - 1)


def probs_from_moments_p3zero(pair: MomentPair) -> ProbPoint:
    """(p0, p1) of the unique distribution on {0, 1, 2} with the given moments.

    Solves m = p1 + 2 p2 and <N^2> = p1 + 4 p2; raises if the moments cannot
    be carried by a three-level distribution.
    """
    p2 = (pair.second_moment() - pair.m) / 2.0
    p1 = pair.m - 2 * p2
    p0 = 1.0 - p1 - p2
    point = ProbPoint(p0, p1)
    bad = point.violations() + (() if 0.0 <= p2 <= 1.0 else ("p2 outside [0, 1]",))
    if bad:
        raise ValueError(
            f"moments (m={pair.m}, s2={pair.s2}) are not realizable with p3+ = 0: "
            + "; ".join(bad)
        )
    return point
