"""Quantum non-Gaussianity depth: loss tolerance of a state family.

The QNG depth of a state is 1 - eta_min, where eta_min is the smallest
beam-splitter transmittance at which the attenuated state still triggers a
witness.  The crossing of the family's loss trajectory with the witness
boundary is located by a coarse grid scan (which brackets every sign change,
including tangential approaches near the endpoints) followed by bisection.

Supports the moment-based witness and the vacuum/single-photon probability
witness, Fock and photon-added thermal families, additive detection noise,
and the closed-form asymptotic depth law for large Fock states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import prob_witness
from .states import (
    NoiseSpec,
    apply_loss_pmf,
    lossy_fock_moments,
    lossy_fock_probs,
    photon_added_thermal_moments,
    photon_added_thermal_pmf,
)
from .witness import MomentPair, boundary_variance_at_mean

__all__ = [
    "FamilyCurve",
    "DepthResult",
    "qng_depth_moment",
    "qng_depth_prob",
    "asymptotic_fock_depth",
    "depth_with_noise",
    "pats_threshold",
    "fock_depth_table",
    "pats_depth_table",
]

_GRID_STEP = 0.01
_BISECT_TOL = 1e-8
# The probability witness is evaluated at eta = 1 as the limit from below:
# exactly at eta = 1 a Fock family has p0 = p1 = 0, which is inconclusive,
# while every eta < 1 in its neighbourhood witnesses.
_ETA_TOP = 1.0 - 1e-9


@dataclass(frozen=True)
class FamilyCurve:
    """A state family parameterized by transmittance eta in [0, 1]."""

    label: str
    moments: Callable[[float], MomentPair]
    probs: Callable[[float], tuple[float, float]] | None = None

    @classmethod
    def lossy_fock(cls, n: int) -> "FamilyCurve":
        if int(n) != n or n < 1:
            raise ValueError(f"Fock index must be an integer >= 1, got {n}")
        n = int(n)
        return cls(
            label=f"fock:{n}",
            moments=lambda eta: lossy_fock_moments(n, eta),
            probs=lambda eta: lossy_fock_probs(n, eta),
        )

    @classmethod
    def photon_added_thermal(cls, k: int, nbar: float) -> "FamilyCurve":
        pmf = photon_added_thermal_pmf(k, nbar)

        def probs(eta: float) -> tuple[float, float]:
            thinned = apply_loss_pmf(pmf, eta)
            return thinned.p0, thinned.p1

        return cls(
            label=f"pats:k={k},nbar={nbar:g}",
            moments=lambda eta: photon_added_thermal_moments(k, nbar, eta),
            probs=probs,
        )

    @classmethod
    def custom(cls, moments, probs=None, label: str = "custom") -> "FamilyCurve":
        return cls(label=label, moments=moments, probs=probs)


@dataclass(frozen=True)
class DepthResult:
    """Outcome of a depth search.

    ``eta_min`` is the smallest transmittance with the family witnessed on
    (eta_min, 1]; ``depth`` = 1 - eta_min.  ``bracket`` is the final bisection
    bracket (degenerate at the endpoints when the family is witnessed for all
    eta or never).  Multiple boundary crossings are all reported and flagged.
    """

    eta_min: float
    depth: float
    witness: str
    converged: bool
    bracket: tuple[float, float]
    crossings: tuple[float, ...] = field(default=())
    multi_crossing: bool = False


def _bisect(margin: Callable[[float], float], lo: float, hi: float) -> float:
    """Root of margin between lo (margin > 0) and hi (margin < 0)."""
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if margin(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _depth_from_margin(margin: Callable[[float], float], witness: str) -> DepthResult:
    grid = np.linspace(_GRID_STEP, 1.0, round(1.0 / _GRID_STEP))
    values = np.array([margin(eta) for eta in grid])

    crossings = []
    brackets = []
    for i in range(len(grid) - 1):
        a, b = values[i], values[i + 1]
        if a > 0 >= b:
            lo, hi = grid[i], grid[i + 1]
            crossings.append(_bisect(margin, lo, hi))
            brackets.append((lo, hi))
        elif a <= 0 < b:
            # family leaves the witnessed region as eta grows; record the
            # transition so multi-crossing trajectories are visible
            lo, hi = grid[i], grid[i + 1]
            root = _bisect(lambda e: -margin(e), lo, hi)
            crossings.append(root)
            brackets.append((lo, hi))

    if not crossings:
        if values[-1] < 0:
            return DepthResult(0.0, 1.0, witness, True, (0.0, 0.0))
        return DepthResult(1.0, 0.0, witness, True, (1.0, 1.0))

    eta_min = max(crossings)
    bracket = brackets[int(np.argmax(crossings))]
    if values[-1] >= 0:
        # not witnessed even at eta = 1
        return DepthResult(
            1.0, 0.0, witness, True, (1.0, 1.0),
            crossings=tuple(crossings), multi_crossing=len(crossings) > 1,
        )
    return DepthResult(
        eta_min,
        1.0 - eta_min,
        witness,
        True,
        bracket,
        crossings=tuple(crossings),
        multi_crossing=len(crossings) > 1,
    )


def moment_margin(family: FamilyCurve, eta: float) -> float:
    """Signed distance of the family to the moment boundary (negative = QNG)."""
    pair = family.moments(eta)
    return pair.s2 - boundary_variance_at_mean(pair.m)


def qng_depth_moment(family: FamilyCurve) -> DepthResult:
    """Depth of a family under the moment-based witness."""
    return _depth_from_margin(lambda eta: moment_margin(family, eta), "moment")


def qng_depth_prob(family: FamilyCurve) -> DepthResult:
    """Depth of a family under the (p0, p1) probability witness."""
    if family.probs is None:
        raise ValueError(f"family {family.label!r} provides no (p0, p1) trajectory")

    def margin(eta: float) -> float:
        p0, p1 = family.probs(min(eta, _ETA_TOP))
        return prob_witness.prob_margin(p0, p1)

    return _depth_from_margin(margin, "probability")


def asymptotic_fock_depth(n: int) -> float:
    """Large-n depth law (3/8) 4^(2/3) n^(-1/3) for Fock states."""
    if int(n) != n or n < 1:
        raise ValueError(f"Fock index must be an integer >= 1, got {n}")
    return 0.375 * 4.0 ** (2.0 / 3.0) * float(n) ** (-1.0 / 3.0)


def depth_with_noise(n: int, noise: NoiseSpec) -> DepthResult:
    """Moment-witness depth of Fock |n> with additive detection noise.

    The noisy trajectory is m = eta n + m_noise,
    s2 = eta(1-eta) n + s2_noise (the loss map plus the noise offsets).
    """
    if int(n) != n or n < 1:
        raise ValueError(f"Fock index must be an integer >= 1, got {n}")
    n = int(n)

    def moments(eta: float) -> MomentPair:
        base = lossy_fock_moments(n, eta)
        return MomentPair(base.m + noise.m_noise, base.s2 + noise.s2_noise)

    label = f"fock:{n}+noise({noise.m_noise:g},{noise.s2_noise:g})"
    return qng_depth_moment(FamilyCurve.custom(moments, label=label))


def pats_threshold(k: int = 1) -> float:
    """Thermal mean at which the lossless k-photon-added thermal state
    reaches the moment boundary; larger means are no longer witnessed."""

    def margin(nbar: float) -> float:
        pair = photon_added_thermal_moments(k, nbar, 1.0)
        return pair.s2 - boundary_variance_at_mean(pair.m)

    lo, hi = 0.0, 1.0
    if margin(hi) < 0:
        raise RuntimeError("no threshold below nbar = 1")
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if margin(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _rows_for(family: FamilyCurve, parameter: str, witnesses) -> list[dict]:
    rows = []
    for witness in witnesses:
        result = qng_depth_prob(family) if witness == "probability" else qng_depth_moment(family)
        rows.append(
            {
                "family": family.label.split(":")[0],
                "parameter": parameter,
                "witness": witness,
                "eta_min": result.eta_min,
                "depth": result.depth,
            }
        )
    return rows


def fock_depth_table(
    ns=(1, 2, 3, 4, 5), witnesses=("probability", "moment")
) -> list[dict]:
    """Depth table rows for Fock states (family, parameter, witness, eta_min, depth)."""
    rows = []
    for n in ns:
        rows.extend(_rows_for(FamilyCurve.lossy_fock(n), f"n={n}", witnesses))
    return rows


def pats_depth_table(
    ks=(1, 2, 3),
    nbars=(0.0, 0.1, 0.2, 0.3, 0.4),
    witnesses=("probability", "moment"),
) -> list[dict]:
    """Depth table rows for k-photon-added thermal states."""
    rows = []
    for nbar in nbars:
        for k in ks:
            family = FamilyCurve.photon_added_thermal(k, nbar)
            rows.extend(_rows_for(family, f"k={k},nbar={nbar:g}", witnesses))
    return rows
