"""Brute-force verification in a truncated Fock basis.

Builds density matrices of arbitrary Gaussian states by applying squeeze,
rotation and displacement operators (truncated ladder-operator exponentials)
to a thermal diagonal state, extracts photon-number distributions, and runs a
grid search over single Gaussian states and two-component mixtures to confirm
that no state dips below the minimum-variance curve.  Everything here is
independent of the analytic moment formulas it is used to check.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .states import GaussianSpec, PhotonPMF, gaussian_moments, optimal_dsv_for_mean
from .witness import MomentPair, boundary_variance_at_mean

__all__ = [
    "InsufficientCutoffError",
    "TruncatedState",
    "ladder_operator",
    "build_gaussian_state",
    "pmf_of",
    "oracle_moments",
    "TightnessResult",
    "TightnessReport",
    "tightness_scan",
]

_DEFICIT_LIMIT = 1e-8
_AUTO_DEFICIT_TARGET = 1e-11
_MAX_DIM = 4096


class InsufficientCutoffError(ValueError):
    """Truncation too small for the requested state."""

    def __init__(self, deficit: float, dim: int, suggested_dim: int):
        self.deficit = deficit
        self.dim = dim
        self.suggested_dim = suggested_dim
        super().__init__(
            f"trace deficit {deficit:.2e} at dim {dim} exceeds {_DEFICIT_LIMIT:.0e}; "
            f"retry with dim >= {suggested_dim}"
        )


@dataclass(frozen=True)
class TruncatedState:
    """Density matrix in the number basis with the truncated trace recorded."""

    dim: int
    density: np.ndarray
    trace_deficit: float

    def __post_init__(self):
        rho = np.asarray(self.density, dtype=complex)
        if rho.shape != (self.dim, self.dim):
            raise ValueError("density matrix shape does not match dim")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
            raise ValueError("density matrix is not Hermitian")
        rho.setflags(write=False)
        object.__setattr__(self, "density", rho)


def ladder_operator(dim: int) -> np.ndarray:
    """Annihilation operator truncated to dim levels."""
    return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)


@lru_cache(maxsize=512)
def _squeeze_op(r: float, dim: int) -> np.ndarray:
    # generator r(aa - a+a+)/2 is real, so the exponential stays in float64
    a = np.diag(np.sqrt(np.arange(1, dim)), 1)
    op = expm(0.5 * r * (a @ a - a.T @ a.T))
    op.setflags(write=False)
    return op


@lru_cache(maxsize=2048)
def _displace_radial_op(radius: float, dim: int) -> np.ndarray:
    # displacement along +x; a general angle is a cheap phase conjugation
    a = np.diag(np.sqrt(np.arange(1, dim)), 1)
    op = expm(radius * (a.T - a))
    op.setflags(write=False)
    return op


def _displace_op(dx: float, dp: float, dim: int) -> np.ndarray:
    radius = math.hypot(dx, dp)
    radial = _displace_radial_op(radius, dim)
    if dp == 0.0 and dx >= 0.0:
        return radial
    # D(|a| e^{i t}) = R(t) D(|a|) R(t)^+ with R(t) = diag(e^{i t n})
    theta = math.atan2(dp, dx)
    phases = np.exp(1j * theta * np.arange(dim))
    return phases[:, None] * radial * phases.conj()[None, :]


def _thermal_diag(nbar: float, dim: int) -> np.ndarray:
    if nbar <= 0:
        out = np.zeros(dim)
        out[0] = 1.0
        return out
    n = np.arange(dim)
    return np.exp(n * math.log(nbar) - (n + 1) * math.log1p(nbar))


def _auto_dim(g: GaussianSpec) -> int:
    pair = gaussian_moments(g)
    spread = math.sqrt(max(pair.s2, 0.0))
    return min(_MAX_DIM, math.ceil(4.0 * (pair.m + 3.0 * spread + 10.0)))


def build_gaussian_state(g: GaussianSpec, dim: int | None = None) -> TruncatedState:
    """Construct the truncated density matrix of a Gaussian state.

    A thermal state with nbar = 2 sigma2 - 1/2 is squeezed along x, rotated by
    phi and displaced by (dx, dp), in that order.  With an explicit ``dim``
    the trace deficit must come out below 1e-8 or the call raises.  With
    ``dim=None`` the cutoff starts from ceil(4(m + 3s + 10)) and grows until
    the photon moments agree between successive cutoffs; a small trace deficit
    alone is no accuracy guarantee, because the truncated operator
    exponentials misplace amplitude near the edge without losing trace.
    """
    if dim is not None:
        state = _build_at_dim(g, int(dim))
        if state.trace_deficit >= _DEFICIT_LIMIT:
            raise InsufficientCutoffError(
                state.trace_deficit, int(dim), min(_MAX_DIM, math.ceil(1.5 * int(dim)))
            )
        return state

    trial = _auto_dim(g)
    state = _build_at_dim(g, trial)
    previous = _diag_moments(state)
    while True:
        if trial >= _MAX_DIM:
            raise InsufficientCutoffError(state.trace_deficit, trial, _MAX_DIM)
        trial = min(_MAX_DIM, math.ceil(1.35 * trial) + 8)
        state = _build_at_dim(g, trial)
        current = _diag_moments(state)
        scale = max(1.0, abs(current[1]))
        if (
            state.trace_deficit < _AUTO_DEFICIT_TARGET
            and abs(current[0] - previous[0]) < 1e-8 * max(1.0, abs(current[0]))
            and abs(current[1] - previous[1]) < 1e-8 * scale
        ):
            return state
        previous = current


def _diag_moments(state: TruncatedState) -> tuple[float, float]:
    probs = np.clip(np.real(np.diag(state.density)), 0.0, None)
    n = np.arange(state.dim)
    m = float(probs @ n)
    return m, float(probs @ n**2) - m * m


def _build_at_dim(g: GaussianSpec, dim: int) -> TruncatedState:
    diag = _thermal_diag(g.nbar, dim)
    squeeze = _squeeze_op(float(g.r), dim)
    n = np.arange(dim)
    rotate = np.exp(1j * g.phi * n)
    chain = _displace_op(float(g.dx), float(g.dp), dim) @ (rotate[:, None] * squeeze)
    rho = (chain * diag) @ chain.conj().T
    trace = float(np.real(np.trace(rho)))
    return TruncatedState(dim=dim, density=rho, trace_deficit=max(0.0, 1.0 - trace))


def pmf_of(state: TruncatedState) -> PhotonPMF:
    """Photon-number distribution: the density-matrix diagonal."""
    probs = np.clip(np.real(np.diag(state.density)), 0.0, None)
    slack = max(0.0, 1.0 - probs.sum())
    return PhotonPMF(probs, tail_bound=slack)


def oracle_moments(g: GaussianSpec, dim: int | None = None) -> MomentPair:
    """Photon moments via the Fock basis, bypassing the analytic formulas."""
    return pmf_of(build_gaussian_state(g, dim)).moments()


@dataclass(frozen=True)
class TightnessResult:
    """Scan outcome for one target mean."""

    m_target: float
    boundary_s2: float
    min_s2: float
    margin: float
    argmin: GaussianSpec | tuple
    argmin_kind: str
    optimal: GaussianSpec
    states_checked: int
    counterexample: bool

    def to_dict(self) -> dict:
        def spec_dict(g: GaussianSpec) -> dict:
            return {"sigma2": g.sigma2, "r": g.r, "phi": g.phi, "dx": g.dx, "dp": g.dp}

        if self.argmin_kind == "single":
            argmin = spec_dict(self.argmin)
        else:
            w, g1, g2 = self.argmin
            argmin = {"weight": w, "first": spec_dict(g1), "second": spec_dict(g2)}
        return {
            "m_target": self.m_target,
            "boundary_s2": self.boundary_s2,
            "min_s2": self.min_s2,
            "margin": self.margin,
            "argmin_kind": self.argmin_kind,
            "argmin": argmin,
            "optimal_dsv": spec_dict(self.optimal),
            "states_checked": self.states_checked,
            "counterexample": self.counterexample,
        }


@dataclass(frozen=True)
class TightnessReport:
    results: tuple[TightnessResult, ...]
    margin_tol: float

    @property
    def counterexamples(self) -> tuple[TightnessResult, ...]:
        return tuple(res for res in self.results if res.counterexample)

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(
            {
                "margin_tol": self.margin_tol,
                "counterexamples": len(self.counterexamples),
                "targets": [res.to_dict() for res in self.results],
            },
            indent=indent,
            sort_keys=True,
        )


def _bucket_dim(g: GaussianSpec) -> int:
    # round dims up to multiples of 32 so the operator caches stay warm
    return min(_MAX_DIM, 32 * math.ceil(_auto_dim(g) / 32))


def _scan_moments(g: GaussianSpec) -> MomentPair:
    return pmf_of(build_gaussian_state(g, _bucket_dim(g))).moments()


def _displacement_for_mean(m: float, sigma2: float, r: float) -> float | None:
    """Displacement putting a (sigma2, r) Gaussian at mean m, if any."""
    d2 = m + 0.5 - 2.0 * sigma2 * math.cosh(2.0 * r)
    if d2 < -1e-12:
        return None
    return math.sqrt(max(d2, 0.0))


def tightness_scan(
    m_targets,
    r_step: float = 0.02,
    d_step: float = 0.05,
    sigma2_values=(0.25, 0.35, 0.5),
    phi_values=(0.0, math.pi / 4, math.pi / 2),
    n_mixtures: int = 200,
    seed: int = 20260810,
    margin_tol: float = 1e-6,
) -> TightnessReport:
    """Grid-search Gaussian states and two-component mixtures at fixed mean.

    For each target mean the scan sweeps (sigma2, r, phi) with the
    displacement solved from the mean constraint, plus random two-component
    mixtures whose component displacements live on a d-grid of step
    ``d_step`` and whose weight enforces the target mean.  All photon moments
    come from the Fock-basis construction.  Every state with a variance below
    boundary - margin_tol is recorded as a counterexample.
    """
    results = []
    rng = np.random.default_rng(seed)
    for m_target in m_targets:
        if m_target > 30:
            raise ValueError(f"scan targets are limited to means <= 30, got {m_target}")
        boundary = boundary_variance_at_mean(m_target)
        best = (math.inf, None, None)  # (s2, argmin payload, kind)
        checked = 0

        for sigma2 in sigma2_values:
            for phi in phi_values:
                r = 0.0
                while True:
                    d = _displacement_for_mean(m_target, sigma2, r)
                    if d is None:
                        break
                    g = GaussianSpec(sigma2=sigma2, r=r, phi=phi, dx=d)
                    s2 = _scan_moments(g).s2
                    checked += 1
                    if s2 < best[0]:
                        best = (s2, g, "single")
                    r += r_step

        d_max = math.sqrt(2.0 * m_target + 0.5) + 1.0
        attempts = 0
        found = 0
        while found < n_mixtures and attempts < 20 * n_mixtures:
            attempts += 1
            sigma2s = rng.choice(sigma2_values, size=2)
            phis = rng.choice(phi_values, size=2)
            rs = r_step * rng.integers(0, 40, size=2)
            ds = d_step * rng.integers(0, int(d_max / d_step) + 1, size=2)
            specs = [
                GaussianSpec(sigma2=float(s), r=float(r_), phi=float(p), dx=float(d_))
                for s, r_, p, d_ in zip(sigma2s, rs, phis, ds)
            ]
            means = [gaussian_moments(g).m for g in specs]
            lo, hi = sorted(range(2), key=lambda i: means[i])
            if not means[lo] <= m_target <= means[hi] or means[hi] - means[lo] < 1e-9:
                continue
            w_hi = (m_target - means[lo]) / (means[hi] - means[lo])
            weights = [1.0 - w_hi, w_hi]
            pair = [_scan_moments(specs[lo]), _scan_moments(specs[hi])]
            n2 = sum(w * p.second_moment() for w, p in zip(weights, pair))
            mean = sum(w * p.m for w, p in zip(weights, pair))
            s2 = n2 - mean * mean
            checked += 1
            found += 1
            if s2 < best[0]:
                best = (s2, (weights[1], specs[lo], specs[hi]), "mixture")

        min_s2, argmin, kind = best
        margin = min_s2 - boundary
        results.append(
            TightnessResult(
                m_target=float(m_target),
                boundary_s2=boundary,
                min_s2=min_s2,
                margin=margin,
                argmin=argmin,
                argmin_kind=kind,
                optimal=optimal_dsv_for_mean(m_target),
                states_checked=checked,
                counterexample=margin < -margin_tol,
            )
        )
    return TightnessReport(results=tuple(results), margin_tol=margin_tol)
