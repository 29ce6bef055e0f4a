"""Command-line front end: boundary export, classification, depth tables,
measurement simulation and the brute-force tightness scan.

Outputs are CSV (12 significant digits, '.' decimal separator) or JSON with
sorted keys; identical command lines with identical seeds produce
byte-identical files.  The default sampler seed comes from the environment
variable ``QNGMOMENTS_SEED`` when set.

Exit codes: 0 success, 2 invalid input, 3 nonphysical result under --strict.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import depth as depth_mod
from . import fockbasis, measurement, prob_witness, states, witness

DEFAULT_SEED = 12345
SEED_ENV_VAR = "QNGMOMENTS_SEED"

_CURVE_KINDS = (
    "moment",
    "intensity",
    "g2",
    "fano",
    "quadrature",
    "prob",
    "converted_prob",
    "multimode",
)


class CliError(Exception):
    """Invalid command input (exit code 2)."""


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")


def _rows_to_csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def _rows_to_json(header: list[str], rows: list[list]) -> str:
    return json.dumps(
        [dict(zip(header, row)) for row in rows], indent=2, sort_keys=True
    ) + "\n"


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError as exc:
        raise CliError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from exc


def _r_grid(r_min: float, r_max: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise CliError(f"steps must be >= 2, got {steps}")
    if r_min < 0 or r_max <= r_min:
        raise CliError(f"need 0 <= r-min < r-max, got [{r_min}, {r_max}]")
    lo = max(r_min, r_max * 1e-6)
    grid = np.geomspace(lo, r_max, steps)
    if r_min == 0.0:
        grid[0] = 0.0
    return grid


# ---------------------------------------------------------------------------
# curve


def _cmd_curve(args) -> int:
    grid = _r_grid(args.r_min, args.r_max, args.steps)
    which = args.which
    if which in ("g2", "fano") and grid[0] == 0.0:
        grid[0] = grid[1] * 0.5  # these formulations are undefined at m = 0
    if which == "moment":
        header = ["r", "m", "s2"]
        rows = [[float(r), witness.boundary_mean(r), witness.boundary_variance(r)] for r in grid]
    elif which == "intensity":
        header = ["r", "w1", "w2"]
        rows = []
        for r in grid:
            w = witness.boundary_intensity(r)
            rows.append([float(r), w.w1, w.w2])
    elif which == "g2":
        header = ["r", "m", "g2", "g2_asymptotic"]
        rows = []
        for r in grid:
            point = witness.boundary_g2(r)
            rows.append([float(r), point.m, point.g2, witness.g2_asymptotic(point.m)])
    elif which == "fano":
        header = ["r", "m", "fano"]
        rows = [[float(r), *witness.boundary_fano(r)] for r in grid]
    elif which == "quadrature":
        header = ["r", "Q2", "Q4"]
        rows = [[float(r), *measurement.q_boundary(r)] for r in grid]
    elif which == "prob":
        header = ["r", "p0", "p1"]
        rows = []
        for r in grid:
            point = prob_witness.p0p1_curve(r)
            rows.append([float(r), point.p0, point.p1])
    elif which == "converted_prob":
        header = ["r", "m", "s2"]
        rows = []
        for r in grid:
            pair = prob_witness.converted_curve(r)
            rows.append([float(r), pair.m, pair.s2])
    elif which == "multimode":
        if args.modes < 1:
            raise CliError(f"--modes must be >= 1, got {args.modes}")
        header = ["r", "m", "s2"]
        rows = []
        for r in grid:
            pair = witness.multimode_identical_boundary(args.modes, r)
            rows.append([float(r), pair.m, pair.s2])
    else:  # pragma: no cover - argparse restricts choices
        raise CliError(f"unknown curve {which!r}")
    render = _rows_to_csv if args.format == "csv" else _rows_to_json
    _emit(render(header, rows), args.out)
    return 0


# ---------------------------------------------------------------------------
# classify


def _parse_noise(text: str) -> states.NoiseSpec:
    try:
        if text.startswith("poisson:"):
            return states.poissonian_noise(float(text.split(":", 1)[1]))
        if text.startswith("thermal:"):
            return states.thermal_noise(float(text.split(":", 1)[1]))
        mean, var = (float(part) for part in text.split(","))
        return states.NoiseSpec(mean, var)
    except (ValueError, IndexError) as exc:
        raise CliError(
            f"bad noise spec {text!r}; use poisson:NBAR, thermal:NBAR or MEAN,VAR"
        ) from exc


def _gain_estimate(args) -> measurement.GainEstimate | None:
    if args.gain is not None:
        if args.gain_est is not None or args.gain_min is not None or args.gain_max is not None:
            raise CliError("give either --gain or the --gain-est/min/max triple")
        return measurement.GainEstimate.exact(args.gain)
    if args.gain_est is not None or args.gain_min is not None or args.gain_max is not None:
        if None in (args.gain_est, args.gain_min, args.gain_max):
            raise CliError("--gain-est, --gain-min and --gain-max must be given together")
        return measurement.GainEstimate(args.gain_est, args.gain_min, args.gain_max)
    return None


def _cmd_classify(args) -> int:
    reps = {
        "moments": args.m is not None and args.s2 is not None,
        "intensity": args.w1 is not None or args.w2 is not None,
        "g2": args.g2 is not None,
        "prob": args.p0 is not None or args.p1 is not None,
        "amplified": args.amp_m is not None or args.amp_s2 is not None,
    }
    chosen = [name for name, present in reps.items() if present]
    if len(chosen) != 1:
        raise CliError(
            "give exactly one input: --m/--s2, --w1/--w2, --m/--g2, --p0/--p1 or --M/--S2"
        )
    kind = chosen[0]
    gain = _gain_estimate(args)
    noise = _parse_noise(args.noise) if args.noise else None
    if args.m_noise is not None or args.s2_noise is not None:
        if noise is not None:
            raise CliError("give either --noise or --m-noise/--s2-noise")
        noise = states.NoiseSpec(args.m_noise or 0.0, args.s2_noise or 0.0)
    has_channel = args.eta is not None or noise is not None

    report: dict = {"input": kind, "pipeline": []}
    nonphysical = False

    if kind == "prob":
        if gain is not None or has_channel:
            raise CliError("gain/channel corrections do not apply to probability input")
        if args.p0 is None or args.p1 is None:
            raise CliError("probability input needs both --p0 and --p1")
        point = prob_witness.ProbPoint(args.p0, args.p1)
        report["p0"], report["p1"] = point.p0, point.p1
        verdict = prob_witness.classify_probs(point)
    else:
        if kind == "moments":
            pair = witness.MomentPair(args.m, args.s2)
        elif kind == "intensity":
            if args.w1 is None or args.w2 is None:
                raise CliError("intensity input needs both --w1 and --w2")
            pair = witness.IntensityMoments(args.w1, args.w2).to_moments()
        elif kind == "g2":
            if args.m is None:
                raise CliError("g2 input needs --m as well")
            pair = witness.G2Point(args.m, args.g2).to_moments()
        else:  # amplified
            if args.amp_m is None or args.amp_s2 is None:
                raise CliError("amplified input needs both --M and --S2")
            if gain is None:
                raise CliError("amplified input needs a gain estimate")
            pair = witness.MomentPair(args.amp_m, args.amp_s2)

        if kind == "amplified":
            if noise is not None and args.noise_stage == "post":
                pair = witness.MomentPair(
                    pair.m - noise.m_noise, pair.s2 - noise.s2_noise
                )
                report["pipeline"].append("subtract post-amplification noise")
            pair = measurement.pia_invert(pair.m, pair.s2, gain, mode=args.gain_mode)
            report["pipeline"].append(f"invert gain ({args.gain_mode})")
            if args.eta is not None or (noise is not None and args.noise_stage == "pre"):
                pre_noise = noise if (noise is not None and args.noise_stage == "pre") else None
                channel = states.ChannelSpec(
                    args.eta if args.eta is not None else 1.0,
                    pre_noise or states.NoiseSpec(),
                )
                pair = states.correct_channel(pair, channel)
                report["pipeline"].append("correct loss/noise channel")
        elif has_channel:
            channel = states.ChannelSpec(
                args.eta if args.eta is not None else 1.0,
                noise or states.NoiseSpec(),
            )
            pair = states.correct_channel(pair, channel)
            report["pipeline"].append("correct loss/noise channel")

        report["m"], report["s2"] = pair.m, pair.s2
        violations = pair.violations()
        nonphysical = bool(violations)
        if violations:
            report["violations"] = list(violations)
        verdict = witness.classify_moments(pair)

    report["verdict"] = {
        "tag": verdict.tag.value,
        "margin": None if math.isnan(verdict.margin) else verdict.margin,
    }
    if verdict.reason:
        report["verdict"]["reason"] = verdict.reason
    report["nonphysical"] = nonphysical
    _emit(json.dumps(report, indent=2, sort_keys=True), args.out)
    if nonphysical and args.strict:
        return 3
    return 0


# ---------------------------------------------------------------------------
# depth


def _cmd_depth(args) -> int:
    presets = sum([args.table1, args.table2, args.fock is not None, args.pats is not None])
    if presets != 1:
        raise CliError("give exactly one of --table1, --table2, --fock N, --pats K NBAR")
    witnesses = {"moment": ("moment",), "prob": ("probability",), "both": ("probability", "moment")}[
        args.witness
    ]
    noise = _parse_noise(args.noise) if args.noise else None
    if noise is not None and (args.table1 or args.table2 or args.pats is not None):
        raise CliError("--noise is only supported for --fock families")
    if noise is not None and "probability" in witnesses:
        if args.witness == "both":
            witnesses = ("moment",)
        else:
            raise CliError("the probability witness does not support additive noise")

    if args.table1:
        rows_raw = depth_mod.fock_depth_table(witnesses=witnesses)
    elif args.table2:
        rows_raw = depth_mod.pats_depth_table(witnesses=witnesses)
    elif args.fock is not None:
        if noise is not None:
            result = depth_mod.depth_with_noise(args.fock, noise)
            rows_raw = [
                {
                    "family": "fock+noise",
                    "parameter": f"n={args.fock},m_noise={noise.m_noise:g},s2_noise={noise.s2_noise:g}",
                    "witness": "moment",
                    "eta_min": result.eta_min,
                    "depth": result.depth,
                }
            ]
        else:
            rows_raw = depth_mod.fock_depth_table(ns=(args.fock,), witnesses=witnesses)
    else:
        k, nbar = args.pats
        rows_raw = depth_mod.pats_depth_table(
            ks=(int(k),), nbars=(nbar,), witnesses=witnesses
        )

    header = ["family", "parameter", "witness", "eta_min", "depth"]
    rows = [[row[key] for key in header] for row in rows_raw]
    render = _rows_to_csv if args.format == "csv" else _rows_to_json
    _emit(render(header, rows), args.out)
    return 0


# ---------------------------------------------------------------------------
# simulate


def _parse_state(text: str):
    try:
        kind, _, rest = text.partition(":")
        if kind == "fock":
            parts = rest.split(":")
            n = int(parts[0])
            eta = float(parts[1]) if len(parts) > 1 else 1.0
            return states.FockSpec(n, eta)
        if kind == "coherent":
            return states.coherent(float(rest))
        if kind == "thermal":
            return states.thermal(float(rest))
        if kind == "squeezed":
            return states.squeezed_vacuum(float(rest))
        if kind == "dsv":
            return states.optimal_dsv_for_mean(float(rest))
        if kind == "gaussian":
            sigma2, r, phi, dx, dp = (float(p) for p in rest.split(","))
            return states.GaussianSpec(sigma2, r, phi, dx, dp)
    except (ValueError, IndexError) as exc:
        raise CliError(f"bad state spec {text!r}") from exc
    raise CliError(
        f"unknown state kind {kind!r}; use fock:N[:ETA], coherent:A, thermal:NBAR, "
        "squeezed:R, dsv:MEAN or gaussian:S2,R,PHI,DX,DP"
    )


def _true_moments(state) -> witness.MomentPair:
    if isinstance(state, states.FockSpec):
        return state.moments()
    if isinstance(state, states.GaussianSpec):
        return states.gaussian_moments(state)
    return states.mixture_moments(state)


def _verdict_dict(verdict: witness.Verdict) -> dict:
    out = {"tag": verdict.tag.value, "margin": None if math.isnan(verdict.margin) else verdict.margin}
    if verdict.reason:
        out["reason"] = verdict.reason
    return out


def _phase_random_report(state, count, seed) -> dict:
    samples = measurement.sample_phase_random(state, count, seed)
    est = measurement.estimate_power_moments(samples.values)
    pair = measurement.phase_random_moments(est["q2"], est["q4"])
    # first-order error propagation through m = 2 q2 - 1/2 and
    # s2 = (8/3) q4 - 4 q2^2 - 1/4
    var_m = 4.0 * est["se_q2"] ** 2
    gq2, gq4 = -8.0 * est["q2"], 8.0 / 3.0
    var_s2 = (
        gq2**2 * est["se_q2"] ** 2
        + gq4**2 * est["se_q4"] ** 2
        + 2.0 * gq2 * gq4 * est["cov_q2_q4"]
    )
    return {
        "estimates": est,
        "m": pair.m,
        "s2": pair.s2,
        "se_m": math.sqrt(max(var_m, 0.0)),
        "se_s2": math.sqrt(max(var_s2, 0.0)),
        "verdict": _verdict_dict(witness.classify_moments(pair)),
    }


def _homodyne4_report(state, count, seed) -> dict:
    q2, q4, se2, se4, cross = {}, {}, {}, {}, {}
    for offset, phi in enumerate(measurement.HOMODYNE_ANGLES):
        samples = measurement.sample_quadrature(state, phi, count, seed + offset)
        est = measurement.estimate_power_moments(samples.values)
        q2[phi], q4[phi] = est["q2"], est["q4"]
        se2[phi], se4[phi] = est["se_q2"], est["se_q4"]
        cross[phi] = est["cov_q2_q4"]
    stats = measurement.QuadratureStats(q2=q2, q4=q4)
    pair = measurement.homodyne_moments(stats)
    sum_q2 = stats.sum_q2()
    var_m = 0.25 * sum(se2[phi] ** 2 for phi in measurement.HOMODYNE_ANGLES)
    var_s2 = 0.0
    for phi in measurement.HOMODYNE_ANGLES:
        gq2, gq4 = -0.5 * sum_q2, 2.0 / 3.0
        var_s2 += gq2**2 * se2[phi] ** 2 + gq4**2 * se4[phi] ** 2 + 2 * gq2 * gq4 * cross[phi]
    return {
        "estimates": {
            "q2": {f"{phi:.6f}": q2[phi] for phi in measurement.HOMODYNE_ANGLES},
            "q4": {f"{phi:.6f}": q4[phi] for phi in measurement.HOMODYNE_ANGLES},
            "count_per_direction": count,
        },
        "m": pair.m,
        "s2": pair.s2,
        "se_m": math.sqrt(var_m),
        "se_s2": math.sqrt(max(var_s2, 0.0)),
        "verdict": _verdict_dict(witness.classify_moments(pair)),
    }


def _double_homodyne_report(state, count, seed) -> dict:
    x_arm, p_arm = measurement.sample_double_homodyne(state, count, seed)
    x2, p2 = x_arm**2, p_arm**2
    corrected = measurement.double_homodyne_correct(
        float(x2.mean()),
        float((x2**2).mean()),
        float(p2.mean()),
        float((p2**2).mean()),
        float(np.cov(x2, p2, ddof=1)[0, 1]),
    )
    # batch-means standard errors for the assembled moments
    n_batches = 50
    usable = (count // n_batches) * n_batches
    pairs = []
    for xb, pb in zip(np.split(x_arm[:usable], n_batches), np.split(p_arm[:usable], n_batches)):
        x2b, p2b = xb**2, pb**2
        res = measurement.double_homodyne_correct(
            float(x2b.mean()),
            float((x2b**2).mean()),
            float(p2b.mean()),
            float((p2b**2).mean()),
            float(np.cov(x2b, p2b, ddof=1)[0, 1]),
        )
        pairs.append((res.moments.m, res.moments.s2))
    batch = np.array(pairs)
    se = batch.std(axis=0, ddof=1) / math.sqrt(n_batches)
    return {
        "estimates": {
            "x2": corrected.x2,
            "x4": corrected.x4,
            "p2": corrected.p2,
            "p4": corrected.p4,
            "cov_x2p2": corrected.cov_x2p2,
        },
        "m": corrected.moments.m,
        "s2": corrected.moments.s2,
        "se_m": float(se[0]),
        "se_s2": float(se[1]),
        "nonphysical": corrected.nonphysical,
        "verdict": _verdict_dict(witness.classify_moments(corrected.moments)),
    }


def _cmd_simulate(args) -> int:
    if args.count < 100:
        raise CliError(f"--count must be >= 100, got {args.count}")
    state = _parse_state(args.state)
    if args.eta is not None:
        state = states.attenuate(state, args.eta)
    seed = args.seed if args.seed is not None else _default_seed()
    true_pair = _true_moments(state)

    if args.scheme == "phase_random":
        body = _phase_random_report(state, args.count, seed)
    elif args.scheme == "homodyne4":
        body = _homodyne4_report(state, args.count, seed)
    elif args.scheme == "double_homodyne":
        body = _double_homodyne_report(state, args.count, seed)
    elif args.scheme == "pia":
        # estimate the signal by four-direction homodyne, push the estimate
        # through the amplifier model, then run the gain-correction workflow
        # back to the input moments
        if args.gain is None:
            raise CliError("--gain is required for the pia scheme")
        signal = _homodyne4_report(state, args.count, seed)
        estimate = witness.MomentPair(signal["m"], signal["s2"])
        amplified = measurement.pia_forward(estimate, args.gain)
        inverted = measurement.pia_invert(
            amplified.M, amplified.S2, measurement.GainEstimate.exact(args.gain), "point"
        )
        truth = measurement.pia_forward(true_pair, args.gain)
        body = {
            "estimates": signal["estimates"],
            "amplified": {"M": amplified.M, "S2": amplified.S2, "W2": amplified.W2},
            "true_amplified": {"M": truth.M, "S2": truth.S2, "W2": truth.W2},
            "m": inverted.m,
            "s2": inverted.s2,
            "se_m": signal["se_m"],
            "se_s2": signal["se_s2"],
            "verdict": _verdict_dict(witness.classify_moments(inverted)),
        }
    else:  # pragma: no cover - argparse restricts choices
        raise CliError(f"unknown scheme {args.scheme!r}")

    report = {
        "scheme": args.scheme,
        "state": args.state if args.eta is None else f"{args.state}@eta={args.eta:g}",
        "count": args.count,
        "seed": seed,
        "true": {"m": true_pair.m, "s2": true_pair.s2},
        **body,
    }
    _emit(json.dumps(report, indent=2, sort_keys=True), args.out)
    nonphysical = bool(report.get("nonphysical"))
    if nonphysical and args.strict:
        return 3
    return 0


# ---------------------------------------------------------------------------
# scan


def _cmd_scan(args) -> int:
    try:
        targets = [float(part) for part in args.targets.split(",") if part]
    except ValueError as exc:
        raise CliError(f"bad target list {args.targets!r}") from exc
    if not targets:
        raise CliError("no scan targets given")
    seed = args.seed if args.seed is not None else _default_seed()
    report = fockbasis.tightness_scan(
        targets,
        r_step=args.r_step,
        d_step=args.d_step,
        n_mixtures=args.mixtures,
        seed=seed,
    )
    _emit(report.to_json(), args.out)
    if report.counterexamples:
        sys.stderr.write(f"{len(report.counterexamples)} counterexample(s) found\n")
        return 3 if args.strict else 0
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qngmoments",
        description="Quantum non-Gaussianity certification from photon-number moments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    curve = sub.add_parser("curve", help="export a witness boundary curve")
    curve.add_argument("which", choices=_CURVE_KINDS)
    curve.add_argument("--r-min", type=float, default=0.0)
    curve.add_argument("--r-max", type=float, default=2.0)
    curve.add_argument("--steps", type=int, default=100)
    curve.add_argument("--modes", type=int, default=2, help="mode count for the multimode curve")
    curve.add_argument("--format", choices=("csv", "json"), default="csv")
    curve.add_argument("--out", default=None)
    curve.set_defaults(handler=_cmd_curve)

    classify = sub.add_parser("classify", help="classify one measured point")
    classify.add_argument("--m", type=float, default=None, help="photon-number mean")
    classify.add_argument("--s2", type=float, default=None, help="photon-number variance")
    classify.add_argument("--w1", type=float, default=None, help="mean integrated intensity")
    classify.add_argument("--w2", type=float, default=None, help="second intensity moment")
    classify.add_argument("--g2", type=float, default=None, help="second-order correlation")
    classify.add_argument("--p0", type=float, default=None, help="vacuum probability")
    classify.add_argument("--p1", type=float, default=None, help="single-photon probability")
    classify.add_argument("--M", dest="amp_m", type=float, default=None,
                          help="amplified photon-number mean")
    classify.add_argument("--S2", dest="amp_s2", type=float, default=None,
                          help="amplified photon-number variance")
    classify.add_argument("--gain", type=float, default=None, help="exactly known gain")
    classify.add_argument("--gain-est", type=float, default=None)
    classify.add_argument("--gain-min", type=float, default=None)
    classify.add_argument("--gain-max", type=float, default=None)
    classify.add_argument("--gain-mode", choices=("point", "conservative"), default="point")
    classify.add_argument("--eta", type=float, default=None,
                          help="known transmittance to correct for")
    classify.add_argument("--noise", default=None,
                          help="noise to subtract: poisson:NBAR, thermal:NBAR or MEAN,VAR")
    classify.add_argument("--m-noise", type=float, default=None)
    classify.add_argument("--s2-noise", type=float, default=None)
    classify.add_argument("--noise-stage", choices=("pre", "post"), default="post",
                          help="whether the noise entered before or after amplification")
    classify.add_argument("--strict", action="store_true",
                          help="exit 3 when the corrected point is nonphysical")
    classify.add_argument("--out", default=None)
    classify.set_defaults(handler=_cmd_classify)

    depth = sub.add_parser("depth", help="loss tolerance of a state family")
    depth.add_argument("--fock", type=int, default=None, help="Fock state |n>")
    depth.add_argument("--pats", nargs=2, type=float, default=None,
                       metavar=("K", "NBAR"), help="k-photon-added thermal state")
    depth.add_argument("--table1", action="store_true",
                       help="Fock 1..5 under both witnesses")
    depth.add_argument("--table2", action="store_true",
                       help="photon-added thermal grid under both witnesses")
    depth.add_argument("--witness", choices=("moment", "prob", "both"), default="both")
    depth.add_argument("--noise", default=None,
                       help="additive detection noise: poisson:NBAR, thermal:NBAR or MEAN,VAR")
    depth.add_argument("--format", choices=("csv", "json"), default="csv")
    depth.add_argument("--out", default=None)
    depth.set_defaults(handler=_cmd_depth)

    simulate = sub.add_parser("simulate", help="Monte Carlo measurement simulation")
    simulate.add_argument("--scheme", required=True,
                          choices=("homodyne4", "phase_random", "double_homodyne", "pia"))
    simulate.add_argument("--state", required=True,
                          help="fock:N[:ETA], coherent:A, thermal:NBAR, squeezed:R, "
                               "dsv:MEAN or gaussian:S2,R,PHI,DX,DP")
    simulate.add_argument("--eta", type=float, default=None,
                          help="extra loss applied to the state before measuring")
    simulate.add_argument("--count", type=int, default=100_000)
    simulate.add_argument("--seed", type=int, default=None,
                          help=f"sampler seed (default ${SEED_ENV_VAR} or {DEFAULT_SEED})")
    simulate.add_argument("--gain", type=float, default=None, help="gain for the pia scheme")
    simulate.add_argument("--strict", action="store_true")
    simulate.add_argument("--out", default=None)
    simulate.set_defaults(handler=_cmd_simulate)

    scan = sub.add_parser("scan", help="brute-force boundary tightness scan")
    scan.add_argument("--targets", default="0.5,1,2,5,10",
                      help="comma-separated target means")
    scan.add_argument("--r-step", type=float, default=0.02)
    scan.add_argument("--d-step", type=float, default=0.05)
    scan.add_argument("--mixtures", type=int, default=200)
    scan.add_argument("--seed", type=int, default=None)
    scan.add_argument("--strict", action="store_true",
                      help="exit 3 when a counterexample is found")
    scan.add_argument("--out", default=None)
    scan.set_defaults(handler=_cmd_scan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
