"""Command-line interface: simulate / sweep / kappa / steady-state.

Configuration precedence, lowest to highest: built-in defaults, --preset,
--from-manifest, --config file, explicit flags.  Every output file has a JSON
manifest next to it; feeding a manifest back through --from-manifest
reproduces the data files byte for byte.

Exit codes: 0 success, 1 runtime failure, 2 usage/configuration error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import warnings
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import ClassifierThresholds, classify
from .integrator import SimulationError, relax_to_steady_state, simulate
from .iofmt import (
    read_manifest,
    write_kappa_csv,
    write_manifest,
    write_strobe_csv,
    write_trajectory_csv,
)
from .model import (
    EomVariant,
    ModelFrequencies,
    NoiseProcess,
    NoiseSettings,
    critical_coupling,
    kappa_at,
    steady_state_closed_form,
    steady_state_residual,
)
from .presets import (
    simulate_preset,
    simulate_preset_names,
    sweep_preset,
    sweep_preset_names,
)
from .runconfig import (
    ConfigError,
    config_to_flat,
    load_config_file,
    merge_config,
    parse_value,
    resolve_config,
    thresholds_from_flat,
)
from .sweep import AxisSpec, SweepError, SweepSpec, resume_sweep, run_sweep

_CONFIG_FLAGS = {
    # flag dest -> config key
    "lambda0": "lambda0",
    "omega_T": "omega_T",
    "epsilon": "epsilon",
    "kappa0": "kappa0",
    "m": "m",
    "kappa_max": "kappa_max",
    "clip_mode": "clip_mode",
    "a0": "a0",
    "seed": "seed",
    "resample_interval": "resample_interval",
    "variant": "variant",
    "branch": "initial_branch",
    "periods": "periods_total",
    "recorded": "periods_recorded",
    "steps_per_period": "steps_per_period",
    "period_mode": "period_mode",
    "norm_drift_tol": "norm_drift_tol",
}


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    grp = parser.add_argument_group("model parameters (override preset/config file)")
    grp.add_argument("--lambda0", type=float, help="drive coupling amplitude")
    grp.add_argument("--omega-t", dest="omega_T", type=float, help="drive angular frequency")
    grp.add_argument("--epsilon", type=float, help="detuning error")
    grp.add_argument("--kappa0", type=float, help="bare dissipation strength")
    grp.add_argument("--m", type=parse_value, help="bath spectral width ('none' for constant rate)")
    grp.add_argument("--kappa-max", dest="kappa_max", type=float, help="rate clipping bound")
    grp.add_argument("--clip-mode", dest="clip_mode", choices=["literal", "sign_preserving"])
    grp.add_argument("--a0", type=float, help="dissipation noise amplitude")
    grp.add_argument("--seed", type=int, help="noise PRNG seed")
    grp.add_argument("--resample-interval", dest="resample_interval", type=float,
                     help="time between noise draws (default: one integrator step)")
    grp.add_argument("--variant", choices=[v.value for v in EomVariant],
                     help="equations-of-motion sign convention")
    grp.add_argument("--branch", type=int, choices=[1, -1], help="initial steady-state branch")
    grp.add_argument("--periods", type=int, help="total drive periods")
    grp.add_argument("--recorded", type=int, help="recorded drive periods")
    grp.add_argument("--steps-per-period", dest="steps_per_period", type=int)
    grp.add_argument("--period-mode", dest="period_mode", choices=["auto", "base"],
                     help="auto: lock the drive period to the rate oscillation when non-Markovian")
    grp.add_argument("--norm-drift-tol", dest="norm_drift_tol", type=float)
    grp.add_argument("--period-tol", dest="period_tol", type=float,
                     help="classifier tolerance for exact-period detection")


def _flag_overrides(args: argparse.Namespace) -> dict:
    out = {}
    for dest, key in _CONFIG_FLAGS.items():
        value = getattr(args, dest, None)
        if value is not None:
            out[key] = value
    if getattr(args, "no_dense", False):
        out["record_dense"] = False
    if getattr(args, "initial_state", None) is not None:
        out["initial_state"] = [float(v) for v in args.initial_state.split(",")]
    return out


def _gather_flat_config(args: argparse.Namespace) -> tuple[dict, ClassifierThresholds]:
    layers: list[dict] = []
    threshold_overrides: dict = {}
    if getattr(args, "preset", None):
        try:
            preset = simulate_preset(args.preset)
        except KeyError:
            raise ConfigError(
                f"unknown preset {args.preset!r}; available: {', '.join(simulate_preset_names())}"
            ) from None
        threshold_overrides.update(preset.pop("thresholds", {}))
        layers.append(preset)
    if getattr(args, "from_manifest", None):
        manifest = read_manifest(args.from_manifest)
        if "config" not in manifest:
            raise ConfigError(f"{args.from_manifest} does not contain a 'config' section")
        threshold_overrides.update(manifest.get("thresholds", {}))
        layers.append(dict(manifest["config"]))
    if getattr(args, "config", None):
        layers.append(load_config_file(args.config))
    layers.append(_flag_overrides(args))
    if getattr(args, "period_tol", None) is not None:
        threshold_overrides["period_tol"] = args.period_tol
    thresholds = thresholds_from_flat(threshold_overrides)
    return merge_config(*layers), thresholds


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _cmd_simulate(args: argparse.Namespace) -> int:
    flat, thresholds = _gather_flat_config(args)
    config = resolve_config(flat)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    tag = args.tag or args.preset or "run"
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        trajectory, strobe = simulate(config)
    for warning in caught:
        print(f"warning: {warning.message}", file=sys.stderr)
    label = classify(trajectory if config.record_dense else None, strobe, thresholds)
    outputs = {}
    strobe_path = outdir / f"{tag}_strobe.csv"
    write_strobe_csv(strobe_path, strobe)
    outputs["strobe_csv"] = {"file": strobe_path.name, "sha256": _sha256(strobe_path)}
    if config.record_dense:
        traj_path = outdir / f"{tag}_trajectory.csv"
        write_trajectory_csv(traj_path, trajectory)
        outputs["trajectory_csv"] = {"file": traj_path.name, "sha256": _sha256(traj_path)}
    manifest = {
        "schema": "run-manifest-v1",
        "version": __version__,
        "command": "simulate",
        "tag": tag,
        "seed": config.noise.seed if config.noise else None,
        "config": config_to_flat(config),
        "derived": trajectory.manifest,
        "thresholds": thresholds.to_dict(),
        "label": {
            "phase": label.kind.value,
            "period": label.diagnostics.detected_period,
            "variance": label.diagnostics.variance,
            "dimension": label.diagnostics.dimension,
            "nn_spread": label.diagnostics.nn_spread,
            "parity_flag": label.diagnostics.parity_ok,
            "note": label.diagnostics.note,
        },
        "outputs": outputs,
        "created_utc": _timestamp(),
    }
    manifest_path = outdir / f"{tag}_manifest.json"
    write_manifest(manifest_path, manifest)
    diag = label.diagnostics
    print(f"phase: {label.summary()}")
    if diag.detected_period is not None:
        print(f"  stroboscopic period: {diag.detected_period}")
    if diag.variance is not None:
        print(f"  intra-period variance: {diag.variance:.3e}")
    if diag.dimension is not None:
        print(f"  point-cloud dimension: {diag.dimension:.2f}  nn spread: {diag.nn_spread:.3f}")
    if diag.parity_ok is not None:
        print(f"  parity pairing: {'ok' if diag.parity_ok else 'violated'}")
    if diag.note:
        print(f"  note: {diag.note}")
    print(f"wrote {', '.join(v['file'] for v in outputs.values())}, {manifest_path.name}")
    return 0


def _cmd_kappa(args: argparse.Namespace) -> int:
    flat, _ = _gather_flat_config(args)
    if flat.get("kappa0") is None:
        raise ConfigError("missing required configuration key 'kappa0'")
    if flat.get("lambda0") is None:
        flat["lambda0"] = 0.0  # the rate trace does not involve the drive amplitude
    config = resolve_config(flat)
    schedule = config.schedule
    if args.span <= 0.0:
        raise ConfigError("--span must be positive")
    if args.samples < 2:
        raise ConfigError("--samples must be at least 2")
    times = np.linspace(0.0, args.span, args.samples)
    spacing = args.span / (args.samples - 1)
    noise_settings = config.noise or NoiseSettings()
    if noise_settings.a0 > 0.0:
        process = NoiseProcess(noise_settings, resample_interval=spacing)
        values = [kappa_at(t, schedule) + process.value_at(t) for t in times]
    else:
        values = [kappa_at(t, schedule) for t in times]
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    tag = args.tag or "kappa"
    csv_path = outdir / f"{tag}_kappa.csv"
    write_kappa_csv(csv_path, times, values)
    manifest = {
        "schema": "run-manifest-v1",
        "version": __version__,
        "command": "kappa",
        "tag": tag,
        "config": config_to_flat(config),
        "span": args.span,
        "samples": args.samples,
        "outputs": {"kappa_csv": {"file": csv_path.name, "sha256": _sha256(csv_path)}},
        "created_utc": _timestamp(),
    }
    write_manifest(outdir / f"{tag}_kappa_manifest.json", manifest)
    print(f"wrote {csv_path.name} ({args.samples} samples, regime {schedule.regime.value})")
    return 0


def _cmd_steady_state(args: argparse.Namespace) -> int:
    if args.omega is not None and args.omega0 is not None:
        freqs = ModelFrequencies(args.omega, args.omega0)
    else:
        freqs = ModelFrequencies.detuned(args.omega_T, args.epsilon)
    lam_c = critical_coupling(freqs.omega, freqs.omega0, args.kappa0)
    print(f"omega={freqs.omega:.12g} omega0={freqs.omega0:.12g} kappa0={args.kappa0:.12g}")
    print(f"lambda_c = {lam_c:.12g}")
    if args.lambda0 < lam_c:
        if not args.normal:
            raise ConfigError(
                f"lambda0={args.lambda0} is below lambda_c={lam_c:.6g}; "
                "pass --normal to inspect the normal phase"
            )
        from .model import MeanFieldState

        state = MeanFieldState.normal_phase()
        res_c = steady_state_residual(state, args.lambda0, freqs, args.kappa0, EomVariant.CONSISTENT)
        res_p = steady_state_residual(state, args.lambda0, freqs, args.kappa0, EomVariant.AS_PUBLISHED)
        print("normal phase: x=0 p=0 jx=0 jy=0 jz=-1")
        print(f"  residual consistent={res_c:.3e} as_published={res_p:.3e}")
        return 0
    for branch in (1, -1):
        state = steady_state_closed_form(args.lambda0, freqs, args.kappa0, branch)
        res_c = steady_state_residual(state, args.lambda0, freqs, args.kappa0, EomVariant.CONSISTENT)
        res_p = steady_state_residual(state, args.lambda0, freqs, args.kappa0, EomVariant.AS_PUBLISHED)
        print(f"branch {branch:+d}:")
        print(
            f"  x={state.x:.12g} p={state.p:.12g} "
            f"jx={state.jx:.12g} jy={state.jy:.12g} jz={state.jz:.12g}"
        )
        print(f"  residual consistent={res_c:.3e} as_published={res_p:.3e}")
        if args.relax:
            relaxed = relax_to_steady_state(state, args.lambda0, freqs, args.kappa0)
            gap = float(np.max(np.abs(relaxed.as_array() - state.as_array())))
            print(f"  relaxation oracle max deviation: {gap:.3e}")
    return 0


def _build_sweep_spec(args: argparse.Namespace, outdir: Path, tag: str) -> SweepSpec:
    if args.preset:
        try:
            raw = sweep_preset(args.preset)
        except KeyError:
            raise ConfigError(
                f"unknown sweep preset {args.preset!r}; available: {', '.join(sweep_preset_names())}"
            ) from None
    elif args.spec:
        flat = load_config_file(args.spec)
        raw = {"axis1": {}, "axis2": {}, "base": {}, "base_seed": flat.pop("base_seed", 0)}
        flat.pop("workers", None)
        for axis in ("axis1", "axis2"):
            for part in ("name", "lo", "hi", "count"):
                key = f"{axis}_{part}"
                if key not in flat:
                    raise ConfigError(f"sweep spec file must define {key}")
                raw[axis][part] = flat.pop(key)
        thresholds = thresholds_from_flat(flat)
        for key in thresholds.to_dict():
            flat.pop(key, None)
        raw["base"] = flat
        raw["thresholds"] = thresholds
    else:
        raise ConfigError("sweep needs --preset, --spec or --resume")
    for override in args.set or []:
        key, _, value = override.partition("=")
        if not _:
            raise ConfigError(f"--set expects KEY=VALUE, got {override!r}")
        raw["base"][key.strip()] = parse_value(value)
    thresholds = raw.get("thresholds", ClassifierThresholds())
    return SweepSpec(
        axis1=AxisSpec(**{k: (str(v) if k == "name" else v) for k, v in raw["axis1"].items()}),
        axis2=AxisSpec(**{k: (str(v) if k == "name" else v) for k, v in raw["axis2"].items()}),
        base=raw["base"],
        checkpoint_path=str(outdir / f"{tag}_sweep.checkpoint.csv"),
        workers=args.workers,
        base_seed=int(args.base_seed if args.base_seed is not None else raw.get("base_seed", 0)),
        thresholds=thresholds,
    )


def _cmd_sweep(args: argparse.Namespace) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.resume:
        checkpoint = Path(args.resume)
        result = resume_sweep(checkpoint)
        name = checkpoint.name
        tag = name[: -len("_sweep.checkpoint.csv")] if name.endswith("_sweep.checkpoint.csv") else checkpoint.stem
        final_path = checkpoint.parent / f"{tag}_sweep.csv"
        manifest_path = checkpoint.parent / f"{tag}_sweep_manifest.json"
    else:
        tag = args.tag or args.preset or "sweep"
        spec = _build_sweep_spec(args, outdir, tag)
        result = run_sweep(spec)
        final_path = outdir / f"{tag}_sweep.csv"
        manifest_path = outdir / f"{tag}_sweep_manifest.json"
    result.write_csv(final_path)
    counts: dict[str, int] = {}
    for row in result.rows:
        counts[row["phase"]] = counts.get(row["phase"], 0) + 1
    manifest = {
        "schema": "sweep-manifest-v1",
        "version": __version__,
        "command": "sweep",
        "header": result.manifest["header"],
        "phase_counts": dict(sorted(counts.items())),
        "outputs": {"sweep_csv": {"file": final_path.name, "sha256": _sha256(final_path)}},
        "created_utc": _timestamp(),
    }
    write_manifest(manifest_path, manifest)
    summary = ", ".join(f"{k}: {v}" for k, v in sorted(counts.items()))
    print(f"{len(result.rows)} cells -> {summary}")
    print(f"wrote {final_path.name}, {manifest_path.name}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opendicke",
        description="Mean-field simulator for time-crystalline order in the driven open Dicke model.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one trajectory and classify its phase")
    sim.add_argument("--preset", help=f"named parameter set ({', '.join(simulate_preset_names())})")
    sim.add_argument("--config", help="flat key=value configuration file")
    sim.add_argument("--from-manifest", dest="from_manifest", help="reproduce a previous run")
    sim.add_argument("--initial-state", dest="initial_state",
                     help="explicit initial state 'x,p,jx,jy,jz'")
    sim.add_argument("--no-dense", dest="no_dense", action="store_true",
                     help="skip the dense trajectory record")
    sim.add_argument("--outdir", default=".")
    sim.add_argument("--tag", help="output file prefix (default: preset name or 'run')")
    _add_config_flags(sim)
    sim.set_defaults(func=_cmd_simulate)

    kap = sub.add_parser("kappa", help="tabulate the dissipation rate kappa(t)")
    kap.add_argument("--span", type=float, required=True, help="time span [0, span]")
    kap.add_argument("--samples", type=int, default=1001)
    kap.add_argument("--preset", help="borrow schedule parameters from a simulate preset")
    kap.add_argument("--config", help="flat key=value configuration file")
    kap.add_argument("--from-manifest", dest="from_manifest")
    kap.add_argument("--outdir", default=".")
    kap.add_argument("--tag")
    _add_config_flags(kap)
    kap.set_defaults(func=_cmd_kappa)

    ss = sub.add_parser("steady-state", help="closed-form steady states and their residuals")
    ss.add_argument("--lambda0", type=float, required=True)
    ss.add_argument("--kappa0", type=float, required=True)
    ss.add_argument("--omega-t", dest="omega_T", type=float, default=1.0)
    ss.add_argument("--epsilon", type=float, default=0.0)
    ss.add_argument("--omega", type=float, help="explicit cavity frequency (with --omega0)")
    ss.add_argument("--omega0", type=float, help="explicit atomic frequency (with --omega)")
    ss.add_argument("--normal", action="store_true",
                    help="allow lambda0 <= lambda_c and report the normal phase")
    ss.add_argument("--no-relax", dest="relax", action="store_false",
                    help="skip the relaxation-oracle cross-check")
    ss.set_defaults(func=_cmd_steady_state)

    swp = sub.add_parser("sweep", help="run or resume a phase-diagram sweep")
    swp.add_argument("--preset", help=f"named sweep ({', '.join(sweep_preset_names())})")
    swp.add_argument("--spec", help="sweep specification file (axis1_*/axis2_*/base keys)")
    swp.add_argument("--resume", help="checkpoint file of an interrupted sweep")
    swp.add_argument("--set", action="append", metavar="KEY=VALUE",
                     help="override a base-config key (repeatable)")
    swp.add_argument("--workers", type=int, default=1)
    swp.add_argument("--base-seed", dest="base_seed", type=int)
    swp.add_argument("--outdir", default=".")
    swp.add_argument("--tag")
    swp.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, SweepError, ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SimulationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
