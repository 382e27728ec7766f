"""Command-line front end: config-driven pipelines emitting CSV/JSON files.

Commands::

    turning-frame classical --config cfg.json   # tau, phi, q trajectory table
    turning-frame evolve    --config cfg.json   # wavefunction snapshots
    turning-frame shift     --config cfg.json   # expectation series + report
    turning-frame estimate  --mass-amu 100 --temp-k 1e-6

One JSON document configures a whole pipeline (sections: model, state,
grid, tau, snapshots, q_grid, output); command-line flags override single
fields.  The default output directory comes from ``$TURNING_FRAME_OUTDIR``
when set.  Outputs are deterministic: identical configs produce
byte-identical files.

Exit codes: 0 success, 2 configuration or validation problem, 3 grid
resolution failure, 4 fit window not asymptotic.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .errors import (
    ConfigError,
    DomainError,
    InvalidStateError,
    NotAsymptoticError,
    ResolutionError,
    TurningFrameError,
)
from .model import (
    ClassicalState,
    FrameModel,
    GaussianMode,
    GaussianSpec,
    MomentumGrid,
    ShiftConvention,
    make_gaussian,
)
from .classical import q_of_tau, unwind_phi
from .quantum import evolve, expectation_series, to_position_representation
from .shift import extract_shift_numeric
from .estimates import PhysicalScenario, coherence_time_estimate, \
    displacement_estimate, lambda_gravitational

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RESOLUTION = 3
EXIT_ASYMPTOTICS = 4

_MISSING = object()


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _get(cfg: dict, path: str, default=_MISSING):
    node = cfg
    for key in path.split("."):
        if not isinstance(node, dict) or key not in node:
            if default is _MISSING:
                raise ConfigError(path, "required field is missing")
            return default
        node = node[key]
    return node


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError("config", f"file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}")


def _override(cfg: dict, path: str, value) -> None:
    if value is None:
        return
    node = cfg
    keys = path.split(".")
    for key in keys[:-1]:
        node = node.setdefault(key, {})
    node[keys[-1]] = value


def _outdir(cfg: dict) -> Path:
    default = os.environ.get("TURNING_FRAME_OUTDIR", ".")
    path = Path(_get(cfg, "output.dir", default))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _model_from(cfg: dict) -> FrameModel:
    conv = _get(cfg, "model.convention", ShiftConvention.MEAN_MOMENTUM.value)
    try:
        convention = ShiftConvention(conv)
    except ValueError:
        raise ConfigError("model.convention", f"unknown convention {conv!r}")
    return FrameModel(
        lam=float(_get(cfg, "model.lambda")),
        hbar=float(_get(cfg, "model.hbar", 1.0)),
        shift_convention=convention,
    )


def _grid_from(cfg: dict) -> MomentumGrid:
    return MomentumGrid(
        p_min=float(_get(cfg, "grid.p_min")),
        p_max=float(_get(cfg, "grid.p_max")),
        n=int(_get(cfg, "grid.n")),
    )


def _gaussian_from(cfg: dict, grid: MomentumGrid, model: FrameModel):
    mode_name = _get(cfg, "state.mode", GaussianMode.TRUNCATE_POSITIVE.value)
    try:
        mode = GaussianMode(mode_name)
    except ValueError:
        raise ConfigError("state.mode", f"unknown mode {mode_name!r}")
    spec = GaussianSpec(
        q0=float(_get(cfg, "state.q0")),
        p0=float(_get(cfg, "state.p0")),
        sigma=float(_get(cfg, "state.sigma")),
    )
    return spec, make_gaussian(spec, grid, model, mode=mode)


def _taus_from(cfg: dict) -> np.ndarray:
    start = float(_get(cfg, "tau.start"))
    stop = float(_get(cfg, "tau.stop"))
    num = int(_get(cfg, "tau.num"))
    if not stop > start:
        raise ConfigError("tau.stop", f"range [{start}, {stop}] is empty")
    if num < 2:
        raise ConfigError("tau.num", f"need at least 2 samples, got {num}")
    return np.linspace(start, stop, num)


def _write_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    rows = zip(*columns)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_classical(cfg: dict) -> int:
    model = _model_from(cfg)
    q0 = float(_get(cfg, "state.q0"))
    p = float(_get(cfg, "state.p", _get(cfg, "state.p0", _MISSING)))
    state = ClassicalState(q0=q0, p=p)
    taus = _taus_from(cfg)
    phi = unwind_phi(taus, p, model)
    q = q_of_tau(taus, state, model)
    out = _outdir(cfg) / f"{_get(cfg, 'output.prefix', 'classical')}_trajectory.csv"
    _write_csv(out, ["tau", "phi", "q_classical"], [taus, phi, q])
    print(out)
    return EXIT_OK


def cmd_evolve(cfg: dict) -> int:
    model = _model_from(cfg)
    grid = _grid_from(cfg)
    spec, state = _gaussian_from(cfg, grid, model)
    snapshots = _get(cfg, "snapshots")
    if not isinstance(snapshots, (list, tuple)) or len(snapshots) == 0:
        raise ConfigError("snapshots", "need a non-empty list of tau values")
    snapshots = [float(t) for t in snapshots]

    q_grid = None
    if _get(cfg, "q_grid", None) is not None:
        q_grid = np.linspace(
            float(_get(cfg, "q_grid.q_min")),
            float(_get(cfg, "q_grid.q_max")),
            int(_get(cfg, "q_grid.n")),
        )

    outdir = _outdir(cfg)
    prefix = _get(cfg, "output.prefix", "evolve")
    summary = {"snapshots": [], "state": {"q0": spec.q0, "p0": spec.p0,
                                          "sigma": spec.sigma}}
    for k, tau in enumerate(snapshots):
        evolved = evolve(state, tau, model)
        p_path = outdir / f"{prefix}_momentum_{k:02d}.csv"
        abs2 = np.abs(evolved.amps) ** 2
        _write_csv(
            p_path,
            ["p", "re", "im", "abs2"],
            [grid.nodes, evolved.amps.real, evolved.amps.imag, abs2],
        )
        entry = {"tau": tau, "norm_p": evolved.norm() ** 2,
                 "momentum_csv": p_path.name}
        if q_grid is not None:
            profile = to_position_representation(evolved, q_grid, model)
            q_path = outdir / f"{prefix}_position_{k:02d}.csv"
            _write_csv(
                q_path,
                ["q", "re", "im", "abs2"],
                [profile.q, profile.amps.real, profile.amps.imag,
                 np.abs(profile.amps) ** 2],
            )
            entry.update(
                norm_q=profile.norm,
                coverage_ok=profile.coverage_ok,
                position_csv=q_path.name,
            )
        summary["snapshots"].append(entry)
    out = outdir / f"{prefix}_summary.json"
    _write_json(out, summary)
    print(out)
    return EXIT_OK


def cmd_shift(cfg: dict) -> int:
    model = _model_from(cfg)
    grid = _grid_from(cfg)
    spec, state = _gaussian_from(cfg, grid, model)
    taus = _taus_from(cfg)
    classical = ClassicalState(q0=spec.q0, p=spec.p0)
    series = expectation_series(
        state, taus, model, with_variance=True, classical=classical
    )
    report = extract_shift_numeric(series, state, model)

    outdir = _outdir(cfg)
    prefix = _get(cfg, "output.prefix", "shift")
    series_path = outdir / f"{prefix}_series.csv"
    _write_csv(
        series_path,
        ["tau", "q_classical", "q_mean", "q_var", "norm"],
        [series.taus, series.q_classical, series.q_mean, series.q_var,
         series.norm],
    )
    report_path = outdir / f"{prefix}_report.json"
    payload = report.to_dict()
    payload["inputs"] = {
        "lambda": model.lam,
        "hbar": model.hbar,
        "q0": spec.q0,
        "p0": spec.p0,
        "sigma": spec.sigma,
        "grid": {"p_min": grid.p_min, "p_max": grid.p_max, "n": grid.n},
    }
    _write_json(report_path, payload)
    print(series_path)
    print(report_path)
    return EXIT_OK


def cmd_estimate(args: argparse.Namespace) -> int:
    if args.mass_amu is None and args.mass_kg is None:
        raise ConfigError("mass", "supply --mass-amu or --mass-kg")
    if args.temp_k is None:
        raise ConfigError("temp_k", "supply --temp-k")
    gravity = args.gravity
    if args.mass_amu is not None:
        scenario = PhysicalScenario.from_amu(args.mass_amu, args.temp_k, gravity)
    else:
        scenario = PhysicalScenario(args.mass_kg, args.temp_k, gravity)
    payload = {
        "lambda_SI": lambda_gravitational(scenario),
        "delta_q_m": displacement_estimate(scenario),
        "delta_tau_s": coherence_time_estimate(scenario),
        "inputs": {
            "mass_kg": scenario.mass_kg,
            "mass_amu": scenario.mass_amu,
            "temperature_k": scenario.temperature_k,
            "gravity": scenario.gravity,
        },
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common_overrides(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON configuration file")
    parser.add_argument("--lambda", dest="lam", type=float,
                        help="frame potential slope")
    parser.add_argument("--hbar", type=float)
    parser.add_argument("--convention",
                        choices=[c.value for c in ShiftConvention])
    parser.add_argument("--q0", type=float)
    parser.add_argument("--p0", type=float)
    parser.add_argument("--sigma", type=float)
    parser.add_argument("--mode", choices=[m.value for m in GaussianMode])
    parser.add_argument("--p-min", type=float)
    parser.add_argument("--p-max", type=float)
    parser.add_argument("--n", type=int)
    parser.add_argument("--tau-start", type=float)
    parser.add_argument("--tau-stop", type=float)
    parser.add_argument("--tau-num", type=int)
    parser.add_argument("--outdir")
    parser.add_argument("--prefix")


def _collect_config(args: argparse.Namespace) -> dict:
    cfg = _load_config(args.config)
    _override(cfg, "model.lambda", args.lam)
    _override(cfg, "model.hbar", args.hbar)
    _override(cfg, "model.convention", args.convention)
    _override(cfg, "state.q0", args.q0)
    _override(cfg, "state.p0", args.p0)
    _override(cfg, "state.sigma", args.sigma)
    _override(cfg, "state.mode", args.mode)
    _override(cfg, "grid.p_min", args.p_min)
    _override(cfg, "grid.p_max", args.p_max)
    _override(cfg, "grid.n", args.n)
    _override(cfg, "tau.start", args.tau_start)
    _override(cfg, "tau.stop", args.tau_stop)
    _override(cfg, "tau.num", args.tau_num)
    _override(cfg, "output.dir", args.outdir)
    _override(cfg, "output.prefix", args.prefix)
    if getattr(args, "snapshots", None):
        _override(cfg, "snapshots",
                  [float(t) for t in args.snapshots.split(",")])
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="turning-frame",
        description="Relational evolution against a frame with a turning point",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (
        ("classical", "emit the closed-form relational trajectory"),
        ("evolve", "emit wavefunction snapshots in momentum/position space"),
        ("shift", "emit the expectation series and displacement-shift report"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_common_overrides(p)
        if name == "evolve":
            p.add_argument("--snapshots", help="comma-separated tau values")

    p_est = sub.add_parser("estimate", help="laboratory order-of-magnitude numbers")
    p_est.add_argument("--mass-amu", type=float)
    p_est.add_argument("--mass-kg", type=float)
    p_est.add_argument("--temp-k", type=float)
    p_est.add_argument("--gravity", type=float, default=9.81)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "estimate":
            return cmd_estimate(args)
        cfg = _collect_config(args)
        if args.command == "classical":
            return cmd_classical(cfg)
        if args.command == "evolve":
            return cmd_evolve(cfg)
        return cmd_shift(cfg)
    except NotAsymptoticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASYMPTOTICS
    except ResolutionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOLUTION
    except (ConfigError, DomainError, InvalidStateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TurningFrameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
