"""Command line surface: scene configs in, deterministic CSV/JSON tables out.

Exit codes: 0 success, 2 config or argument error, 3 degenerate geometry,
4 incompatible mode/archetype, 5 numerical validity failure.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .capacity import rate_report
from .channel import (
    SPEED_OF_LIGHT_M_S,
    channel_matrix,
    phase_profile,
    validity_from_apertures,
)
from .config import load_scene_config
from .errors import ConfigError, IncompatibleModeError, LosMimoError
from .geometry import Archetype
from .optimize import (
    SweepSpec,
    SweepVariable,
    aosa_schedule,
    fixed_angle_plan,
    optimize_rotation,
    select_fixed_angles,
    snr_db_to_linear,
    sweep,
)
from . import serialize as ser


def _parse_values(text: str, name: str) -> list[float]:
    """Grid syntax: 'start:step:stop' (inclusive) or comma-separated values."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError("expected start:step:stop")
            start, step, stop = parts
            if step <= 0:
                raise ValueError("step must be positive")
            count = math.floor((stop - start) / step + 1e-9) + 1
            if count < 1:
                raise ValueError("empty grid (start > stop)")
            return [start + i * step for i in range(count)]
        values = [float(p) for p in text.split(",") if p.strip() != ""]
        if not values:
            raise ValueError("no values")
        return values
    except ValueError as exc:
        raise ConfigError(f"bad {name} '{text}': {exc}") from exc


def _write(out_path, text: str):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fixed_snr_db(args, cfg) -> float:
    if args.snr_db is not None:
        values = _parse_values(args.snr_db, "--snr-db")
        if len(values) != 1:
            raise ConfigError("exactly one --snr-db value is required here")
        return values[0]
    if cfg.snr_db is not None and len(cfg.snr_db) == 1:
        return cfg.snr_db[0]
    raise ConfigError("a single fixed SNR is required (--snr-db or scalar snr_db in config)")


def cmd_channel(args) -> int:
    cfg = load_scene_config(args.config)
    h = channel_matrix(cfg.scene, cfg.model)
    if args.format == "json":
        _write(args.out, ser.json_dumps(ser.channel_json_doc(h)))
    else:
        _write(args.out, ser.channel_csv(h))
        if args.out:
            _write(str(args.out) + ".json", ser.json_dumps(ser.channel_meta(h)))
    return 0


def cmd_capacity(args) -> int:
    cfg = load_scene_config(args.config)
    if args.snr_db is not None:
        snrs = _parse_values(args.snr_db, "--snr-db")
    elif cfg.snr_db is not None:
        snrs = list(cfg.snr_db)
    else:
        raise ConfigError("no SNR given: pass --snr-db or set snr_db in the config")
    h = channel_matrix(cfg.scene, cfg.model)
    reports = [rate_report(h, snr_db_to_linear(s)) for s in snrs]
    if args.format == "json":
        _write(args.out, ser.json_dumps([ser.rate_report_dict(r) for r in reports]))
    else:
        _write(args.out, ser.rate_reports_csv(reports))
    return 0


_VARIABLES = {v.value: v for v in SweepVariable}


def cmd_sweep(args) -> int:
    cfg = load_scene_config(args.config)
    variable = _VARIABLES[args.var]
    grid = _parse_values(args.grid, "--grid")
    if len(grid) > 1 and any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("--grid values must be strictly increasing")
    snr_db = 0.0
    if variable is not SweepVariable.SNR_DB:
        snr_db = _fixed_snr_db(args, cfg)
    spec = SweepSpec(
        variable=variable,
        grid=np.asarray(grid),
        base_scene=cfg.scene,
        model=cfg.model,
        snr_db=snr_db,
    )
    points = sweep(spec)
    if args.format == "json":
        _write(args.out, ser.json_dumps(ser.sweep_points_json(points)))
    else:
        _write(args.out, ser.sweep_points_csv(points))
    return 0


def cmd_optimize(args) -> int:
    cfg = load_scene_config(args.config)
    scene, model = cfg.scene, cfg.model

    if args.mode == "rotation":
        snr_db = _fixed_snr_db(args, cfg)
        angle, report = optimize_rotation(scene, snr_db_to_linear(snr_db), model)
        if args.format == "json":
            doc = {"angle_rad": angle, "report": ser.rate_report_dict(report)}
            _write(args.out, ser.json_dumps(doc))
        else:
            row = (
                f"{ser.fmt(angle)},{ser.fmt(snr_db)},"
                f"{ser.fmt(report.spectral_efficiency_bpshz)},"
                f"{ser.fmt(report.upper_bound_bpshz)},{report.active_rank},"
                f"rotation_rad={angle:.12g}"
            )
            _write(args.out, "x_value,snr_db,se_bpshz,ub_bpshz,active_rank,config_descriptor\n" + row + "\n")
        return 0

    if args.snr_grid is None:
        raise ConfigError(f"--snr-grid is required for mode '{args.mode}'")
    snr_grid = _parse_values(args.snr_grid, "--snr-grid")

    if args.mode == "aosa":
        if scene.tx.archetype is not Archetype.AOSA or scene.rx.archetype is not Archetype.AOSA:
            raise IncompatibleModeError(
                "optimize --mode aosa needs 'aosa' array blocks in the config"
            )
        elem = cfg.tx_block.get("element_spacing_m")
        plan = aosa_schedule(
            scene.tx.element_count, scene, snr_grid, model, element_spacing_m=elem
        )
        if args.format == "json":
            _write(args.out, ser.json_dumps(ser.plan_json(plan)))
        else:
            _write(args.out, ser.plan_csv(plan))
        return 0

    # angles mode
    angles = select_fixed_angles(scene, args.k, snr_grid, model)
    plan = fixed_angle_plan(scene, angles, snr_grid, model)
    worst_gap = 0.0
    for entry in plan.entries:
        _, ref = optimize_rotation(scene, snr_db_to_linear(entry.snr_db), model)
        ref_se = ref.spectral_efficiency_bpshz
        if ref_se > 0:
            worst_gap = max(worst_gap, 1.0 - entry.se_bpshz / ref_se)
    if args.format == "json":
        doc = {
            "angles_rad": angles,
            "worst_case_gap": worst_gap,
            "plan": ser.plan_json(plan),
        }
        _write(args.out, ser.json_dumps(doc))
    else:
        _write(args.out, ser.plan_csv(plan))
    return 0


def cmd_validity(args) -> int:
    if args.tx_aperture <= 0 or args.rx_aperture <= 0:
        raise ConfigError("apertures must be positive")
    freqs = _parse_values(args.freq_grid, "--freq-grid")
    dists = _parse_values(args.dist_grid, "--dist-grid")
    if any(f <= 0 for f in freqs) or any(d <= 0 for d in dists):
        raise ConfigError("frequencies and distances must be positive")
    rows = []
    for f in freqs:
        lam = SPEED_OF_LIGHT_M_S / f
        for d in dists:
            regime = validity_from_apertures(args.tx_aperture, args.rx_aperture, lam, d)
            rows.append((f, d, regime.value))
    if args.format == "json":
        doc = [{"freq_hz": f, "dist_m": d, "regime": r} for f, d, r in rows]
        _write(args.out, ser.json_dumps(doc))
    else:
        _write(args.out, ser.validity_csv(rows))
    return 0


def cmd_phase_profile(args) -> int:
    if args.steps < 3:
        raise ConfigError("--steps must be >= 3 to fit a quadratic")
    if args.freq <= 0 or args.distance <= 0 or args.step_size <= 0:
        raise ConfigError("--freq, --distance, and --step-size must be positive")
    lam = SPEED_OF_LIGHT_M_S / args.freq
    if args.direction == "transverse":
        # scan symmetric about broadside so the fitted curvature matches the
        # small-offset expansion about the boresight distance
        start = (-(args.steps - 1) / 2 * args.step_size, 0.0, args.distance)
        direction = (1.0, 0.0, 0.0)
        c2_predicted = -math.pi / (lam * args.distance)
    else:
        start = (0.0, 0.0, args.distance)
        direction = (0.0, 0.0, 1.0)
        c2_predicted = 0.0
    profile = phase_profile(
        (0.0, 0.0, 0.0), start, args.step_size, args.steps, direction, lam
    )
    summary = ser.phase_summary_dict(profile, c2_predicted)
    if args.format == "json":
        doc = dict(summary)
        x = profile.displacements_m
        c0, c1, c2 = profile.quadratic_fit
        b0, b1 = profile.linear_fit
        doc["samples"] = {
            "displacement_m": x.tolist(),
            "phase_rad": profile.phase_rad.tolist(),
            "quadratic_fit_rad": (c0 + c1 * x + c2 * x * x).tolist(),
            "linear_fit_rad": (b0 + b1 * x).tolist(),
        }
        _write(args.out, ser.json_dumps(doc))
    else:
        _write(args.out, ser.phase_profile_csv(profile))
        if args.out:
            _write(str(args.out) + ".json", ser.json_dumps(summary))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="losmimo",
        description="LOS MIMO channel, capacity, and array-architecture toolbox",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, default_format="csv"):
        p.add_argument("--out", help="output file (stdout when omitted)")
        p.add_argument("--format", choices=("csv", "json"), default=default_format)

    p = sub.add_parser("channel", help="write the channel matrix for a scene config")
    p.add_argument("config")
    add_io(p)
    p.set_defaults(func=cmd_channel)

    p = sub.add_parser("capacity", help="waterfilling rate report(s) for a scene")
    p.add_argument("config")
    p.add_argument("--snr-db", help="SNR value or comma list in dB")
    add_io(p)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("sweep", help="sweep one variable over a grid")
    p.add_argument("config")
    p.add_argument("--var", required=True, choices=sorted(_VARIABLES))
    p.add_argument("--grid", required=True, help="start:step:stop or comma list")
    p.add_argument("--snr-db", help="fixed SNR in dB (non-SNR sweeps)")
    add_io(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", help="architecture optimization per SNR")
    p.add_argument("config")
    p.add_argument("--mode", required=True, choices=("rotation", "aosa", "angles"))
    p.add_argument("--k", type=int, default=3, help="number of fixed angles")
    p.add_argument("--snr-grid", help="SNR grid in dB (aosa/angles modes)")
    p.add_argument("--snr-db", help="single SNR in dB (rotation mode)")
    add_io(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("validity", help="planar-vs-spherical region map")
    p.add_argument("--freq-grid", required=True)
    p.add_argument("--dist-grid", required=True)
    p.add_argument("--tx-aperture", type=float, required=True)
    p.add_argument("--rx-aperture", type=float, required=True)
    add_io(p)
    p.set_defaults(func=cmd_validity)

    p = sub.add_parser("phase-profile", help="synthetic scan phase curvature")
    p.add_argument("--freq", type=float, required=True)
    p.add_argument("--distance", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--step-size", type=float, required=True)
    p.add_argument(
        "--direction", choices=("transverse", "longitudinal"), default="transverse"
    )
    add_io(p)
    p.set_defaults(func=cmd_phase_profile)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except LosMimoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


def entry():
    sys.exit(main())
