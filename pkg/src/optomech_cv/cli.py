"""Command-line interface.

Subcommands mirror the library pipeline: ``derive``, ``stability``,
``cm``, ``entangle``, ``rate`` operate on one parameter set from a flat
TOML config; ``sweep`` grids one or two parameters; ``figure`` runs a
named reproduction preset.  Every command writes machine-readable output
(JSON, and CSV where tabular) into ``--out`` and prints a short summary.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import sys
from pathlib import Path

from ._version import __version__
from .config import apply_overrides, read_params
from .conventions import CONVENTIONS
from .densecoding import rate_point
from .dynamics import build, stability
from .emit import fmt_cell, write_json, write_rate_csv, write_sweep_csv
from .errors import ConfigError, ConvergenceError, ParameterDomainError, UnstableModelError
from .gaussian import duan_sum, log_negativity, pt_symplectic, reduce_two_mode
from .params import derive_any
from .presets import PRESET_IDS, figure, get_preset
from .spectral import filters_from, output_cm
from .sweep import Axis, SweepSpec, run_sweep

_STATE_LABELS = ("q", "p", "x_l", "y_l", "x_r", "y_r")


def _meta(params, assumed):
    return {
        "library": {"name": "optomech-cv", "version": __version__},
        "conventions": CONVENTIONS,
        "parameters": {
            f.name: getattr(params, f.name)
            for f in dataclasses.fields(type(params))
            if f.name != "physical"
        },
        "assumed": {name: True for name in sorted(assumed)},
    }


def _load_params(args):
    params, assumed = read_params(args.config)
    overridden = apply_overrides(params, getattr(args, "set", None))
    if overridden is not params:
        # Overrides supersede both file values and defaults.
        assumed = {
            k: v for k, v in assumed.items() if getattr(overridden, k) == v
        }
    return overridden, assumed


def _derived_dict(derived):
    return {
        name: getattr(derived, name)
        for name in (
            "g0_r",
            "g0_l",
            "eps_r",
            "eps_l",
            "gamma_m",
            "nbar_mech",
            "alpha_mag",
            "beta_mag",
            "geff_r",
            "geff_l",
            "delta_r",
            "delta_l",
            "q_s",
        )
    }


def _block_dict(block):
    return {
        "big_l": block.big_l,
        "big_r": block.big_r,
        "c": block.c,
        "c_prime": block.c_prime,
        "asymmetry": block.asymmetry,
    }


def _pipeline_cm(params):
    derived = derive_any(params)
    model = build(derived)
    cm = output_cm(model, filters_from(params))
    return derived, model, cm


def _cmd_derive(args):
    params, assumed = _load_params(args)
    derived = derive_any(params)
    payload = _meta(params, assumed)
    payload["derived"] = _derived_dict(derived)
    out = Path(args.out) / "derive.json"
    write_json(out, payload)
    print(
        f"geff_r/omega_m = {derived.geff_r / params.omega_m:.6f}, "
        f"geff_l/omega_m = {derived.geff_l / params.omega_m:.6f}, "
        f"nbar_mech = {derived.nbar_mech:.3f}"
    )
    print(f"wrote {out}")
    return 0


def _cmd_stability(args):
    params, assumed = _load_params(args)
    derived = derive_any(params)
    report = stability(build(derived))
    payload = _meta(params, assumed)
    payload["derived"] = _derived_dict(derived)
    payload["stability"] = {"stable": report.stable, "margin": report.margin}
    out = Path(args.out) / "stability.json"
    write_json(out, payload)
    state = "stable" if report.stable else "UNSTABLE"
    print(f"{state}; spectral margin {report.margin:.6e} rad/s")
    print(f"wrote {out}")
    return 0


def _cmd_cm(args):
    params, assumed = _load_params(args)
    derived, _, cm = _pipeline_cm(params)
    payload = _meta(params, assumed)
    payload["derived"] = _derived_dict(derived)
    payload["cm"] = {
        "labels": list(_STATE_LABELS),
        "matrix": cm.matrix.tolist(),
        "quad_error": cm.quad_error,
    }
    out_json = Path(args.out) / "cm.json"
    write_json(out_json, payload)
    out_csv = Path(args.out) / "cm.csv"
    out_csv.parent.mkdir(parents=True, exist_ok=True)
    with open(out_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_STATE_LABELS)
        for row in cm.matrix:
            writer.writerow([fmt_cell(x) for x in row])
    print(f"quad_error = {cm.quad_error:.3e}")
    print(f"wrote {out_json} and {out_csv}")
    return 0


def _cmd_entangle(args):
    params, assumed = _load_params(args)
    derived, _, cm = _pipeline_cm(params)
    block = reduce_two_mode(cm)
    pair = pt_symplectic(block)
    payload = _meta(params, assumed)
    payload["derived"] = _derived_dict(derived)
    payload["block"] = _block_dict(block)
    payload["entanglement"] = {
        "nu_minus": pair.nu_minus,
        "nu_plus": pair.nu_plus,
        "zeta": pair.zeta,
        "log_negativity": log_negativity(block),
        "duan_sum": duan_sum(block),
        "quad_error": cm.quad_error,
    }
    out = Path(args.out) / "entangle.json"
    write_json(out, payload)
    print(
        f"E_N = {payload['entanglement']['log_negativity']:.4f}, "
        f"zeta = {pair.zeta:.4f}, duan = {payload['entanglement']['duan_sum']:.4f}"
    )
    print(f"wrote {out}")
    return 0


def _cmd_rate(args):
    params, assumed = _load_params(args)
    derived, _, cm = _pipeline_cm(params)
    block = reduce_two_mode(cm)
    pt = rate_point(block, args.nbar)
    payload = _meta(params, assumed)
    payload["derived"] = _derived_dict(derived)
    payload["block"] = _block_dict(block)
    payload["rate"] = {
        name: (None if pt_val != pt_val else pt_val)
        for name, pt_val in (
            ("nbar", pt.nbar),
            ("v_s", pt.v_s),
            ("i_om", pt.i_om),
            ("i_d_opt", pt.i_d_opt),
            ("i_f", pt.i_f),
            ("i_s", pt.i_s),
            ("i_c_het", pt.i_c_het),
            ("i_c", pt.i_c),
        )
    }
    payload["rate"]["rate_floor_nbar"] = block.big_l - 0.5
    out = Path(args.out) / "rate.json"
    write_json(out, payload)
    write_rate_csv(Path(args.out) / "rate.csv", [pt])
    if pt.i_om != pt.i_om:
        print(
            f"nbar = {args.nbar} below the rate floor "
            f"{block.big_l - 0.5:.4f}; i_om undefined"
        )
    else:
        print(f"i_om = {pt.i_om:.4f} bits at nbar = {args.nbar}")
    print(f"wrote {out}")
    return 0


def _parse_axis(text: str) -> Axis:
    parts = text.split(":")
    if len(parts) != 4:
        raise ConfigError(
            f"axis must be path:lo:hi:points, got {text!r}"
        )
    path, lo, hi, points = parts
    try:
        return Axis(path=path, lo=float(lo), hi=float(hi), points=int(points))
    except ValueError as exc:
        raise ConfigError(f"bad axis {text!r}: {exc}") from exc


def _cmd_sweep(args):
    params, assumed = _load_params(args)
    spec = SweepSpec(
        axis1=_parse_axis(args.axis1),
        axis2=_parse_axis(args.axis2) if args.axis2 else None,
        observable=args.observable,
        observable_nbar=args.nbar,
    )
    result = run_sweep(spec, params, workers=args.workers)
    out_csv = Path(args.out) / "sweep.csv"
    write_sweep_csv(out_csv, result)
    payload = _meta(params, assumed)
    payload["sweep"] = {
        "observable": spec.observable,
        "observable_nbar": spec.observable_nbar,
        "axis1": dataclasses.asdict(spec.axis1),
        "axis2": None if spec.axis2 is None else dataclasses.asdict(spec.axis2),
        "masked_points": int((~result.stable).sum()),
        "csv": out_csv.name,
    }
    out_json = Path(args.out) / "sweep.json"
    write_json(out_json, payload)
    total = result.stable.size
    print(
        f"{total} grid points, {int((~result.stable).sum())} masked unstable"
    )
    print(f"wrote {out_csv} and {out_json}")
    return 0


def _cmd_figure(args):
    preset = get_preset(args.preset)  # validate id before any work
    output = figure(args.preset, args.out, workers=args.workers)
    print(f"{preset.preset_id}: {preset.description}")
    for path in output.csv_paths:
        print(f"wrote {path}")
    print(f"wrote {output.manifest_path}")
    return 0


def _add_common(parser, config_required=True):
    parser.add_argument(
        "--config",
        required=config_required,
        help="flat TOML file; keys are PhysicalParams field names (SI units)",
    )
    parser.add_argument(
        "--out", required=True, help="output directory (created if missing)"
    )
    parser.add_argument(
        "--set",
        action="append",
        metavar="KEY=VALUE",
        help="override one config value (repeatable)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optomech-cv",
        description="Stationary output entanglement and dense-coding rates "
        "of a two-cavity optomechanical system",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", help="derived coupling/thermal coefficients")
    _add_common(p)
    p.set_defaults(func=_cmd_derive)

    p = sub.add_parser("stability", help="spectral stability of the drift matrix")
    _add_common(p)
    p.set_defaults(func=_cmd_stability)

    p = sub.add_parser("cm", help="stationary filtered-output covariance matrix")
    _add_common(p)
    p.set_defaults(func=_cmd_cm)

    p = sub.add_parser("entangle", help="two-mode block and entanglement measures")
    _add_common(p)
    p.set_defaults(func=_cmd_entangle)

    p = sub.add_parser("rate", help="dense-coding rate at one photon budget")
    _add_common(p)
    p.add_argument("--nbar", type=float, required=True, help="mean photon budget")
    p.set_defaults(func=_cmd_rate)

    p = sub.add_parser("sweep", help="grid a parameter (or two) and tabulate")
    _add_common(p)
    p.add_argument(
        "--axis1", required=True, metavar="PATH:LO:HI:N", help="first sweep axis"
    )
    p.add_argument(
        "--axis2", metavar="PATH:LO:HI:N", help="optional second sweep axis"
    )
    p.add_argument(
        "--observable",
        default="LogNegativity",
        choices=("LogNegativity", "DenseCodingRate", "DuanSum", "StabilityMargin"),
    )
    p.add_argument(
        "--nbar", type=float, help="photon budget (DenseCodingRate only)"
    )
    p.add_argument("--workers", type=int, help="parallel worker count")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("figure", help="run a figure-reproduction preset")
    p.add_argument("preset", choices=PRESET_IDS)
    p.add_argument(
        "--out", required=True, help="output directory (created if missing)"
    )
    p.add_argument("--workers", type=int, help="parallel worker count")
    p.set_defaults(func=_cmd_figure)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        ConfigError,
        ParameterDomainError,
        UnstableModelError,
        ConvergenceError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
