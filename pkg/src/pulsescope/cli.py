"""Command-line front end.

Subcommands: spectrum, focus, resolve, excite, scenario, figure, scan,
oracle. Global flags: --config PATH (scenario file; omitted or empty file
means the built-in reference scenario), --out DIR (output directory,
overriding the config and the PULSESCOPE_OUT environment variable), and
--grid-scale X (multiplies every default grid density).

Config dialect: one `key = value` per line, `#` comments. Numeric keys
carry their SI unit as a suffix; run `pulsescope --help-config` to list
all keys with defaults. Exit codes: 0 success, 2 configuration error,
3 numerical-convergence error, 4 regime violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import fields, replace
from pathlib import Path

import numpy as np

from .config import ScenarioConfig, load_config
from .errors import ConfigError, NumericalConvergenceError, RegimeViolationError
from .excitation import excitation_probability, imaging_rate
from .focal import (
    RadialCurve,
    focal_intensity_rephased,
    intensity_resolution_curve,
    spot_size,
)
from .scenario import (
    FIGURES,
    SCAN_PARAMETERS,
    emit_figure_data,
    oracle_compare,
    run_scenario,
    scan,
)

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_REGIME = 4


def _config_help() -> str:
    lines = ["Scenario config keys (flat `key = value`, '#' comments):", ""]
    for f in fields(ScenarioConfig):
        default = getattr(ScenarioConfig(), f.name)
        lines.append(f"  {f.name} = {default!r}")
    lines += ["", "Unit suffixes (_m, _s, _J, _rad_per_s) are part of the key;",
              "unknown keys are rejected. An empty file selects the defaults."]
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pulsescope",
        description="Focused ultrashort pulses and two-level excitation "
                    "for far-field nanoscopy.",
    )
    parser.add_argument("--config", type=str, default=None,
                        help="scenario config file (flat key = value text)")
    parser.add_argument("--out", type=str, default=None,
                        help="output directory (overrides config and "
                             "PULSESCOPE_OUT)")
    parser.add_argument("--grid-scale", type=float, default=None,
                        help="multiply all default grid densities")
    parser.add_argument("--help-config", action="store_true",
                        help="describe the config dialect and exit")
    sub = parser.add_subparsers(dest="command")

    sub.add_parser("spectrum", help="spectral density curve and statistics")
    sub.add_parser("focus", help="rephased focal intensity radial curve")
    sub.add_parser("resolve", help="intensity resolution curve and spot size")
    sub.add_parser("excite", help="focal excitation probability record")
    sub.add_parser("scenario", help="full report: eta, p_e, R, spot sizes")

    p_fig = sub.add_parser("figure", help="emit figure data as CSV")
    p_fig.add_argument("id", choices=FIGURES)

    p_scan = sub.add_parser("scan", help="parameter scan table")
    p_scan.add_argument("parameter", choices=SCAN_PARAMETERS)
    p_scan.add_argument("values", nargs="+", type=float)

    p_or = sub.add_parser("oracle", help="oracle-vs-analytic comparison table")
    p_or.add_argument("pairs", nargs="*", type=float,
                      help="flat list: ratio1 eta1 ratio2 eta2 ...")
    return parser


def _load(args) -> ScenarioConfig:
    if args.config is None:
        cfg = ScenarioConfig()
        cfg.build()
    else:
        cfg = load_config(args.config)
    out = args.out or os.environ.get("PULSESCOPE_OUT")
    if out:
        cfg = replace(cfg, output_dir=str(out))
    if args.grid_scale is not None:
        if args.grid_scale <= 0:
            raise ConfigError("--grid-scale must be positive")
        cfg = replace(cfg, grid_scale=args.grid_scale)
    return cfg


def _cmd_spectrum(cfg: ScenarioConfig) -> None:
    spectrum = cfg.build()[0]
    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    w = spectrum.frequency_grid(2001)
    dens = np.abs(spectrum.value(w)) ** 2
    rows = "".join(f"{float(wi)!r},{float(di)!r}\n" for wi, di in zip(w, dens))
    (outdir / "spectrum.csv").write_text("omega_rad_per_s,density_s\n" + rows)
    (outdir / "spectrum.json").write_text(
        json.dumps(spectrum.serializable(), indent=2, sort_keys=True) + "\n")
    print(f"mean frequency {spectrum.mean_frequency!r} rad/s, "
          f"mean wavelength {spectrum.mean_wavelength!r} m")


def _cmd_focus(cfg: ScenarioConfig) -> None:
    spectrum, geometry, _, _ = cfg.build()
    rho_max = spectrum.mean_wavelength / geometry.numerical_aperture
    radii = np.linspace(0.0, rho_max, 81)
    vals = focal_intensity_rephased(geometry, spectrum, radii)
    curve = RadialCurve(radii, vals, "intensity",
                        {"spectrum": spectrum.serializable()})
    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "focal_intensity.csv").write_text(curve.to_csv())
    print(f"wrote focal_intensity.csv ({len(radii)} radii)")


def _cmd_resolve(cfg: ScenarioConfig) -> None:
    spectrum, geometry, _, _ = cfg.build()
    curve = intensity_resolution_curve(geometry, spectrum,
                                       grid_scale=cfg.grid_scale)
    spot = spot_size(curve)
    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "intensity_resolution.csv").write_text(curve.to_csv())
    print(f"intensity spot size {spot!r} m")


def _cmd_excite(cfg: ScenarioConfig) -> None:
    spectrum, geometry, tls, train = cfg.build()
    result = excitation_probability(train, tls, geometry, spectrum, 0.0,
                                    cfg.grid_scale)
    rate = imaging_rate(train, tls, result.p_e)
    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "excitation.json").write_text(result.to_json())
    print(f"p_e(0) = {result.p_e!r}, eta = {result.eta!r}, R = {rate!r} Hz")


def _cmd_scenario(cfg: ScenarioConfig) -> None:
    report = run_scenario(cfg)
    print(f"eta = {report.eta!r}")
    print(f"p_e(0) = {report.p_e_focal!r}")
    print(f"imaging rate = {report.imaging_rate_hz!r} Hz")
    print(f"intensity spot = {report.spot_intensity_m!r} m")
    print(f"excitation spot = {report.spot_excitation_m!r} m")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.help_config:
        print(_config_help())
        return 0
    if args.command is None:
        parser.print_help()
        return 0
    try:
        cfg = _load(args)
        if args.command == "spectrum":
            _cmd_spectrum(cfg)
        elif args.command == "focus":
            _cmd_focus(cfg)
        elif args.command == "resolve":
            _cmd_resolve(cfg)
        elif args.command == "excite":
            _cmd_excite(cfg)
        elif args.command == "scenario":
            _cmd_scenario(cfg)
        elif args.command == "figure":
            name = emit_figure_data(cfg, args.id)
            print(f"wrote {name}")
        elif args.command == "scan":
            name = scan(cfg, args.parameter, args.values)
            print(f"wrote {name}")
        elif args.command == "oracle":
            if len(args.pairs) % 2:
                raise ConfigError("oracle expects an even list: ratio eta ...")
            pairs = list(zip(args.pairs[0::2], args.pairs[1::2]))
            name = oracle_compare(cfg, pairs)
            print(f"wrote {name}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalConvergenceError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except RegimeViolationError as exc:
        print(f"regime violation: {exc}", file=sys.stderr)
        return EXIT_REGIME
    return 0


if __name__ == "__main__":
    sys.exit(main())
