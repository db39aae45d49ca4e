from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable
from datetime import datetime, timezone
from typing import Any

import numpy as np

from casimove import __version__
from casimove.cavity import Cavity
from casimove.config import RunConfig, load_config
from casimove.exceptions import CasimoveError, ConfigError
from casimove.kinematics import Region
from casimove.quadrature import integrate_force, integrate_heat
from casimove.records import Row, RunRecord, write_record
from casimove.spectral import DensitySample, sample_density
from casimove.validation import format_report, run_validation

logger = logging.getLogger("casimove")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2


# --- Records ---


def _input_columns(config: RunConfig) -> Row:
    return {
        "a_m": config.gap,
        "beta": config.beta,
        "T1_K": config.plate1.temperature,
        "T2_K": config.plate2.temperature,
    }


def force_row(config: RunConfig) -> Row:
    cavity_config = config.cavity_config()
    units = cavity_config.units
    result = integrate_force(cavity_config, config.plan)
    stress, flux = units.stress_unit, units.flux_unit
    xx, xy, radiation = result.sigma_xx, result.sigma_xy, result.radiation_pressure
    return {
        **_input_columns(config),
        "pressure_Pa": result.pressure * stress,
        "sigma_xx_Pa": xx.total * stress,
        "sigma_xx_qvac_Pa": xx.qvac * stress,
        "sigma_xx_thermal1_Pa": xx.thermal1 * stress,
        "sigma_xx_thermal2_Pa": xx.thermal2 * stress,
        "sigma_xx_err_Pa": result.errors["sigma_xx"] * stress,
        "radiation_pressure1_Pa": radiation.thermal1 * stress,
        "radiation_pressure2_Pa": radiation.thermal2 * stress,
        "sigma_xy_Pa": xy.total * stress,
        "sigma_xy_thermal1_Pa": xy.thermal1 * stress,
        "sigma_xy_thermal2_Pa": xy.thermal2 * stress,
        "sigma_xy_err_Pa": result.errors["sigma_xy"] * stress,
        "poynting_1x_W_m2": result.poynting_1x * flux,
        "poynting_1x_err_W_m2": result.errors["poynting_1x"] * flux,
        "evaluations": result.evaluations,
        "converged": result.converged,
    }


def heat_row(config: RunConfig) -> Row:
    cavity_config = config.cavity_config()
    flux = cavity_config.units.flux_unit
    result = integrate_heat(cavity_config, config.plan)
    return {
        **_input_columns(config),
        "poynting_1x_W_m2": result.poynting_1x * flux,
        "poynting_1x_err_W_m2": result.errors["poynting_1x"] * flux,
        "poynting_2x_W_m2": result.poynting_2x * flux,
        "poynting_2x_err_W_m2": result.errors["poynting_2x"] * flux,
        "evaluations": result.evaluations,
        "converged": result.converged,
    }


def _sample_row(
    frequency_key: str,
    point: tuple[float, float, float],
    sample: DensitySample | None,
    reason: str,
) -> Row:
    omega, u, v = point
    if sample is None:
        value = quantum = thermal = float("nan")
        region = ""
    else:
        value, quantum, thermal = float(sample.value), float(sample.quantum), float(sample.thermal)
        region = Region(int(sample.region)).name.lower()
    return {
        frequency_key: omega,
        "u": u,
        "v": v,
        "region": region,
        "value": value,
        "quantum": quantum,
        "thermal": thermal,
        "reason": reason,
    }


def spectrum_rows(config: RunConfig) -> list[Row]:
    spec = config.spectrum
    if spec is None:
        raise ConfigError("spectrum", "missing; the spectrum command needs a spectrum section")
    cavity: Cavity = config.cavity_config().reduced()
    key = "kappa" if spec.channel.on_imaginary_axis else "omega"
    grid = np.meshgrid(spec.omega.points(), spec.u.points(), spec.v.points(), indexing="ij")
    omega, u, v = (g.ravel() for g in grid)
    try:
        sample = sample_density(spec.channel, cavity, omega, u, v)
    except CasimoveError as exc:
        logger.info("Spectrum grid has singular points (%s); evaluating point by point", exc)
    else:
        return [
            _sample_row(
                key,
                (float(omega[i]), float(u[i]), float(v[i])),
                DensitySample(
                    sample.value[i], sample.quantum[i], sample.thermal[i], sample.region[i], sample.channel
                ),
                "",
            )
            for i in range(omega.size)
        ]

    rows: list[Row] = []
    for point in zip(omega.tolist(), u.tolist(), v.tolist()):
        try:
            rows.append(_sample_row(key, point, sample_density(spec.channel, cavity, *point), ""))
        except CasimoveError as exc:
            rows.append(_sample_row(key, point, None, f"{type(exc).__name__}: {exc}"))
    return rows


def _meta(command: str, **extra: Any) -> dict[str, Any]:
    return {
        "package": "casimove",
        "version": __version__,
        "command": command,
        "created": datetime.now(timezone.utc).isoformat(),
        **extra,
    }


# --- Commands ---


def _run_points(command: str, config: RunConfig, compute: Callable[[RunConfig], Row]) -> int:
    rows: list[Row] = []
    for value, point in config.points():
        if value is not None:
            logger.info("%s: sweep point %g", command, value)
        rows.append(compute(point))
    record = RunRecord(_meta(command, units="SI"), [config.to_dict()], rows)
    write_record(record, config.output.format, config.output.path)
    if not record.complete:
        failed = sum(not r["converged"] for r in rows)
        logger.warning("%s: %d of %d points did not converge", command, failed, len(rows))
        return EXIT_FAILED
    return EXIT_OK


def cmd_force(config: RunConfig) -> int:
    return _run_points("force", config, force_row)


def cmd_heat(config: RunConfig) -> int:
    return _run_points("heat", config, heat_row)


def cmd_sweep(config: RunConfig) -> int:
    if config.sweep is None:
        raise ConfigError("sweep", "missing; the sweep command needs a sweep section")
    return _run_points("sweep", config, force_row)


def cmd_spectrum(config: RunConfig) -> int:
    rows = spectrum_rows(config)
    assert config.spectrum is not None
    record = RunRecord(
        _meta("spectrum", units="reduced", channel=config.spectrum.channel.value),
        [config.to_dict()],
        rows,
    )
    write_record(record, config.output.format, config.output.path)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    results = run_validation(samples=args.samples, seed=args.seed)
    if args.out is None and args.format is None:
        print(format_report(results))
    else:
        rows: list[Row] = [
            {
                "check": r.name,
                "samples": r.samples,
                "max_deviation": r.max_deviation,
                "tolerance": r.tolerance,
                "passed": r.passed,
            }
            for r in results
        ]
        record = RunRecord(_meta("validate", samples=args.samples, seed=args.seed), [], rows)
        write_record(record, args.format or "csv", args.out)
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.error("Validation failed: %s", ", ".join(failed))
        return EXIT_FAILED
    return EXIT_OK


_CONFIG_COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "force": cmd_force,
    "heat": cmd_heat,
    "sweep": cmd_sweep,
    "spectrum": cmd_spectrum,
}


# --- Parser ---


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    common.add_argument("--format", choices=("csv", "json"), help="output format")
    common.add_argument("--out", help="output file (default: stdout)")

    run = argparse.ArgumentParser(add_help=False)
    run.add_argument("--config", required=True, help="JSON run configuration")
    run.add_argument("--rel-tol", type=float, help="relative tolerance for every channel")
    run.add_argument("--abs-tol", type=float, help="absolute tolerance (reduced units)")
    run.add_argument("--threads", type=int, help="worker threads for cell evaluation")

    parser = argparse.ArgumentParser(
        prog="casimove",
        description="Casimir-Lifshitz stress, drag and heat flux between moving plates.",
        epilog=(
            "sigma_xx keeps the Maxwell-stress sign (+pi^2/240 for ideal mirrors); "
            "the conventional attractive Casimir stress is the pressure_Pa column."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser(
        "force", parents=[common, run], help="pressure (pressure_Pa = -sigma_xx), lateral stress and flux"
    )
    sub.add_parser(
        "heat", parents=[common, run], help="Poynting flux of plate 1 (lab) and plate 2 (co-moving)"
    )
    sub.add_parser("sweep", parents=[common, run], help="force over the config's sweep")
    sub.add_parser("spectrum", parents=[common, run], help="density grid of one channel")
    validate = sub.add_parser("validate", parents=[common], help="randomized identity checks")
    validate.add_argument("--samples", type=int, default=10_000, help="samples per check")
    validate.add_argument("--seed", type=int, default=0, help="random seed")
    return parser


def _apply_flags(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    return config.with_overrides(
        rel_tol=args.rel_tol,
        abs_tol=args.abs_tol,
        threads=args.threads,
        format=args.format,
        path=args.out,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "validate":
            return cmd_validate(args)
        config = _apply_flags(load_config(args.config), args)
        return _CONFIG_COMMANDS[args.command](config)
    except CasimoveError as exc:
        logger.error("%s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
