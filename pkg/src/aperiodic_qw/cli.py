"""Command-line entry point: ``evolve``, ``spectrum``, ``sweep``, ``asymptote``.

Every flag can also be set in an INI-style ``--config`` file, in a section
named after the subcommand (or ``[DEFAULT]``), using the flag name without
leading dashes::

    [sweep]
    theta0 = 0:2pi:pi/50
    nu = 0:4:0.05
    steps = 500

Command-line flags win over the file. Exit codes: 0 success, 2 invalid
input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .coin_field import build_field, parse_angle
from .entanglement import asymptotic_fit
from .errors import NumericalError, ValidationError
from .evolution import DEFAULT_MARGIN, run_walk
from .lattice_state import state_to_json
from .observables import ObservableSeries, parse_probes
from .spectrum import (
    CLUSTER_MIN,
    DEGENERACY_TOL,
    GAP_THRESHOLD,
    band_report,
    build_floquet_matrix,
    quasi_energies,
)
from .sweep import SweepSpec, run_sweep

log = logging.getLogger("aperiodic_qw")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

# Fallbacks applied after command line and config file.
_DEFAULTS = {
    "evolve": {
        "theta0": "pi/4", "nu": 0.0, "n0": None, "steps": 100,
        "probes": "sp,ipr,entropy,trace", "record_every": 1, "out": None,
        "margin": DEFAULT_MARGIN, "state_out": None,
    },
    "spectrum": {
        "theta0": "pi/4", "nu": 0.0, "n": 64, "out": None,
        "gap_threshold": GAP_THRESHOLD, "degeneracy_tol": DEGENERACY_TOL,
        "cluster_min": CLUSTER_MIN,
    },
    "sweep": {
        "theta0": "0:2pi:pi/50", "nu": "0:4:0.05", "steps": 500, "n0": None,
        "margin": DEFAULT_MARGIN, "out": None,
    },
    "asymptote": {
        "theta0": "pi/4", "nu": 0.0, "n0": None, "steps": 500,
        "t_min": None, "t_max": None, "from_csv": None, "out": None,
        "margin": DEFAULT_MARGIN,
    },
}

_INT_KEYS = {"threads", "n0", "steps", "record_every", "n", "cluster_min", "margin"}
_FLOAT_KEYS = {"nu", "gap_threshold", "degeneracy_tol", "t_min", "t_max"}


def parse_grid(text: str) -> list[float]:
    """``"a:b:step"`` (inclusive) or a comma list; items may use ``pi``."""
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"grid {text!r} must be start:stop:step")
        start, stop, step = (parse_angle(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValidationError(f"grid {text!r} needs step > 0 and stop >= start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + k * step for k in range(count)]
    items = [parse_angle(p) for p in text.split(",") if p.strip()]
    if not items:
        raise ValidationError("empty grid")
    return items


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="aperiodic-qw",
        description="Quantum walks with aperiodic coins theta(n) = theta0 * n**nu.",
    )
    p.add_argument("--config", type=Path, help="INI file mirroring the flags")
    p.add_argument("--threads", type=int, default=None, help="worker processes for sweeps")
    p.add_argument("--out", dest="global_out", default=None, help="default output directory")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evolve", help="run one trajectory and write its time series")
    _walk_flags(ev)
    ev.add_argument("--probes", help="comma list of sp0,sp1,sp,ipr,entropy,trace")
    ev.add_argument("--record-every", type=int)
    ev.add_argument("--state-out", help="write the final state as JSON")
    ev.add_argument("--out", help="CSV path (default <out dir>/evolve.csv)")

    sp = sub.add_parser("spectrum", help="quasi-energies of the one-step operator")
    sp.add_argument("--theta0")
    sp.add_argument("--nu", type=float)
    sp.add_argument("--n", type=int, help="number of sites (ring)")
    sp.add_argument("--gap-threshold", type=float)
    sp.add_argument("--degeneracy-tol", type=float)
    sp.add_argument("--cluster-min", type=int)
    sp.add_argument("--out", help="CSV path; band report goes next to it as .bands.json")

    sw = sub.add_parser("sweep", help="(nu, theta0) diagrams")
    sw.add_argument("--theta0", help="grid, e.g. 0:2pi:pi/50 or pi/6,pi/4")
    sw.add_argument("--nu", help="grid, e.g. 0:4:0.05")
    sw.add_argument("--steps", type=int)
    sw.add_argument("--n0", type=int)
    sw.add_argument("--margin", type=int)
    sw.add_argument("--out", help="output directory for sweep.csv and manifest.json")

    asy = sub.add_parser("asymptote", help="power-law fit of the trace distance")
    _walk_flags(asy)
    asy.add_argument("--t-min", type=float)
    asy.add_argument("--t-max", type=float)
    asy.add_argument("--from-csv", help="fit an existing evolve CSV with a trace column")
    asy.add_argument("--out", help="JSON path (default: stdout)")
    return p


def _walk_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--theta0", help="radians or e.g. pi/4")
    sp.add_argument("--nu", type=float)
    sp.add_argument("--n0", type=int, help="start site (default: lattice centre)")
    sp.add_argument("--steps", type=int)
    sp.add_argument("--margin", type=int)


def _coerce(command: str, key: str, value):
    if value is None or value == "":
        return None
    if command == "sweep" and key in ("theta0", "nu"):
        return str(value)
    if key in _INT_KEYS:
        return int(value)
    if key in _FLOAT_KEYS:
        return float(value)
    return value


def _resolve(args: argparse.Namespace) -> dict:
    """Merge command line > config file > built-in defaults."""
    cfg = configparser.ConfigParser()
    if args.config is not None:
        if not args.config.exists():
            raise ValidationError(f"config file {args.config} not found")
        try:
            cfg.read(args.config)
        except configparser.Error as exc:
            raise ValidationError(f"bad config file: {exc}") from exc
    section = cfg[args.command] if cfg.has_section(args.command) else cfg["DEFAULT"]

    def from_cfg(key: str):
        for name in (key, key.replace("_", "-")):
            if name in section:
                return section[name]
        return None

    merged = {}
    for key, default in _DEFAULTS[args.command].items():
        cli_val = getattr(args, key, None)
        val = cli_val if cli_val is not None else from_cfg(key)
        merged[key] = _coerce(args.command, key, val if val is not None else default)
    merged["out_dir"] = args.global_out or from_cfg("out_dir") or "."
    try:
        merged["threads"] = int(args.threads or from_cfg("threads") or 1)
    except ValueError as exc:
        raise ValidationError(f"bad threads value: {exc}") from exc
    return merged


def _default_path(opts: dict, name: str) -> Path:
    out_dir = Path(opts["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir / name


def cmd_evolve(opts: dict) -> int:
    theta0 = parse_angle(opts["theta0"])
    series = run_walk(
        theta0, opts["nu"], opts["steps"], parse_probes(opts["probes"]),
        n0=opts["n0"], record_every=opts["record_every"], margin=opts["margin"],
    )
    path = Path(opts["out"]) if opts["out"] else _default_path(opts, "evolve.csv")
    series.to_csv(path)
    if opts["state_out"]:
        Path(opts["state_out"]).write_text(state_to_json(series.final_state))
    log.info("wrote %s (%d samples)", path, len(series))
    print(path)
    return EXIT_OK


def cmd_spectrum(opts: dict) -> int:
    field = build_field(parse_angle(opts["theta0"]), opts["nu"], opts["n"])
    spec = quasi_energies(build_floquet_matrix(field))
    report = band_report(spec, opts["gap_threshold"], opts["degeneracy_tol"], opts["cluster_min"])
    path = Path(opts["out"]) if opts["out"] else _default_path(opts, "spectrum.csv")
    with open(path, "w") as fh:
        fh.write("k,re_lambda,im_lambda,E\n")
        for k, (lam, e) in enumerate(zip(spec.eigenvalues, spec.energies)):
            fh.write(f"{k},{lam.real:.17g},{lam.imag:.17g},{e:.17g}\n")
    band_path = path.with_suffix(".bands.json")
    band_path.write_text(json.dumps(report.as_dict(), indent=2) + "\n")
    print(path)
    print(band_path)
    return EXIT_OK


def cmd_sweep(opts: dict) -> int:
    spec = SweepSpec(
        theta0s=tuple(parse_grid(opts["theta0"])),
        nus=tuple(parse_grid(opts["nu"])),
        n_steps=opts["steps"],
        n0=opts["n0"],
        margin=opts["margin"],
        workers=opts["threads"],
    )
    log.info("sweep: %d x %d cells, %d workers", len(spec.nus), len(spec.theta0s), spec.workers)
    result = run_sweep(spec)
    out_dir = Path(opts["out"]) if opts["out"] else Path(opts["out_dir"])
    csv_path, manifest_path = result.write(out_dir)
    print(csv_path)
    print(manifest_path)
    return EXIT_OK


def cmd_asymptote(opts: dict) -> int:
    if opts["from_csv"]:
        series = ObservableSeries.from_csv(opts["from_csv"])
    else:
        series = run_walk(
            parse_angle(opts["theta0"]), opts["nu"], opts["steps"], ("trace",),
            n0=opts["n0"], margin=opts["margin"],
        )
    window = None
    if opts["t_min"] is not None or opts["t_max"] is not None:
        t = series.times
        window = (
            opts["t_min"] if opts["t_min"] is not None else float(t[0]),
            opts["t_max"] if opts["t_max"] is not None else float(t[-1]),
        )
    fit = asymptotic_fit(series.times, series["trace"], window)
    text = json.dumps(fit.as_dict(), indent=2, allow_nan=True) + "\n"
    if opts["out"]:
        Path(opts["out"]).write_text(text)
        print(opts["out"])
    else:
        sys.stdout.write(text)
    return EXIT_OK


_COMMANDS = {
    "evolve": cmd_evolve,
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "asymptote": cmd_asymptote,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        opts = _resolve(args)
        return _COMMANDS[args.command](opts)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
