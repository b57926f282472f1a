"""``dit`` command-line interface.

    dit <command> [--config FILE] [--gamma V] [--kappa V] [--g1 V] [--g2 V]
        [--tau2 V] [--tau3 V] [--delta V] [--grid MIN:MAX:N] [--points N]
        [--drive DELTA:NPHOTONS]... [--tol V] [--out DIR] [--formats csv,json,svg]

Commands: spectrum, phase, kerr, oracle-check, figures.

Values take an optional unit suffix (THz, GHz, MHz; bare numbers are THz).
A config file holds ``key = value`` lines, ``#`` starts a comment:

    gamma = 6 THz
    tau2  = 1 GHz
    grid  = -3:3:2001
    drive = -6g:1          # repeatable; Delta as a multiple of g2
    drive = inf:1
    drive = -1.8:flux=6    # input flux in photons/ps instead of photon number

The JSON manifest written next to every run is accepted as ``--config`` too.
Command-line flags override file values.

Exit status: 0 success, 1 bad input or unwritable output, 2 oracle check failed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io, spectrum, stark
from .oracle import oracle_grid_check
from .params import PAPER_DEFAULTS, ParameterError, SystemParams, parse_quantity, validate
from .stark import StarkDrive

COMMANDS = ("spectrum", "phase", "kerr", "oracle-check", "figures")
PARAM_KEYS = ("gamma", "kappa", "g1", "g2", "tau2", "tau3", "delta", "omega0", "nu")
FORMATS = ("csv", "json", "svg")

DEFAULT_GRIDS = {
    "spectrum": (-3.0, 3.0, 2001),
    "phase": (-3.0, 3.0, 2001),
    "kerr": (-1.0, 1.0, 2001),
    "oracle-check": (-1.0, 1.0, 41),
    "figures": (-3.0, 3.0, 2001),
}
DEFAULT_TOL = 1e-6

# figure preset
FIG23_G1 = (0.0, 0.03, 0.1, 0.3)
FIG23_GRID = (-3.0, 3.0, 2001)
FIG4_DELTAS_IN_G = (math.inf, -20.0, -10.0, -6.0)
FIG4_GRID = (-1.0, 1.0, 2001)


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: SystemParams = PAPER_DEFAULTS
    grid: tuple[float, float, int] | None = None
    drives: list[StarkDrive] = field(default_factory=list)
    output_dir: Path = Path("dit-out")
    formats: tuple[str, ...] = FORMATS
    tol: float = DEFAULT_TOL
    loss_sign: str = "literal"

    def grid_spec(self) -> tuple[float, float, int]:
        return self.grid if self.grid is not None else DEFAULT_GRIDS[self.command]

    def manifest(self) -> dict:
        lo, hi, n = self.grid_spec()
        return {
            "command": self.command,
            "params": self.params.to_dict(),
            "grid": {"min": lo, "max": hi, "points": n},
            "drives": [d.to_dict() for d in self.drives],
            "tol": self.tol,
            "formats": list(self.formats),
            "loss_sign": self.loss_sign,
        }


# ------------------------------------------------------------------ parsing


def parse_grid(text: str) -> tuple[float, float, int]:
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be MIN:MAX:N, got {text!r}")
    try:
        lo, hi = parse_quantity(parts[0]), parse_quantity(parts[1])
        n = int(parts[2])
    except (ParameterError, ValueError) as exc:
        raise ConfigError(f"bad grid {text!r}: {exc}") from None
    return check_grid(lo, hi, n)


def check_grid(lo: float, hi: float, n: int) -> tuple[float, float, int]:
    if n < 2:
        raise ConfigError(f"grid needs at least 2 points, got {n}")
    if not lo < hi:
        raise ConfigError(f"grid needs MIN < MAX, got {lo:g}:{hi:g}")
    return float(lo), float(hi), int(n)


def parse_drive(text: str, g2: float) -> StarkDrive:
    """``DELTA:N`` or ``DELTA:flux=F``; DELTA may be ``inf`` or a multiple of g2 such as ``-6g``."""
    try:
        delta_txt, amount = str(text).split(":")
    except ValueError:
        raise ConfigError(f"drive must be DELTA:NPHOTONS, got {text!r}") from None
    delta_txt = delta_txt.strip()
    try:
        if delta_txt.lower().endswith("g") and not delta_txt.lower().endswith(("thz", "ghz", "mhz")):
            Delta = float(delta_txt[:-1] or 1.0) * g2
        else:
            Delta = parse_quantity(delta_txt)
        amount = amount.strip()
        if amount.startswith("flux="):
            return StarkDrive.flux(Delta, float(amount[5:]))
        return StarkDrive.photons(Delta, float(amount))
    except (ParameterError, ValueError) as exc:
        raise ConfigError(f"bad drive {text!r}: {exc}") from None


def _parse_formats(text: str) -> tuple[str, ...]:
    items = tuple(f.strip() for f in str(text).split(",") if f.strip())
    bad = [f for f in items if f not in FORMATS]
    if bad:
        raise ConfigError(f"unknown format(s) {', '.join(bad)}; choose from {', '.join(FORMATS)}")
    return items


def load_config_file(path) -> dict:
    """Read a key = value file (or a JSON manifest) into raw settings."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        return _load_manifest(path, text)

    raw: dict = {"drives": []}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {body!r}")
        key, value = (s.strip() for s in body.split("=", 1))
        key = key.lower().replace("-", "_")
        try:
            if key in PARAM_KEYS:
                raw.setdefault("params", {})[key] = parse_quantity(value)
            elif key == "grid":
                raw["grid"] = parse_grid(value)
            elif key == "drive":
                raw["drives"].append(value)
            elif key == "tol":
                raw["tol"] = float(value)
            elif key == "out":
                raw["out"] = value
            elif key == "formats":
                raw["formats"] = _parse_formats(value)
            elif key == "loss_sign":
                raw["loss_sign"] = value
            else:
                raise ConfigError(f"unknown key {key!r}")
        except (ConfigError, ParameterError, ValueError) as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from None
    return raw


def _load_manifest(path: Path, text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from None
    raw: dict = {"drives": []}
    try:
        if "params" in data:
            raw["params"] = SystemParams.from_dict(data["params"]).to_dict()
        if "grid" in data:
            g = data["grid"]
            raw["grid"] = check_grid(float(g["min"]), float(g["max"]), int(g["points"]))
        raw["drives"] = [StarkDrive.from_dict(d) for d in data.get("drives", [])]
        for key in ("tol", "loss_sign"):
            if key in data:
                raw[key] = data[key]
        if "formats" in data:
            raw["formats"] = _parse_formats(",".join(data["formats"]))
    except (KeyError, TypeError, ValueError, ParameterError) as exc:
        raise ConfigError(f"{path}: bad manifest: {exc}") from None
    return raw


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="key = value file or JSON manifest")
    for key in PARAM_KEYS:
        common.add_argument(f"--{key}", metavar="V", help=f"{key} with optional unit suffix (default THz)")
    common.add_argument("--grid", metavar="MIN:MAX:N", help="detuning grid in THz")
    common.add_argument("--points", type=int, metavar="N", help="override the number of grid points")
    common.add_argument("--drive", action="append", metavar="DELTA:NPHOTONS", help="Stark drive, repeatable")
    common.add_argument("--tol", type=float, help="oracle-check tolerance (default 1e-6)")
    common.add_argument("--out", metavar="DIR", help="output directory (default ./dit-out)")
    common.add_argument("--formats", help="comma-separated subset of csv,json,svg")
    common.add_argument(
        "--loss-sign", choices=stark.LOSS_SIGNS,
        help="how Im(S) enters the dipole damping; 'literal' (default) or 'physical'",
    )

    parser = argparse.ArgumentParser(prog="dit", description="Dipole-induced-transparency reflection simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "spectrum": "reflectivity sweep",
        "phase": "reflection phase sweep",
        "kerr": "Stark-shifted phase curves, one per --drive",
        "oracle-check": "compare the time-domain oracle with the closed form",
        "figures": "reproduce the reflectivity, phase and Kerr figure data",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    raw = load_config_file(args.config) if args.config else {"drives": []}
    values = dict(raw.get("params", {}))
    for key in PARAM_KEYS:
        v = getattr(args, key)
        if v is not None:
            try:
                values[key] = parse_quantity(v)
            except ParameterError as exc:
                raise ConfigError(f"--{key}: {exc}") from None
    params = PAPER_DEFAULTS.replace(**values)

    grid = parse_grid(args.grid) if args.grid else raw.get("grid")
    if args.points is not None:
        lo, hi, _ = grid or DEFAULT_GRIDS[args.command]
        grid = check_grid(lo, hi, args.points)

    if args.drive:
        drives = [parse_drive(d, params.g2) for d in args.drive]
    else:
        drives = [d if isinstance(d, StarkDrive) else parse_drive(d, params.g2) for d in raw.get("drives", [])]

    formats = _parse_formats(args.formats) if args.formats else tuple(raw.get("formats", FORMATS))
    tol = args.tol if args.tol is not None else float(raw.get("tol", DEFAULT_TOL))
    loss_sign = args.loss_sign or raw.get("loss_sign", "literal")
    if loss_sign not in stark.LOSS_SIGNS:
        raise ConfigError(f"loss_sign must be one of {stark.LOSS_SIGNS}")
    out = Path(args.out or raw.get("out", "dit-out"))
    return RunConfig(args.command, params, grid, drives, out, formats, tol, loss_sign)


# ------------------------------------------------------------------ running


def _curve_name(prefix: str, value: float) -> str:
    if math.isinf(value):
        return f"{prefix}_inf"
    return f"{prefix}_{value:g}".replace("-", "m")


class _Writer:
    def __init__(self, config: RunConfig):
        self.config = config
        self.files: list[str] = []

    def csv(self, grid, name):
        if "csv" in self.config.formats:
            io.write_spectrum_csv(grid, self.config.output_dir / name)
            self.files.append(name)

    def json(self, data, name):
        if "json" in self.config.formats:
            io.write_json(data, self.config.output_dir / name)
            self.files.append(name)

    def svg(self, svg, name):
        if "svg" in self.config.formats:
            io.write_svg(svg, self.config.output_dir / name)
            self.files.append(name)

    def manifest(self, extra=None):
        data = self.config.manifest()
        if extra:
            data.update(extra)
        data["files"] = sorted(self.files)
        self.json(data, "manifest.json")


def _phase_series(grids, labels):
    return [(lab, g.detunings, g.phase_unwrapped / np.pi) for g, lab in zip(grids, labels)]


def _reflectivity_series(grids, labels):
    return [(lab, g.detunings, g.reflectivity) for g, lab in zip(grids, labels)]


def _sidecar(grid) -> dict:
    value = grid.stark
    return {
        "drive": grid.drive.to_dict(),
        "stark": {**value.to_dict(), "shift": value.shift, "two_photon_loss": value.two_photon_loss},
        "params": grid.params.to_dict(),
    }


def _default_kerr_drives(params: SystemParams) -> list[StarkDrive]:
    return [StarkDrive.photons(k * params.g2 if math.isfinite(k) else math.inf, 1.0) for k in FIG4_DELTAS_IN_G]


def _kerr_label(drive: StarkDrive, g2: float) -> str:
    if not drive.active:
        return "Delta = inf"
    k = drive.Delta / g2 if g2 else math.nan
    return f"Delta = {k:g} g"


def _cmd_spectrum(config: RunConfig, w: _Writer, phase_only: bool) -> int:
    p = config.params
    grid = spectrum.sweep(p, spectrum.linspace_grid(*config.grid_spec()))
    stem = "phase" if phase_only else "spectrum"
    w.csv(grid, f"{stem}.csv")
    label = f"g1 = {p.g1:g} THz"
    if phase_only:
        w.svg(
            io.line_plot_svg(_phase_series([grid], [label]), title="Reflection phase",
                             xlabel="detuning from cavity resonance (THz)", ylabel="phase / pi"),
            f"{stem}.svg",
        )
    else:
        w.svg(
            io.line_plot_svg(_reflectivity_series([grid], [label]), title="Cavity reflectivity",
                             xlabel="detuning from cavity resonance (THz)", ylabel="reflectivity R"),
            f"{stem}.svg",
        )
    fp, r0 = spectrum.purcell_factor(p), spectrum.bare_reflectivity(p)
    summary = {
        "purcell_factor": fp,
        "bare_reflectivity": r0,
        "crossover_detuning": spectrum.crossover_detuning(p),
        "r_at_zero": _pair(spectrum.reflection(p, 0.0).r),
    }
    if p.delta == 0:
        summary["resonant_reflection"] = spectrum.resonant_reflection(p)
    if phase_only:
        summary["phase_contrast_at_zero"] = spectrum.phase_contrast(p, 0.0)
    for k, v in summary.items():
        print(f"{k}: {v}")
    w.manifest({"summary": summary})
    return 0


def _pair(z: complex) -> list[float]:
    return [z.real, z.imag]


def _cmd_kerr(config: RunConfig, w: _Writer) -> int:
    p = config.params
    drives = config.drives or _default_kerr_drives(p)
    config.drives = drives
    grids = stark.kerr_sweep(p, drives, spectrum.linspace_grid(*config.grid_spec()), config.loss_sign)
    labels = []
    for i, g in enumerate(grids):
        name = f"kerr_{i}"
        w.csv(g, f"{name}.csv")
        w.json(_sidecar(g), f"{name}.json")
        labels.append(_kerr_label(g.drive, p.g2))
        print(f"{name}: Delta={g.drive.Delta:g} n={g.drive.photon_number(p):g} S={g.stark.S}")
    w.svg(
        io.line_plot_svg(_phase_series(grids, labels), title="Reflection phase with Stark field",
                         xlabel="detuning from cavity resonance (THz)", ylabel="phase / pi"),
        "kerr.svg",
    )
    w.manifest()
    return 0


def _cmd_oracle(config: RunConfig, w: _Writer) -> int:
    p = config.params
    shift = 0j
    if len(config.drives) > 1:
        raise ConfigError("oracle-check accepts at most one --drive")
    if config.drives:
        value = stark.stark_operator(p, config.drives[0])
        shift = value.S if config.loss_sign == "literal" else value.S.conjugate()
    grid = spectrum.linspace_grid(*config.grid_spec())
    report = oracle_grid_check(p, grid, config.tol, effective_dipole_shift=shift)
    w.json(report.to_dict(), "oracle_report.json")
    status = "PASS" if report.passed else "FAIL"
    print(f"oracle-check {status}: max |r_oracle - r_analytic| = {report.max_dev:.3e} (tol {config.tol:g}),"
          f" {sum(pt.converged for pt in report.points)}/{len(report.points)} converged")
    w.manifest({"summary": {"max_dev": report.max_dev, "pass": report.passed}})
    return 0 if report.passed else 2


def _cmd_figures(config: RunConfig, w: _Writer) -> int:
    p = config.params
    fig23 = []
    for g1 in FIG23_G1:
        grid = spectrum.sweep(p.replace(g1=g1), spectrum.linspace_grid(*FIG23_GRID))
        w.csv(grid, _curve_name("fig2_3_g1", g1) + ".csv")
        fig23.append(grid)
    labels = [f"g = {g:g} THz" for g in FIG23_G1]
    xlabel = "detuning from cavity resonance (THz)"
    w.svg(io.line_plot_svg(_reflectivity_series(fig23, labels), title="Cavity reflectivity",
                           xlabel=xlabel, ylabel="reflectivity R"), "fig2_reflectivity.svg")
    w.svg(io.line_plot_svg(_phase_series(fig23, labels), title="Reflection phase",
                           xlabel=xlabel, ylabel="phase / pi"), "fig3_phase.svg")

    drives = _default_kerr_drives(p)
    config.drives = drives
    fig4 = stark.kerr_sweep(p, drives, spectrum.linspace_grid(*FIG4_GRID), config.loss_sign)
    for k, g in zip(FIG4_DELTAS_IN_G, fig4):
        name = _curve_name("fig4_Delta_g", k)
        w.csv(g, name + ".csv")
        w.json(_sidecar(g), name + ".json")
    w.svg(io.line_plot_svg(_phase_series(fig4, [_kerr_label(g.drive, p.g2) for g in fig4]),
                           title="Reflection phase with Stark field", xlabel=xlabel, ylabel="phase / pi"),
          "fig4_kerr_phase.svg")
    w.manifest({
        "preset": {
            "fig2_3": {"g1": list(FIG23_G1), "grid": list(FIG23_GRID)},
            "fig4": {"Delta_over_g": [k if math.isfinite(k) else "inf" for k in FIG4_DELTAS_IN_G],
                     "grid": list(FIG4_GRID)},
        }
    })
    print(f"wrote {len(w.files)} files to {config.output_dir}")
    return 0


def run(config: RunConfig) -> int:
    report = validate(config.params)
    for msg in report.warnings:
        print(f"warning: {msg}", file=sys.stderr)
    if not report.ok:
        for msg in report.failures:
            print(f"error: {msg}", file=sys.stderr)
        return 1
    try:
        config.output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory {config.output_dir}: {exc.strerror}", file=sys.stderr)
        return 1
    w = _Writer(config)
    try:
        if config.command in ("spectrum", "phase"):
            return _cmd_spectrum(config, w, phase_only=config.command == "phase")
        if config.command == "kerr":
            return _cmd_kerr(config, w)
        if config.command == "oracle-check":
            return _cmd_oracle(config, w)
        if config.command == "figures":
            return _cmd_figures(config, w)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 1
    raise ConfigError(f"unknown command {config.command!r}")


def _join_values(argv: list[str]) -> list[str]:
    # "--grid -3:3:5" would otherwise be read as two options
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


_VALUE_FLAGS = {f"--{k}" for k in PARAM_KEYS} | {"--grid", "--drive", "--tol"}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_join_values(argv))
    try:
        config = build_config(args)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
