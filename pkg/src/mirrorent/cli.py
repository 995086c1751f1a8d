"""Command-line front end: budget, conditional, entangle, sweep, ellipse.

Configuration is a strict JSON document (unknown keys are an error); all
frequencies in config files are linear Hz and converted to angular
internally.  Data files are deterministic: CSV (RFC 4180, 17 significant
digits) for tables, JSON for scalar records, a version comment as the
first line, never a timestamp.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .entangle import assemble, ellipse_points, log_negativity
from .errors import ConfigError, MirrorEntError
from .optimize import sweep as run_sweep
from .params import ModeParams
from .spectra import budget
from .wiener import conditional_moments, uncertainty_product

TWO_PI = 2.0 * np.pi

_TOP_KEYS = {
    "mass_kg", "omega_m_hz", "gamma_m_hz", "omega_alpha_c_hz", "omega_alpha_d_hz",
    "omega_f_hz", "omega_x_hz", "laser_amp_db", "laser_phase_db", "phi_c", "phi_d",
    "grid", "sweep",
}
_GRID_KEYS = {"start_hz", "stop_hz", "points", "log"}
_SWEEP_KEYS = {"ratio_start", "ratio_stop", "ratio_points", "noise_db_list"}


@dataclass(frozen=True)
class GridSpec:
    start_hz: float
    stop_hz: float
    points: int
    log: bool = True

    def frequencies_hz(self):
        if self.points < 1:
            raise ConfigError("grid.points must be at least 1")
        if self.start_hz <= 0 or self.stop_hz < self.start_hz:
            raise ConfigError("grid must satisfy 0 < start_hz <= stop_hz")
        if self.log:
            return np.geomspace(self.start_hz, self.stop_hz, self.points)
        return np.linspace(self.start_hz, self.stop_hz, self.points)


@dataclass(frozen=True)
class SweepSpec:
    ratio_start: float
    ratio_stop: float
    ratio_points: int
    noise_db_list: tuple = (0.0,)

    def ratios(self):
        if self.ratio_points < 1:
            raise ConfigError("sweep.ratio_points must be at least 1")
        if self.ratio_start <= 0 or self.ratio_stop < self.ratio_start:
            raise ConfigError("sweep must satisfy 0 < ratio_start <= ratio_stop")
        return np.linspace(self.ratio_start, self.ratio_stop, self.ratio_points)


@dataclass(frozen=True)
class RunConfig:
    """Parsed run configuration; frequencies already angular [rad/s]."""

    mass_kg: float = 1.0
    omega_m: float = TWO_PI * 1.0
    gamma_m: float = TWO_PI * 1e-3
    omega_alpha_c: float | None = None
    omega_alpha_d: float | None = None
    omega_f: float | None = None
    omega_x: float | None = None
    laser_amp_db: float = 0.0
    laser_phase_db: float = 0.0
    phi_c: float = 0.0
    phi_d: float = 0.0
    grid: GridSpec | None = None
    sweep: SweepSpec | None = None
    raw: dict = field(default_factory=dict)

    def mode(self, which: str) -> ModeParams:
        for key in ("omega_alpha_c", "omega_alpha_d", "omega_f", "omega_x"):
            if getattr(self, key) is None:
                raise ConfigError(f"missing config key: {key}_hz")
        common = which == "common"
        s1 = 10.0 ** (self.laser_amp_db / 10.0) if common else 1.0
        s2 = 10.0 ** (self.laser_phase_db / 10.0) if common else 1.0
        try:
            return ModeParams(
                omega_alpha=self.omega_alpha_c if common else self.omega_alpha_d,
                omega_F=self.omega_f,
                omega_x=self.omega_x,
                omega_m=self.omega_m,
                gamma_m=self.gamma_m,
                phi=self.phi_c if common else self.phi_d,
                S_a1=s1,
                S_a2=s2,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def _require_number(doc, key, positive=False):
    val = doc[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"config key {key} must be a number")
    if positive and val <= 0:
        raise ConfigError(f"config key {key} must be positive")
    return float(val)


def parse_config(doc) -> RunConfig:
    """Validate a config document (dict) against the documented keys."""
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config key: {sorted(unknown)[0]}")

    kw = {"raw": doc}
    for key, dest in (
        ("omega_alpha_c_hz", "omega_alpha_c"),
        ("omega_alpha_d_hz", "omega_alpha_d"),
        ("omega_f_hz", "omega_f"),
        ("omega_x_hz", "omega_x"),
    ):
        if key in doc:
            kw[dest] = TWO_PI * _require_number(doc, key, positive=True)
    if "omega_m_hz" in doc:
        kw["omega_m"] = TWO_PI * _require_number(doc, "omega_m_hz")
    if "gamma_m_hz" in doc:
        kw["gamma_m"] = TWO_PI * _require_number(doc, "gamma_m_hz", positive=True)
    if "mass_kg" in doc:
        kw["mass_kg"] = _require_number(doc, "mass_kg", positive=True)
    for key in ("laser_amp_db", "laser_phase_db", "phi_c", "phi_d"):
        if key in doc:
            kw[key] = _require_number(doc, key)

    if "grid" in doc:
        g = doc["grid"]
        if not isinstance(g, dict):
            raise ConfigError("config key grid must be an object")
        bad = set(g) - _GRID_KEYS
        if bad:
            raise ConfigError(f"unknown config key: grid.{sorted(bad)[0]}")
        for need in ("start_hz", "stop_hz", "points"):
            if need not in g:
                raise ConfigError(f"missing config key: grid.{need}")
        kw["grid"] = GridSpec(
            start_hz=_require_number(g, "start_hz", positive=True),
            stop_hz=_require_number(g, "stop_hz", positive=True),
            points=int(_require_number(g, "points", positive=True)),
            log=bool(g.get("log", True)),
        )
    if "sweep" in doc:
        s = doc["sweep"]
        if not isinstance(s, dict):
            raise ConfigError("config key sweep must be an object")
        bad = set(s) - _SWEEP_KEYS
        if bad:
            raise ConfigError(f"unknown config key: sweep.{sorted(bad)[0]}")
        for need in ("ratio_start", "ratio_stop", "ratio_points"):
            if need not in s:
                raise ConfigError(f"missing config key: sweep.{need}")
        levels = s.get("noise_db_list", [0.0])
        if not isinstance(levels, list) or not levels or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in levels
        ):
            raise ConfigError("sweep.noise_db_list must be a non-empty number list")
        kw["sweep"] = SweepSpec(
            ratio_start=_require_number(s, "ratio_start", positive=True),
            ratio_stop=_require_number(s, "ratio_stop", positive=True),
            ratio_points=int(_require_number(s, "ratio_points", positive=True)),
            noise_db_list=tuple(float(x) for x in levels),
        )
    return RunConfig(**kw)


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(doc)


# ----------------------------------------------------------------------
# deterministic serialization

def _fmt(x):
    return format(float(x), ".17g")


def _write_csv(out, header, rows):
    out.write(f"# mirrorent {__version__}\r\n")
    writer = csv.writer(out, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, (int, float, np.floating)) else v
                         for v in row])


def _write_json(out, payload):
    payload = {"version": __version__, **payload}
    json.dump(payload, out, indent=2, sort_keys=True)
    out.write("\n")


# ----------------------------------------------------------------------
# commands

def cmd_budget(config: RunConfig, out) -> None:
    """SQL-normalized noise budget table over the configured frequency grid."""
    if config.grid is None:
        raise ConfigError("missing config key: grid")
    freqs_hz = config.grid.frequencies_hz()
    if freqs_hz.size == 0:
        raise ConfigError("empty frequency grid")
    omega = TWO_PI * freqs_hz
    bc = budget(config.mode("common"), omega)
    bd = budget(config.mode("differential"), omega)
    # classical columns from the bare corners (identical for both channels
    # in vacuum; the per-channel totals carry laser noise)
    s_force = config.mode("differential").omega_F ** 2 / omega**2
    s_sens = omega**2 / config.mode("differential").omega_x ** 2
    rows = [
        (
            freqs_hz[k], bc["s_quant"][k], bd["s_quant"][k],
            s_force[k], s_sens[k], bc["s_total"][k], bd["s_total"][k],
        )
        for k in range(freqs_hz.size)
    ]
    _write_csv(
        out,
        ["freq_hz", "s_quant_c", "s_quant_d", "s_force", "s_sens",
         "s_total_c", "s_total_d"],
        rows,
    )


def _moments_payload(moments):
    return {
        "V_xx": moments.V_xx,
        "V_pp": moments.V_pp,
        "V_xp": moments.V_xp,
        "U_over_quarter_hbar2": 4.0 * uncertainty_product(moments),
    }


def cmd_conditional(config: RunConfig, out, method="closed") -> None:
    """Per-mode conditional moments (internal units: hbar = m = 1, rad/s)."""
    payload = {"units": {"hbar": 1, "mass": 1, "frequency": "rad/s"}, "modes": {}}
    for name in ("common", "differential"):
        moments = conditional_moments(config.mode(name), method=method)
        payload["modes"][name] = {method: _moments_payload(moments)}
    _write_json(out, payload)


def cmd_entangle(config: RunConfig, out, method="closed") -> None:
    """Two-mirror covariance blocks and logarithmic negativity."""
    mc = conditional_moments(config.mode("common"), method=method)
    md = conditional_moments(config.mode("differential"), method=method)
    cov = assemble(mc, md)
    result = log_negativity(cov)
    payload = {
        "method": method,
        "E_N": result["E_N"],
        "sigma_minus": result["sigma_minus"],
        "Sigma": result["Sigma"],
        "blocks": {
            "V_ee": cov.V_ee.tolist(),
            "V_en": cov.V_en.tolist(),
        },
    }
    _write_json(out, payload)


def cmd_sweep(config: RunConfig, out, jobs=1, method="closed") -> None:
    """Maximized E_N versus omega_x/omega_F at each laser-noise level."""
    if config.sweep is None:
        raise ConfigError("missing config key: sweep")
    points = run_sweep(
        config.sweep.ratios(), config.sweep.noise_db_list, jobs=jobs,
        method="numeric" if method == "numeric" else "closed",
    )
    rows = [
        (p.ratio_xF, p.laser_db, p.E_N_max, p.omega_alpha_c_opt, p.omega_alpha_d_opt)
        for p in points
    ]
    _write_csv(
        out,
        ["ratio_xF", "laser_db", "E_N_max", "omega_alpha_c_opt", "omega_alpha_d_opt"],
        rows,
    )


def cmd_ellipse(config: RunConfig, out, method="closed") -> None:
    """Squeezing-ellipse boundary points for both modes.

    Moments are normalized to the ground state of an oscillator at the mean
    of the two measurement-strength frequencies; the number of boundary
    points comes from grid.points (default 256).
    """
    n = config.grid.points if config.grid is not None else 256
    n = max(int(n), 8)
    mc = conditional_moments(config.mode("common"), method=method)
    md = conditional_moments(config.mode("differential"), method=method)
    omega_norm = 0.5 * (config.omega_alpha_c + config.omega_alpha_d)
    rows = []
    for name, moments in (("common", mc), ("differential", md)):
        for k, (x, p) in enumerate(ellipse_points(moments, omega_norm, n)):
            rows.append((name, k, x, p))
    _write_csv(out, ["mode", "index", "x_normalized", "p_normalized"], rows)


# ----------------------------------------------------------------------

def _open_out(path):
    if path in (None, "-"):
        return io.StringIO(), True
    return open(path, "w", encoding="utf-8", newline=""), False


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mirrorent",
        description="Conditional test-mass states and entanglement from an "
        "interferometer noise budget",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_method in (
        ("budget", False), ("conditional", True), ("entangle", True),
        ("sweep", True), ("ellipse", True),
    ):
        p = sub.add_parser(name, help=f"run the {name} analysis")
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers (sweep)")
        if needs_method:
            p.add_argument(
                "--method", choices=("closed", "numeric", "riccati"),
                default="closed", help="conditional-moment route",
            )
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config)
        out, is_buffer = _open_out(args.out)
        try:
            if args.command == "budget":
                cmd_budget(config, out)
            elif args.command == "conditional":
                cmd_conditional(config, out, method=args.method)
            elif args.command == "entangle":
                cmd_entangle(config, out, method=args.method)
            elif args.command == "sweep":
                if args.method == "riccati":
                    raise ConfigError("sweep supports methods closed and numeric")
                cmd_sweep(config, out, jobs=args.jobs, method=args.method)
            elif args.command == "ellipse":
                cmd_ellipse(config, out, method=args.method)
            if is_buffer:
                sys.stdout.write(out.getvalue())
        finally:
            if not is_buffer:
                out.close()
    except MirrorEntError as exc:
        print(f"mirrorent: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        target = getattr(exc, "filename", None) or args.out
        print(f"mirrorent: error writing {target}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
