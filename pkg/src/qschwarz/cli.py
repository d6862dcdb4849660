"""Command-line front end.

Exit codes: 0 all checks within tolerance, 1 a tolerance check failed,
2 usage, configuration or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import dust, frw, gedanken, quantum
from .errors import DomainError, ExprSyntaxError, SingularPoint, UnknownIdentifier
from .profiles import parse
from .report import render

__all__ = ["RunConfig", "ConfigError", "build_parser", "main"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    r_min: float
    r_max: float
    r_steps: int
    tau_min: float
    tau_max: float
    tau_steps: int

    def r_values(self) -> list[float]:
        return [float(x) for x in np.linspace(self.r_min, self.r_max, self.r_steps)]

    def tau_values(self) -> list[float]:
        return [float(x) for x in np.linspace(self.tau_min, self.tau_max, self.tau_steps)]


@dataclass(frozen=True)
class RunConfig:
    profile_F: str = "r"
    profile_G: str = "0"
    exponent: float = dust.EXPONENT
    units: str = "natural"
    c: float = 1.0
    G_newton: float = 1.0
    hbar: float = 1.0
    m: float = 1.0
    grid: Grid = Grid(1.0, 5.0, 5, 1.0, 5.0, 5)
    tolerance: float = 1e-8
    output: str = "csv"

    def __post_init__(self):
        g = self.grid
        if not (g.r_min > 0.0 and g.tau_min > 0.0):
            raise ConfigError("grid minima must be positive (r_min > 0, tau_min > 0)")
        if g.r_steps < 1 or g.tau_steps < 1:
            raise ConfigError("grid steps must be at least 1")
        if not self.tolerance > 0.0:
            raise ConfigError("tolerance must be positive")
        if self.output not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.output!r}")
        if self.units not in ("natural", "explicit"):
            raise ConfigError(f"unknown unit system {self.units!r}")
        for name in ("c", "G_newton", "hbar", "m"):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"{name} must be positive")

    def solution(self) -> dust.DustSolution:
        return dust.DustSolution(
            parse(self.profile_F),
            parse(self.profile_G),
            exponent=self.exponent,
            G_newton=self.G_newton,
            m=self.m,
        )


# ------------------------------------------------------------------ parsing


def _parse_range(text: str, name: str) -> tuple[float, float, int]:
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ConfigError(f"--{name} expects a:b:n, got {text!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"--{name} expects a:b:n, got {text!r}") from None
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ConfigError(f"--{name} bounds must be finite")
    return a, b, n


_COMMON = {
    "profile-F": str,
    "profile-G": str,
    "exponent": float,
    "units": str,
    "c": float,
    "G": float,
    "hbar": float,
    "m": float,
    "r-range": str,
    "tau-range": str,
    "tol": float,
    "output": str,
}
_BOHR = {"n-max": int, "M": float}
_GEDANKEN = {
    "accel": float,
    "height": float,
    "delta-E": float,
    "level-shift": float,
    "cycles": int,
    "mass": float,
    "history": bool,
}
_ALL_KEYS = {**_COMMON, **_BOHR, **_GEDANKEN}


def _dest(flag: str) -> str:
    return flag.replace("-", "_")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profile-F", dest="profile_F", help="radial profile F(r), e.g. '2*r^3'")
    common.add_argument("--profile-G", dest="profile_G", help="radial profile G(r) (default 0)")
    common.add_argument("--exponent", type=float, help="power p in e^v = [F tau + G]^p (default 4/3)")
    common.add_argument("--units", choices=("natural", "explicit"))
    common.add_argument("--c", type=float, help="speed of light (explicit units)")
    common.add_argument("--G", dest="G", type=float, help="Newton's constant (explicit units)")
    common.add_argument("--hbar", type=float, help="reduced Planck constant (explicit units)")
    common.add_argument("--m", type=float, help="particle mass (explicit units)")
    common.add_argument("--r-range", dest="r_range", help="a:b:n, n evenly spaced points")
    common.add_argument("--tau-range", dest="tau_range", help="a:b:n, n evenly spaced points")
    common.add_argument("--tol", type=float, help="pass/fail tolerance (default 1e-8)")
    common.add_argument("--output", choices=("csv", "json"))
    common.add_argument("--config", type=Path, help="JSON file with the same keys as the flags")

    parser = argparse.ArgumentParser(prog="qschwarz", description="Verify the comoving dust solution and run the energy-ledger thought experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("residuals", parents=[common], help="explicit field-equation residuals on a grid")
    sub.add_parser("quantum", parents=[common], help="wave-equation and phase checks on a grid")
    sub.add_parser("frw", parents=[common], help="Robertson-Walker reduction checks")
    bohr = sub.add_parser("bohr", parents=[common], help="hydrogen-like Newtonian levels")
    bohr.add_argument("--n-max", dest="n_max", type=int)
    bohr.add_argument("--M", dest="M", type=float, help="central mass (default 1)")
    ged = sub.add_parser("gedanken", parents=[common], help="energy-ledger thought experiments")
    ged.add_argument("scenario", choices=("atwood-original", "atwood-corrected", "pair"))
    ged.add_argument("--accel", type=float, help="uniform gravitational acceleration g")
    ged.add_argument("--height", type=float, help="pan separation / lift height L")
    ged.add_argument("--delta-E", dest="delta_E", type=float, help="atomic level spacing at z = 0")
    ged.add_argument("--level-shift", dest="level_shift", type=float, help="fixed level distortion of the upper atom")
    ged.add_argument("--cycles", type=int)
    ged.add_argument("--mass", type=float, help="pair mass modulus")
    ged.add_argument("--history", action="store_const", const=True, help="emit every ledger step")
    return parser


def _load_config_file(path: Path) -> dict[str, Any]:
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {str(path)!r}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    values: dict[str, Any] = {}
    by_dest = {_dest(k): k for k in _ALL_KEYS}
    for key, value in raw.items():
        flag = key if key in _ALL_KEYS else by_dest.get(_dest(key))
        if flag is None:
            raise ConfigError(f"unknown config key {key!r}")
        kind = _ALL_KEYS[flag]
        try:
            values[_dest(flag)] = value if kind is bool else kind(value)
        except (TypeError, ValueError):
            raise ConfigError(f"config key {key!r} has invalid value {value!r}") from None
    return values


def _merged(args: argparse.Namespace) -> dict[str, Any]:
    values = _load_config_file(args.config) if args.config is not None else {}
    for key, value in vars(args).items():
        if value is not None and key not in ("config", "command"):
            values[key] = value
    return values


def _run_config(values: dict[str, Any]) -> RunConfig:
    units = values.get("units", "natural")
    explicit = {k: values[k] for k in ("c", "G", "hbar", "m") if k in values}
    if units == "natural" and explicit:
        raise ConfigError(f"{', '.join('--' + k for k in explicit)} need --units explicit")
    r = _parse_range(values.get("r_range", "1:5:5"), "r-range")
    t = _parse_range(values.get("tau_range", "1:5:5"), "tau-range")
    cfg = RunConfig(
        profile_F=values.get("profile_F", "r"),
        profile_G=values.get("profile_G", "0"),
        exponent=values.get("exponent", dust.EXPONENT),
        units=units,
        c=explicit.get("c", 1.0),
        G_newton=explicit.get("G", 1.0),
        hbar=explicit.get("hbar", 1.0),
        m=explicit.get("m", 1.0),
        grid=Grid(r[0], r[1], r[2], t[0], t[1], t[2]),
        tolerance=values.get("tol", 1e-8),
        output=values.get("output", "csv"),
    )
    # parse now so expression errors surface as usage errors
    cfg.solution()
    return cfg


# ------------------------------------------------------------------ commands

_DISCREPANCY_NOTE = (
    "the printed mixed equation (v' + w'/2 - w-dot v'/2) and the printed angular equation "
    "do not vanish on the solution family; they are reported but excluded from the pass/fail decision"
)


def cmd_residuals(cfg: RunConfig) -> tuple[int, str]:
    sol = cfg.solution()
    rep = dust.verify_family(sol, cfg.grid.r_values(), cfg.grid.tau_values(), c=cfg.c)
    columns = [
        "r", "tau", "residual_11", "residual_12_printed", "G01_generic",
        "residual_13", "residual_14", "residual_14_printed", "rho", "error",
    ]
    rows = [
        {
            "r": row.r,
            "tau": row.tau,
            "residual_11": row.residual_11,
            "residual_12_printed": row.residual_12_printed,
            "G01_generic": row.G01,
            "residual_13": row.residual_13,
            "residual_14": row.residual_14,
            "residual_14_printed": row.residual_14_printed,
            "rho": row.rho,
            "error": row.error,
        }
        for row in rep.rows
    ]
    passed = rep.passed(cfg.tolerance)
    summary = {
        "max_abs_residual_11": rep.max_abs["residual_11"],
        "max_abs_G01_generic": rep.max_abs["G01"],
        "max_abs_residual_13": rep.max_abs["residual_13"],
        "max_abs_residual_14": rep.max_abs["residual_14"],
        "max_abs_residual_12_printed": rep.max_abs["residual_12_printed"],
        "max_abs_residual_14_printed": rep.max_abs["residual_14_printed"],
        "singular_points": rep.errors,
        "tolerance": cfg.tolerance,
        "passed": passed,
        "discrepancy_note": _DISCREPANCY_NOTE,
    }
    return (0 if passed else 1), render(cfg.output, columns, rows, summary)


def cmd_quantum(cfg: RunConfig) -> tuple[int, str]:
    sol = cfg.solution()
    phase = quantum.PhaseField(sign=1, m=cfg.m, c=cfg.c, hbar=cfg.hbar)
    columns = ["r", "tau", "R", "box_R", "hj_residual", "psi_P_re", "psi_P_im", "psi_A_re", "psi_A_im", "error"]
    rows = []
    errors = 0
    for r in cfg.grid.r_values():
        for tau in cfg.grid.tau_values():
            row: dict[str, Any] = {"r": r, "tau": tau}
            try:
                box = quantum.box_amplitude(phase, sol, r, tau)
                res = quantum.hj_residual(phase, sol, 0.0, r, tau)
                p, a = quantum.psi(phase, sol, tau)
            except SingularPoint as exc:
                errors += 1
                row["error"] = f"{type(exc).__name__}: {exc}"
            else:
                row.update(
                    R=p.R, box_R=box, hj_residual=res,
                    psi_P_re=p.psi.real, psi_P_im=p.psi.imag,
                    psi_A_re=a.psi.real, psi_A_im=a.psi.imag,
                )
            rows.append(row)
    max_box = max((abs(r["box_R"]) for r in rows if "box_R" in r), default=0.0)
    max_hj = max((abs(r["hj_residual"]) for r in rows if "hj_residual" in r), default=0.0)
    u_norm = quantum.four_velocity_norm(phase)
    passed = errors == 0 and max_box < cfg.tolerance and max_hj < cfg.tolerance
    summary = {
        "max_abs_box_R": max_box,
        "max_abs_hj_residual": max_hj,
        "four_velocity_norm": u_norm,
        "c_squared": cfg.c**2,
        "singular_points": errors,
        "tolerance": cfg.tolerance,
        "passed": passed,
    }
    return (0 if passed else 1), render(cfg.output, columns, rows, summary)


def cmd_frw(cfg: RunConfig) -> tuple[int, str]:
    sol = cfg.solution()
    try:
        frw.frw_view(sol)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    columns = [
        "r", "tau", "chi", "transform_residual", "hubble_scale_factor", "hubble_paper_R",
        "hubble_paper_claim", "spatial_curvature", "slice_curvature", "error",
    ]
    rows = []
    errors = 0
    for r in cfg.grid.r_values():
        for tau in cfg.grid.tau_values():
            row: dict[str, Any] = {"r": r, "tau": tau}
            try:
                chi = frw.chi_of_r(sol.F, r)
                row.update(
                    chi=chi,
                    transform_residual=frw.verify_transform(sol, r, tau),
                    hubble_scale_factor=frw.hubble(tau, "scale_factor"),
                    hubble_paper_R=frw.hubble(tau, "paper_R"),
                    hubble_paper_claim=frw.hubble_paper_claim(tau),
                    spatial_curvature=frw.spatial_curvature(sol, chi),
                    slice_curvature=frw.induced_slice_curvature(sol, r, tau),
                )
            except (SingularPoint, DomainError) as exc:
                errors += 1
                row["error"] = f"{type(exc).__name__}: {exc}"
            rows.append(row)

    def worst(key: str) -> float:
        return max((abs(r[key]) for r in rows if key in r), default=0.0)

    passed = errors == 0 and all(
        worst(k) < cfg.tolerance for k in ("transform_residual", "spatial_curvature", "slice_curvature")
    )
    summary = {
        "max_transform_residual": worst("transform_residual"),
        "max_abs_spatial_curvature": worst("spatial_curvature"),
        "max_abs_slice_curvature": worst("slice_curvature"),
        "k": 0.0,
        "hubble_note": "scale_factor = d ln a/dtau with a = tau^(2/3); paper_R = d ln R/dtau with R = tau^(4/3); paper_claim = 1/tau, the claimed rate, which matches neither convention",
        "singular_points": errors,
        "tolerance": cfg.tolerance,
        "passed": passed,
    }
    return (0 if passed else 1), render(cfg.output, columns, rows, summary)


def cmd_bohr(cfg: RunConfig, n_max: int, M: float = 1.0) -> tuple[int, str]:
    try:
        levels = quantum.newtonian_levels(cfg.G_newton, M, cfg.m, cfg.hbar, n_max)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    columns = ["n", "energy", "energy_times_n2"]
    rows = [{"n": n, "energy": e, "energy_times_n2": e * n * n} for n, e in enumerate(levels, start=1)]
    spacings = [b - a for a, b in zip(levels, levels[1:])]
    summary = {
        "ground_state": levels[0],
        "spacing_decreasing": all(s2 < s1 for s1, s2 in zip(spacings, spacings[1:])),
    }
    return 0, render(cfg.output, columns, rows, summary)


_GEDANKEN_DEFAULTS = {
    "atwood-original": {"accel": 0.01, "height": 1.0, "delta_E": 1.0, "cycles": 1000},
    "atwood-corrected": {"accel": 0.01, "height": 1.0, "delta_E": 1.0, "cycles": 1000},
    "pair": {"accel": 0.001, "height": 1.0, "mass": 1.0},
}


def cmd_gedanken(cfg: RunConfig, scenario: str, params: dict[str, Any]) -> tuple[int, str]:
    p = {**_GEDANKEN_DEFAULTS[scenario], **{k: v for k, v in params.items() if v is not None}}
    try:
        ctx = gedanken.GravContext(p["accel"], cfg.c)
        if scenario == "pair":
            ledger = gedanken.run_pair_cycle(ctx, p["mass"], p["height"])
            outcome, completed = "complete", 1
        else:
            mode = "morrison_original" if scenario == "atwood-original" else "corrected"
            result = gedanken.run_atwood_cycle(
                ctx, p["delta_E"], p["height"], mode, p["cycles"], level_shift=p.get("level_shift")
            )
            ledger, outcome, completed = result.ledger, str(result.outcome), result.cycles_completed
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    if p.get("history"):
        columns = ["step", "label", *gedanken.ACCOUNTS, "total"]
        rows = []
        for i, ((label, deltas), total) in enumerate(zip(ledger.history, ledger.totals), start=1):
            rows.append({"step": i, "label": label, **{a: deltas.get(a, 0.0) for a in gedanken.ACCOUNTS}, "total": total})
    else:
        columns = ["account", "initial", "final", "change"]
        net = ledger.net_change()
        rows = [
            {"account": a, "initial": ledger.initial[a], "final": ledger.accounts[a], "change": net[a]}
            for a in gedanken.ACCOUNTS
        ]
        rows.append({"account": "total", "initial": ledger.initial_total, "final": ledger.total(), "change": ledger.total() - ledger.initial_total})
    drift = ledger.max_drift()
    passed = drift < cfg.tolerance
    summary = {
        "scenario": scenario,
        "outcome": outcome,
        "cycles_completed": completed,
        "max_total_drift": drift,
        "tolerance": cfg.tolerance,
        "passed": passed,
    }
    return (0 if passed else 1), render(cfg.output, columns, rows, summary)


# --------------------------------------------------------------------- main


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str]:
    """Execute a command line; returns (exit code, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    try:
        values = _merged(args)
        cfg = _run_config(values)
        if args.command == "residuals":
            code, text = cmd_residuals(cfg)
        elif args.command == "quantum":
            code, text = cmd_quantum(cfg)
        elif args.command == "frw":
            code, text = cmd_frw(cfg)
        elif args.command == "bohr":
            code, text = cmd_bohr(cfg, values.get("n_max", 10), values.get("M", 1.0))
        else:
            params = {k: values.get(k) for k in ("accel", "height", "delta_E", "level_shift", "cycles", "mass", "history")}
            code, text = cmd_gedanken(cfg, args.scenario, params)
    except ExprSyntaxError as exc:
        return 2, "", f"error: SyntaxError: {exc}\n"
    except UnknownIdentifier as exc:
        return 2, "", f"error: UnknownIdentifier: {exc}\n"
    except ConfigError as exc:
        return 2, "", f"error: {exc}\n"
    return code, text, ""


def main(argv: Sequence[str] | None = None) -> int:
    code, out, err = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
