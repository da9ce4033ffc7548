"""Command-line front end: writes the data behind each figure as CSV or JSON.

Exit codes: 0 success, 1 verification failed, 2 bad flags, 3 numerical error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .coupling import DriveParams, h_n
from .errors import FiniteTrapError, UsageError
from .export import render_csv, render_json, write_atomic
from .observables import (
    DEFAULT_POINTS,
    default_grid,
    number_distribution,
    q_function,
    squeezing_scan,
    wigner_function,
)
from .steady_state import eigen_residual, solve_steady_state
from .trap import TrapParams, deformation_f2, energy_deformed, energy_mpt, transition_frequency
from .vibronic import stationarity_residual

COMMANDS = ("spectrum", "deformation", "steady-state", "pn", "squeeze", "qfunc", "wigner", "verify")
VERIFY_TOL = 1e-10


@dataclass
class RunConfig:
    command: str
    depth: list = field(default_factory=list)
    eta: Optional[float] = None
    rabi_ratio: float = 0.0
    theta: float = math.pi / 4
    chi_override: Optional[complex] = None
    half_width: Optional[float] = None  # None = auto
    points: int = DEFAULT_POINTS
    ladder: str = "deformed"
    out_path: Optional[str] = None
    format: Optional[str] = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if not self.depth:
            raise UsageError("--depth is required")
        if self.command != "squeeze" and len(self.depth) != 1:
            raise UsageError(f"{self.command} takes a single --depth")
        if self.command not in ("spectrum", "deformation") and self.eta is None:
            raise UsageError(f"{self.command} requires --eta")
        if self.command not in ("verify",) and not self.out_path:
            raise UsageError(f"{self.command} requires --out")
        if self.points < 2:
            raise UsageError("--points must be >= 2")
        if self.format not in (None, "csv", "json"):
            raise UsageError("--format must be csv or json")

    @property
    def out_format(self) -> str:
        if self.format:
            return self.format
        return "json" if self.out_path and self.out_path.lower().endswith(".json") else "csv"

    def meta(self) -> dict:
        d = asdict(self)
        d.pop("out_path")
        d.pop("format")
        d["depth"] = [float(x) for x in self.depth]
        if len(d["depth"]) == 1 and self.command != "squeeze":
            d["depth"] = d["depth"][0]
        return d


def _drive(cfg: RunConfig) -> DriveParams:
    return DriveParams(cfg.eta, cfg.rabi_ratio)


def _state(cfg: RunConfig):
    trap = TrapParams(cfg.depth[0])
    drive = _drive(cfg)
    state = solve_steady_state(trap, drive, chi=cfg.chi_override)
    residual, _ = eigen_residual(state, trap, drive.eta, state.chi)
    info = {
        "n_max": trap.n_max,
        "dim": state.dim,
        "chi": state.chi,
        "leakage": state.edge_population,
        "residual": residual,
        "terminated_early": state.terminated_early,
    }
    return trap, drive, state, info


def _table(cfg: RunConfig):
    """Compute ``(columns, rows, info)`` for a data-producing command."""
    cmd = cfg.command
    if cmd == "spectrum":
        trap = TrapParams(cfg.depth[0])
        rows = [
            [n, energy_mpt(n, trap), energy_deformed(n, trap), transition_frequency(n, trap)]
            for n in range(trap.n_max + 1)
        ]
        return ["n", "energy_mpt", "energy_deformed", "transition_frequency"], rows, {"n_max": trap.n_max}

    if cmd == "deformation":
        trap = TrapParams(cfg.depth[0])
        rows = []
        for n in range(trap.n_max + 1):
            h = h_n(n, cfg.eta, trap) if (cfg.eta is not None and n >= 1) else None
            rows.append([n, deformation_f2(n, trap), h])
        return ["n", "f2", "h"], rows, {"n_max": trap.n_max}

    if cmd == "squeeze":
        scan = squeezing_scan(cfg.depth, _drive(cfg), cfg.theta, cfg.ladder)
        rows = [[float(N), float(S)] for N, S in zip(scan.depths, scan.s_values)]
        info = {"failures": {str(k): v for k, v in scan.failures.items()}}
        return ["N", "S"], rows, info

    trap, drive, state, info = _state(cfg)
    if cmd == "steady-state":
        p = number_distribution(state)
        rows = [[n, float(c.real), float(c.imag), float(p[n])] for n, c in enumerate(state.amps)]
        return ["n", "re", "im", "p"], rows, info
    if cmd == "pn":
        rows = [[n, float(v)] for n, v in enumerate(number_distribution(state))]
        return ["n", "p"], rows, info

    grid = default_grid(state, cfg.points, cfg.half_width)
    info["half_width"] = grid.re_max
    fn = q_function if cmd == "qfunc" else wigner_function
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = fn(state, grid)
    info["warnings"] = [str(w.message) for w in caught]
    re, im, v = result.re, result.im, result.values
    rows = [[float(re[i]), float(im[j]), float(v[i, j])] for i in range(grid.n_re) for j in range(grid.n_im)]
    info["integral"] = result.integral()
    info["min"] = float(v.min())
    return ["re", "im", "value"], rows, info


def _summary(cfg: RunConfig, info: dict) -> str:
    parts = [cfg.command, f"N={','.join(format(float(x), 'g') for x in cfg.depth)}"]
    for key in ("n_max", "dim", "leakage", "residual", "stationarity", "integral"):
        if key in info:
            val = info[key]
            parts.append(f"{key}={val:.3e}" if isinstance(val, float) else f"{key}={val}")
    return " ".join(parts)


def _verify(cfg: RunConfig) -> int:
    trap, drive, state, info = _state(cfg)
    info["stationarity"] = stationarity_residual(state, trap, drive)
    ok = info["stationarity"] <= VERIFY_TOL and info["residual"] <= VERIFY_TOL
    info["passed"] = ok
    print(_summary(cfg, info) + (" PASS" if ok else " FAIL"))
    if cfg.out_path:
        columns = ["quantity", "value"]
        rows = [["stationarity", info["stationarity"]], ["residual", info["residual"]], ["leakage", info["leakage"]]]
        _write(cfg, columns, rows, info)
    return 0 if ok else 1


def _write(cfg: RunConfig, columns, rows, info) -> None:
    if cfg.out_format == "json":
        text = render_json(cfg.command, {**cfg.meta(), **info}, columns, rows)
    else:
        text = render_csv(columns, rows)
    write_atomic(cfg.out_path, text)


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    try:
        cfg.validate()
        if cfg.command == "verify":
            return _verify(cfg)
        columns, rows, info = _table(cfg)
        _write(cfg, columns, rows, info)
    except UsageError as exc:
        _report(exc)
        return 2
    except FiniteTrapError as exc:
        _report(exc)
        return 3
    print(_summary(cfg, info))
    return 0


def _report(exc: Exception) -> None:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)


def _depth_range(text: str) -> list:
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected START:STOP:STEP") from None
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError("need STEP > 0 and STOP >= START")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def _half_width(text: str) -> Optional[float]:
    if text == "auto":
        return None
    return float(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="finitetrap", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--depth", type=float, nargs="+", default=[], help="trap depth N (several for squeeze)")
        if name == "squeeze":
            p.add_argument("--depth-range", type=_depth_range, help="START:STOP:STEP, inclusive")
            p.add_argument("--ladder", choices=("bare", "deformed"), default="deformed")
        p.add_argument("--eta", type=float, help="Lamb-Dicke parameter")
        p.add_argument("--rabi-ratio", type=float, default=0.0, help="Omega0/Omega1")
        p.add_argument("--theta", type=float, default=math.pi / 4, help="quadrature phase (rad)")
        p.add_argument("--chi", type=complex, help="override the eigenvalue, e.g. 0+3.8j")
        p.add_argument("--half-width", type=_half_width, default=None, help="grid half width or 'auto'")
        p.add_argument("--points", type=int, default=DEFAULT_POINTS)
        p.add_argument("--out", help="output path")
        p.add_argument("--format", choices=("csv", "json"))
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    depth = list(ns.depth)
    if getattr(ns, "depth_range", None):
        depth += ns.depth_range
    return RunConfig(
        command=ns.command,
        depth=depth,
        eta=ns.eta,
        rabi_ratio=ns.rabi_ratio,
        theta=ns.theta,
        chi_override=ns.chi,
        half_width=ns.half_width,
        points=ns.points,
        ladder=getattr(ns, "ladder", "deformed"),
        out_path=ns.out,
        format=ns.format,
    )


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
