"""Command-line front end: angle and energy sweeps, self-checks and VQE runs.

Exit codes: 0 success, 1 verification failure, 2 usage or config error,
3 numeric domain error during a sweep (the offending rows are skipped).
"""
from __future__ import annotations

import argparse
import contextlib
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence, TextIO

import numpy as np

from . import verification
from .hamiltonian import HubbardParams
from .spectrum import ground_energy_cubic
from .stateprep import DomainError, Mode, prepare
from .vqe import VqeConfig, minimize, recipe_problem

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3

log = logging.getLogger("hubbard_ucc")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    u_min: float
    u_max: float
    steps: int
    scale: str = "linear"
    t: float = 1.0
    output_path: str = "-"

    def __post_init__(self):
        if not self.u_min >= 0:
            raise ConfigError(f"--u-min must be >= 0, got {self.u_min}")
        if not self.u_min < self.u_max:
            raise ConfigError("--u-min must be below --u-max")
        if self.steps < 2:
            raise ConfigError(f"--steps must be >= 2, got {self.steps}")
        if not self.t > 0:
            raise ConfigError(f"--t must be positive, got {self.t}")
        if self.scale == "log" and self.u_min == 0:
            raise ConfigError("log scale needs --u-min > 0")

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.u_min, self.u_max, self.steps)
        return np.linspace(self.u_min, self.u_max, self.steps)


def fmt(x: float) -> str:
    if isinstance(x, int):
        return str(x)
    return "%.17e" % x


@contextlib.contextmanager
def _open_out(path: str) -> Iterator[TextIO]:
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _write_csv(path: str, header: str, rows: Sequence[Sequence[float]]) -> None:
    with _open_out(path) as out:
        out.write(f"# {header}\n")
        for row in rows:
            out.write(",".join(fmt(v) for v in row) + "\n")


def _sweep(config: SweepConfig, point) -> tuple[list[list[float]], int]:
    """Evaluate ``point(u)`` over the grid; rows come back in u order."""
    grid = config.grid()

    def safe(u):
        try:
            return point(float(u))
        except DomainError as exc:
            log.error("u=%s skipped: %s", fmt(u), exc)
            return None

    with ThreadPoolExecutor() as pool:
        results = list(pool.map(safe, grid))
    rows = [r for r in results if r is not None]
    return rows, EXIT_DOMAIN if len(rows) < len(results) else EXIT_OK


def cmd_sweep_angles(config: SweepConfig) -> int:
    def point(u):
        a = prepare(u, Mode.EXACT, t=config.t).angles
        return [u, *a]

    rows, code = _sweep(config, point)
    _write_csv(
        config.output_path,
        "u,theta1,theta2,theta3,theta4 (u in units of t, angles in radians; "
        "the fixed two-reference factor is -pi/4 in this sign frame)",
        rows,
    )
    return code


def cmd_sweep_energy(config: SweepConfig, mode: Mode) -> int:
    def point(u):
        r = prepare(u, mode, t=config.t)
        return [u, r.cubic_energy, r.exact_energy, r.energy, r.fidelity]

    rows, code = _sweep(config, point)
    _write_csv(
        config.output_path,
        f"u,e_cubic,e_ed,e_prepared,fidelity (mode={mode.value}; u and energies in units of t)",
        rows,
    )
    return code


def cmd_verify(level: str, out: TextIO = sys.stdout) -> int:
    return EXIT_OK if verification.run(level, out) else EXIT_VERIFY


def cmd_vqe(u: float, mode: Mode, seed: int, t: float = 1.0, output_path: str = "-", max_evaluations: int = 20_000) -> int:
    result = minimize(recipe_problem(HubbardParams(u=u, t=t), mode), VqeConfig(seed=seed, max_evaluations=max_evaluations))
    running = result.running_minimum()
    rows = [[i + 1, e, b] for i, ((_, e), b) in enumerate(zip(result.history, running))]
    _write_csv(
        output_path,
        f"evaluation,energy,best_energy (u={fmt(u)}, mode={mode.value}, seed={seed}; energies in units of t)",
        rows,
    )
    if not result.converged:
        log.warning("optimizer stopped without converging after %d evaluations", result.evaluations)
    log.info("best energy %s, cubic root %s", fmt(result.best_energy), fmt(ground_energy_cubic(u / t) * t))
    return EXIT_OK


def _mode(value: str) -> Mode:
    try:
        return Mode(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"mode must be exact or doubles, got {value!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hubbard-ucc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def sweep_args(p, u_max):
        p.add_argument("--u-min", type=float, default=0.1)
        p.add_argument("--u-max", type=float, default=u_max)
        p.add_argument("--steps", type=int, default=100)
        p.add_argument("--scale", choices=("linear", "log"), default="linear")
        p.add_argument("--t", type=float, default=1.0)
        p.add_argument("--out", default="-", help="output CSV path, '-' for stdout")

    sweep_args(sub.add_parser("sweep-angles", help="exact-recipe angles against u"), 16.0)
    p = sub.add_parser("sweep-energy", help="cubic, ED and prepared energies plus fidelity against u")
    sweep_args(p, 16.0)
    p.add_argument("--mode", type=_mode, default=Mode.EXACT, help="exact or doubles")

    p = sub.add_parser("verify", help="run the built-in checks")
    p.add_argument("--level", choices=("fast", "full"), default="fast")

    p = sub.add_parser("vqe", help="minimize the recipe energy and write the optimizer history")
    p.add_argument("--u", type=float, default=4.0)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--mode", type=_mode, default=Mode.EXACT, help="exact or doubles")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--max-evaluations", type=int, default=20_000)
    p.add_argument("--out", default="-")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.command in ("sweep-angles", "sweep-energy"):
            config = SweepConfig(args.u_min, args.u_max, args.steps, args.scale, args.t, args.out)
            if args.command == "sweep-angles":
                return cmd_sweep_angles(config)
            return cmd_sweep_energy(config, args.mode)
        if args.command == "verify":
            return cmd_verify(args.level)
        if not (args.u >= 0 and args.t > 0 and math.isfinite(args.u)) or args.max_evaluations < 1:
            raise ConfigError("vqe needs u >= 0, t > 0 and a positive evaluation budget")
        return cmd_vqe(args.u, args.mode, args.seed, args.t, args.out, args.max_evaluations)
    except ConfigError as exc:
        print(f"hubbard-ucc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hubbard-ucc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
