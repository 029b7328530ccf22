"""Command-line entry point.

    steerwit classify --alpha 0.8 --theta pi/4
    steerwit scan --grid-n 101 --out fig2.csv
    steerwit tomo --alpha 0.9 --theta pi/4 --shots 10000 --trials 100 --seed 42
    steerwit bellgeom --alpha 0.52 0.6 0.7 0.8 0.9 --noise

Exit codes: 0 success, 2 parameter error, 3 I/O error, 4 numerical-contract
violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .errors import ContractViolation, DegenerateDataError, ParameterError
from .measures import concurrence
from .states import (
    MU_DEFAULT,
    check_alpha,
    check_mu,
    check_theta,
    construct_tau1,
    construct_tau2,
    target_state,
)
from .steering import (
    bell_geom,
    classify_region,
    infinite_setting_a_to_b_only,
    witness_steering,
    witness_thresholds,
)
from .tomo import monte_carlo_errorbar

EXIT_OK, EXIT_PARAM, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4
THETA_EPS = 1e-4
SCAN_HEADER = ("alpha", "theta", "c_tau1", "c_tau2", "region", "eq6_boundary", "inf_setting")

_ANGLE = re.compile(r"^\s*(?:(\d*\.?\d+)\s*\*?\s*)?pi\s*(?:/\s*(\d*\.?\d+))?\s*$")


def parse_angle(text: str) -> float:
    """Float, or a multiple of pi such as ``pi/4`` or ``3*pi/16``."""
    m = _ANGLE.match(text)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number or multiple of pi: {text!r}") from None


@dataclass
class RunConfig:
    command: str
    alpha: list = field(default_factory=lambda: [0.9])
    theta: float = math.pi / 4
    mu1: float = MU_DEFAULT
    mu2: float = MU_DEFAULT
    grid_n: int = 101
    shots: int = 10_000
    trials: int = 100
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    noise: bool = False

    def validate(self):
        for a in self.alpha:
            check_alpha(a)
        check_theta(self.theta)
        check_mu(self.mu1, "mu1")
        check_mu(self.mu2, "mu2")
        if self.grid_n < 2:
            raise ParameterError(f"grid-n must be >= 2, got {self.grid_n}")
        if self.shots < 1:
            raise ParameterError(f"shots must be >= 1, got {self.shots}")
        if self.trials < 2 and (self.command == "tomo" or self.noise):
            raise ParameterError(f"trials must be >= 2 for error bars, got {self.trials}")
        if self.format not in ("csv", "json"):
            raise ParameterError(f"unknown format {self.format!r}")

    def parameters(self) -> dict:
        d = asdict(self)
        for key in ("command", "out", "format"):
            d.pop(key)
        return d


def _csv_cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return "%.12g" % v
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return float("%.17g" % v) if math.isfinite(v) else None
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def render(config: RunConfig, header, rows, comments=()) -> str:
    """Serialize rows in the configured format."""
    if config.format == "json":
        doc = {
            "version": __version__,
            "command": config.command,
            "seed": config.seed,
            "parameters": {k: _json_value(v) if not isinstance(v, list) else [_json_value(x) for x in v]
                           for k, v in config.parameters().items()},
            "notes": list(comments),
            "rows": [{k: _json_value(v) for k, v in zip(header, row)} for row in rows],
        }
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(f"# steerwit {__version__} {config.command} seed={config.seed}\n")
    for c in comments:
        buf.write(f"# {c}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def cmd_classify(config: RunConfig):
    header = ("alpha", "theta", "c_tau1", "c_tau2", "bob_steers_alice", "alice_steers_bob",
              "region", "witness_region", "a_to_b_threshold", "eq6_boundary", "inf_setting",
              "bell_lhs", "bell_rhs", "bell_violated")
    rows = []
    for alpha in config.alpha:
        rho = target_state(alpha, config.theta)
        verdict = witness_steering(rho, config.mu1, config.mu2)
        a_to_b, b_to_a = witness_thresholds(config.theta, config.mu1, config.mu2)
        bell = bell_geom(rho)
        rows.append((
            alpha, config.theta, verdict.c_tau1, verdict.c_tau2,
            verdict.bob_steers_alice.value, verdict.alice_steers_bob.value,
            classify_region(alpha, config.theta, config.mu1, config.mu2).value,
            verdict.region.value, a_to_b, b_to_a,
            infinite_setting_a_to_b_only(alpha, config.theta),
            bell.lhs, bell.rhs, bell.violated,
        ))
    return header, rows, ()


def scan_grid(grid_n: int):
    alphas = np.linspace(0.0, 1.0, grid_n)
    thetas = np.linspace(THETA_EPS, math.pi / 4, grid_n)
    return alphas, thetas


def cmd_scan(config: RunConfig):
    alphas, thetas = scan_grid(config.grid_n)
    points = [(a, t) for a in alphas for t in thetas]
    targets = np.array([target_state(a, t) for a, t in points])
    c1 = concurrence(construct_tau1(targets, config.mu1))
    c2 = concurrence(construct_tau2(targets, config.mu2))
    rows = []
    for (a, t), x1, x2 in zip(points, c1, c2):
        rows.append((
            a, t, x1, x2,
            classify_region(a, t, config.mu1, config.mu2).value,
            witness_thresholds(t, config.mu1, config.mu2)[1],
            infinite_setting_a_to_b_only(a, t),
        ))
    note = f"theta grid starts at {THETA_EPS:g} instead of 0 (boundaries are defined for theta > 0)"
    return SCAN_HEADER, rows, (note,)


def cmd_tomo(config: RunConfig):
    header = ("state", "alpha", "theta", "fidelity_mean", "fidelity_std",
              "concurrence_mean", "concurrence_std", "concurrence_theory")
    rows = []
    for alpha in config.alpha:
        rho = target_state(alpha, config.theta)
        states = (("target", rho), ("tau1", construct_tau1(rho, config.mu1)),
                  ("tau2", construct_tau2(rho, config.mu2)))
        for k, (name, state) in enumerate(states):
            seed = [config.seed, k]
            f_mean, f_std = monte_carlo_errorbar(state, config.shots, config.trials, "fidelity", seed)
            c_mean, c_std = monte_carlo_errorbar(state, config.shots, config.trials, "concurrence", seed)
            rows.append((name, alpha, config.theta, f_mean, f_std, c_mean, c_std, concurrence(state)))
    return header, rows, ()


def cmd_bellgeom(config: RunConfig):
    header = ["label", "alpha", "theta", "lhs", "rhs", "violated"]
    if config.noise:
        header += ["lhs_mean", "lhs_std", "rhs_mean", "rhs_std"]
    rows = []
    for label, alpha in enumerate(config.alpha, start=1):
        rho = target_state(alpha, config.theta)
        res = bell_geom(rho)
        row = [label, alpha, config.theta, res.lhs, res.rhs, res.violated]
        if config.noise:
            seed = [config.seed, label]
            row += [*monte_carlo_errorbar(rho, config.shots, config.trials, "bell-geom-lhs", seed),
                    *monte_carlo_errorbar(rho, config.shots, config.trials, "bell-geom-rhs", seed)]
        rows.append(row)
    return tuple(header), rows, ()


COMMANDS = {
    "classify": cmd_classify,
    "scan": cmd_scan,
    "tomo": cmd_tomo,
    "bellgeom": cmd_bellgeom,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, nargs="+", default=[0.9],
                        help="mixing weight(s) of the target state, in [0, 1]")
    common.add_argument("--theta", type=parse_angle, default=math.pi / 4,
                        help="entanglement angle in [0, pi/4]; accepts e.g. pi/8")
    common.add_argument("--mu1", type=float, default=MU_DEFAULT)
    common.add_argument("--mu2", type=float, default=MU_DEFAULT)
    common.add_argument("--grid-n", type=int, default=101)
    common.add_argument("--shots", type=int, default=10_000, help="expected counts per setting")
    common.add_argument("--trials", type=int, default=100, help="Monte-Carlo repetitions")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--noise", action="store_true",
                        help="bellgeom: add tomography error bars")

    parser = argparse.ArgumentParser(prog="steerwit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="verdicts and boundaries at one point")
    sub.add_parser("scan", parents=[common], help="region map over the (alpha, theta) plane")
    sub.add_parser("tomo", parents=[common], help="simulated tomography with error bars")
    sub.add_parser("bellgeom", parents=[common], help="geometric Bell-like inequality")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PARAM
    config = RunConfig(
        command=ns.command, alpha=list(ns.alpha), theta=ns.theta, mu1=ns.mu1, mu2=ns.mu2,
        grid_n=ns.grid_n, shots=ns.shots, trials=ns.trials, seed=ns.seed, out=ns.out,
        format=ns.format, noise=ns.noise,
    )
    try:
        config.validate()
        header, rows, comments = COMMANDS[config.command](config)
        text = render(config, header, rows, comments)
    except ParameterError as exc:
        print(f"steerwit: parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except (ContractViolation, DegenerateDataError) as exc:
        print(f"steerwit: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        if config.out is None:
            sys.stdout.write(text)
        else:
            with open(config.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    except OSError as exc:
        print(f"steerwit: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
