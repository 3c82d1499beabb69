"""Command-line front end producing plot-ready tables.

Subcommands: ``correlations``, ``single``, ``rate``, ``two`` and ``sweep``.
Output is CSV (default) or JSON lines, one header row naming every
column with its unit.  Floats are written with 17 significant digits so
repeated runs are byte-identical.

Exit codes: 0 success, 2 usage error or unphysical input, 3 numerical
failure.  A relative ``--output`` path is resolved against the directory
named by ``UNRUH_OQS_OUTPUT_DIR`` when that variable is set.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, TextIO

import numpy as np

from . import single_atom, two_atom
from .dissipator import (kossakowski_from_coefficients, kossakowski_large_acceleration,
                         kossakowski_scalar)
from .errors import UnruhError
from .field_correlations import TrajectoryParams, fourier_g, fourier_g_numeric
from .qstate import TwoAtomState, concurrence, min_eigenvalue, pauli4_encode

log = logging.getLogger("unruh_oqs")

OUTPUT_DIR_ENV = "UNRUH_OQS_OUTPUT_DIR"
EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3
NORM_WARN_TOL = 1e-6


class UsageError(Exception):
    """Bad flags or unphysical input; maps to exit code 2."""


# ---------------------------------------------------------------------------
# tables

def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return "%.17g" % (v + 0.0)  # + 0.0 folds -0 into 0
    return str(v)


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        v = float("%.17g" % v)
        return v if math.isfinite(v) else str(v)
    return v


@dataclass
class Table:
    columns: List[str]
    rows: List[list] = field(default_factory=list)

    def write(self, out: TextIO, fmt: str = "csv") -> None:
        if fmt == "csv":
            out.write(",".join(self.columns) + "\n")
            for row in self.rows:
                out.write(",".join(_fmt(v) for v in row) + "\n")
        else:
            for row in self.rows:
                rec = {c: _json_value(v) for c, v in zip(self.columns, row)}
                out.write(json.dumps(rec) + "\n")


# ---------------------------------------------------------------------------
# input parsing

_NUMBER = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


def _numbers(text: str) -> List[float]:
    return [float(x) for x in _NUMBER.findall(text)]


def parse_vector(text: str, unit: bool, what: str) -> np.ndarray:
    """Comma separated 3-vector.

    Directions (``unit=True``) are normalized, with a warning when the norm
    is off by more than 1e-6.  Bloch vectors may be mixed; a norm above one
    by more than 1e-6 is rejected and smaller excesses are rescaled.
    """
    vals = _numbers(text)
    if len(vals) != 3:
        raise UsageError(f"{what}: expected three components, got {text!r}")
    v = np.array(vals)
    norm = float(np.linalg.norm(v))
    if unit:
        if norm == 0.0:
            raise UsageError(f"{what}: zero vector has no direction")
        if abs(norm - 1.0) > NORM_WARN_TOL:
            log.warning("%s has norm %.6g; normalizing", what, norm)
        return v / norm
    if norm > 1.0 + NORM_WARN_TOL:
        raise UsageError(f"{what}: Bloch vector norm {norm:.6g} exceeds 1")
    return v / norm if norm > 1.0 else v


def _input_stage(func):
    """Report library validation errors raised while reading input as usage errors."""
    def wrapper(*a, **kw):
        try:
            return func(*a, **kw)
        except UnruhError as exc:
            raise UsageError(str(exc)) from exc
    wrapper.__name__ = func.__name__
    wrapper.__doc__ = func.__doc__
    return wrapper


def _beta_from(args) -> float:
    if args.acceleration is not None:
        if not args.acceleration > 0:
            raise UsageError("--acceleration must be positive")
        return TrajectoryParams(args.acceleration).beta_u
    if not args.beta_u > 0:
        raise UsageError("--beta-u must be positive")
    return args.beta_u


def _time_grid(t_max: float, steps: int) -> np.ndarray:
    if t_max < 0 or steps < 1:
        raise UsageError("--t-max must be >= 0 and --steps >= 1")
    if t_max == 0:
        return np.array([0.0])
    return np.linspace(0.0, t_max, steps + 1)


# ---------------------------------------------------------------------------
# commands

def cmd_correlations(args) -> Table:
    beta = _beta_from(args)
    cols = ["lambda[1/time]", "beta_u[time]", "G_closed[1/time]"]
    if args.numeric:
        cols += ["G_numeric[1/time]", "abs_diff[1/time]"]
    table = Table(cols)
    for lam in args.lam:
        g = fourier_g(lam, beta)
        row = [lam, beta, g]
        if args.numeric:
            gn = fourier_g_numeric(lam, TrajectoryParams.from_beta(beta))
            row += [gn, abs(gn - g)]
        table.rows.append(row)
    return table


@_input_stage
def _single_params(args, beta: float) -> single_atom.SingleAtomParams:
    n = parse_vector(args.n, True, "--n")
    if args.omega <= 0:
        raise UsageError("--omega must be positive")
    if args.large_acceleration:
        return single_atom.SingleAtomParams.large_acceleration(args.omega, beta, n, args.omega_eff)
    return single_atom.SingleAtomParams.scalar(args.omega, beta, n, args.omega_eff)


def cmd_single(args) -> Table:
    beta = _beta_from(args)
    p = _single_params(args, beta)
    r0 = -p.n if args.rho0 is None else parse_vector(args.rho0, False, "--rho0")
    rf = None if args.observable is None else parse_vector(args.observable, False, "--observable")
    times = _time_grid(args.t_max, args.steps)
    cols = ["t[time]", "r1[1]", "r2[1]", "r3[1]"]
    if rf is not None:
        cols.append("P[1]")
    if args.rate:
        cols.append("rate[1/time]")
    rate = single_atom.excitation_rate(p) if args.rate else None
    table = Table(cols)

    def emit(t, r, prob):
        row = [float(t)] + [float(x) for x in r]
        if rf is not None:
            row.append(prob)
        if args.rate:
            row.append(rate)
        table.rows.append(row)

    for t in times:
        r = single_atom.evolve_state(p, r0, float(t))
        prob = single_atom.transition_probability(p, r0, rf, float(t)) if rf is not None else None
        emit(t, r, prob)
    r_inf = single_atom.asymptotic_state(p)
    prob_inf = 0.5 * (1.0 + float(rf @ r_inf)) if rf is not None else None
    emit(math.inf, r_inf, prob_inf)
    return table


def cmd_rate(args) -> Table:
    beta = _beta_from(args)
    table = Table(["omega[1/time]", "beta_u[time]", "rate[1/time]"])
    for w in args.omega:
        if w <= 0:
            raise UsageError("--omega must be positive")
        p = single_atom.SingleAtomParams.scalar(w, beta, [0.0, 0.0, 1.0])
        table.rows.append([w, beta, single_atom.excitation_rate(p)])
    return table


@_input_stage
def parse_init(text: str, n: np.ndarray) -> TwoAtomState:
    """``product:(x,y,z),(x,y,z)``, ``werner:EPS``, ``singlet`` or
    ``file:PATH`` (JSON with ``v0i``, ``vi0``, ``vij`` or a 4x4
    ``components`` array)."""
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "singlet":
        return TwoAtomState.singlet()
    if kind == "product":
        vals = _numbers(rest)
        if len(vals) != 6:
            raise UsageError(f"product init needs two 3-vectors, got {rest!r}")
        r1 = parse_vector(",".join(map(repr, vals[:3])), True, "product vector 1")
        r2 = parse_vector(",".join(map(repr, vals[3:])), True, "product vector 2")
        return TwoAtomState.product(r1, r2)
    if kind == "werner":
        vals = _numbers(rest)
        if len(vals) != 1:
            raise UsageError(f"werner init needs one number, got {rest!r}")
        return two_atom.werner_state(vals[0])
    if kind in ("file", "components-file"):
        try:
            with open(rest) as fh:
                data = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read components file: {exc}") from exc
        if "components" in data:
            s = TwoAtomState.from_components(data["components"])
        else:
            s = TwoAtomState(data["v0i"], data["vi0"], data["vij"])
        pauli4_encode(s)
        return s
    raise UsageError(f"unknown --init {text!r}")


@_input_stage
def _two_liouvillian(args, beta: float) -> two_atom.CollectiveLiouvillian:
    n = parse_vector(args.n, True, "--n")
    if args.omega <= 0:
        raise UsageError("--omega must be positive")
    if args.full:
        k = kossakowski_scalar(args.omega, beta, n)
    else:
        if beta * args.omega > 2.0:
            raise UsageError("beta_u * omega > 2: use --full for the complete Kossakowski matrix")
        k = kossakowski_large_acceleration(args.omega, beta, n)
    return two_atom.build_collective_liouvillian(k, n)


def cmd_two(args) -> Table:
    beta = _beta_from(args)
    L = _two_liouvillian(args, beta)
    s0 = parse_init(args.init, L.n)
    times = _time_grid(args.t_max, args.steps)
    s_inf = two_atom.asymptotic_two_atom(L, float(np.clip(s0.tau, -3.0, 1.0)))
    x_inf = s_inf.to_vector()
    table = Table(["t[time]", "tau[1]", "min_eig[1]", "concurrence[1]", "asym_residual[1]"])

    def emit(t, s):
        rho = pauli4_encode(s, check=False)
        table.rows.append([float(t), s.tau, min_eigenvalue(rho), concurrence(rho),
                           float(np.max(np.abs(s.to_vector() - x_inf)))])

    for t, s in zip(times, two_atom.evolve_two_atom_grid(L, s0, times)):
        emit(t, s)
    emit(math.inf, s_inf)
    return table


# sweeps ---------------------------------------------------------------------

def _sweep_asymptotic(p: Dict[str, float]) -> list:
    tau, R = p["tau"], p["R"]
    n = np.array([0.0, 0.0, 1.0])
    L = two_atom.build_collective_liouvillian(kossakowski_from_coefficients(1.0, R, 0.0, n))
    return [tau, R, two_atom.entanglement_threshold(R), two_atom.asymptotic_concurrence(tau, R),
            two_atom.stationary_concurrence(L, tau)]


def _sweep_correlations(p: Dict[str, float]) -> list:
    return [p["lambda"], p["beta_u"], fourier_g(p["lambda"], p["beta_u"])]


def _sweep_rate(p: Dict[str, float]) -> list:
    sp = single_atom.SingleAtomParams.scalar(p["omega"], p["beta_u"], [0.0, 0.0, 1.0])
    return [p["omega"], p["beta_u"], single_atom.excitation_rate(sp)]


@dataclass(frozen=True)
class SweepKind:
    columns: Sequence[str]
    defaults: Dict[str, float]
    func: Callable[[Dict[str, float]], list]


SWEEPS = {
    "asymptotic": SweepKind(["tau[1]", "R[1]", "threshold[1]", "concurrence_closed[1]",
                             "concurrence_numeric[1]"], {"tau": -1.0, "R": 1.0}, _sweep_asymptotic),
    "correlations": SweepKind(["lambda[1/time]", "beta_u[time]", "G_closed[1/time]"],
                              {"lambda": 1.0, "beta_u": 1.0}, _sweep_correlations),
    "rate": SweepKind(["omega[1/time]", "beta_u[time]", "rate[1/time]"],
                      {"omega": 1.0, "beta_u": 1.0}, _sweep_rate),
}


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    param: str
    start: float
    stop: float
    num: int
    fixed: Dict[str, float] = field(default_factory=dict)
    fmt: str = "csv"

    def __post_init__(self):
        if self.kind not in SWEEPS:
            raise UsageError(f"unknown sweep kind {self.kind!r}")
        allowed = SWEEPS[self.kind].defaults
        if self.param not in allowed:
            raise UsageError(f"{self.kind} sweeps accept parameters {sorted(allowed)}, got {self.param!r}")
        for k in self.fixed:
            if k not in allowed:
                raise UsageError(f"unknown fixed parameter {k!r} for {self.kind} sweeps")
        if self.num < 1 or self.start > self.stop:
            raise UsageError("need --num >= 1 and --start <= --stop")

    def grid(self) -> np.ndarray:
        if self.num == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.num)

    def points(self) -> List[Dict[str, float]]:
        base = dict(SWEEPS[self.kind].defaults)
        base.update(self.fixed)
        return [{**base, self.param: float(v)} for v in self.grid()]


def run_sweep(spec: SweepSpec, workers: int = 1) -> Table:
    kind = SWEEPS[spec.kind]
    points = spec.points()

    def one(p):
        try:
            return kind.func(p) + [""]
        except (UnruhError, ValueError, ArithmeticError) as exc:
            vals = [p.get(c.split("[")[0], math.nan) for c in kind.columns]
            return [float(v) for v in vals] + [f"{type(exc).__name__}: {exc}".replace(",", ";")]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, points))
    else:
        rows = [one(p) for p in points]
    return Table(list(kind.columns) + ["error"], rows)


def _parse_fixed(items: Sequence[str]) -> Dict[str, float]:
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--fixed expects key=value, got {item!r}")
        try:
            out[key.strip()] = float(val)
        except ValueError as exc:
            raise UsageError(f"--fixed {item!r}: {exc}") from exc
    return out


def cmd_sweep(args) -> Table:
    spec = SweepSpec(args.kind, args.param, args.start, args.stop, args.num,
                     _parse_fixed(args.fixed), args.format)
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    return run_sweep(spec, args.workers)


# ---------------------------------------------------------------------------
# argument parser

def _add_temperature(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--beta-u", type=float, help="inverse Unruh temperature")
    g.add_argument("--acceleration", type=float, help="proper acceleration a (beta_u = 2 pi / a)")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--output", help=f"output file (relative paths use ${OUTPUT_DIR_ENV})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unruh-oqs",
                                     description="Accelerated two-level atoms as open quantum systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("correlations", help="Fourier transform of the field correlations")
    p.add_argument("--lambda", dest="lam", type=float, nargs="+", required=True)
    _add_temperature(p)
    p.add_argument("--numeric", action="store_true", help="also integrate the Wightman function")
    _add_common(p)
    p.set_defaults(func=cmd_correlations)

    p = sub.add_parser("single", help="single-atom Bloch vector time series")
    p.add_argument("--omega", type=float, required=True)
    _add_temperature(p)
    p.add_argument("--n", default="0,0,1", help="quantization axis, comma separated")
    p.add_argument("--rho0", help="initial Bloch vector (default: ground state, -n)")
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--observable", help="Bloch vector rf; adds the column P = (1 + rf.r(t))/2")
    p.add_argument("--rate", action="store_true", help="add the excitation-rate column")
    p.add_argument("--omega-eff", type=float, help="rotation frequency (default: omega)")
    p.add_argument("--large-acceleration", action="store_true",
                   help="use the high temperature Kossakowski matrix")
    _add_common(p)
    p.set_defaults(func=cmd_single)

    p = sub.add_parser("rate", help="ground-to-excited transition rate")
    p.add_argument("--omega", type=float, nargs="+", required=True)
    _add_temperature(p)
    _add_common(p)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("two", help="two-atom evolution with concurrence")
    p.add_argument("--omega", type=float, required=True)
    _add_temperature(p)
    p.add_argument("--n", default="0,0,1")
    p.add_argument("--init", required=True,
                   help="product:(x,y,z),(x,y,z) | werner:EPS | singlet | file:PATH")
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--full", action="store_true",
                   help="use the full Kossakowski matrix instead of the large-acceleration form")
    _add_common(p)
    p.set_defaults(func=cmd_two)

    p = sub.add_parser("sweep", help="parameter sweep")
    p.add_argument("--kind", choices=sorted(SWEEPS), required=True)
    p.add_argument("--param", required=True)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--num", type=int, default=11)
    p.add_argument("--fixed", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--workers", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def _open_output(path: Optional[str]):
    if path is None:
        return None
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        os.makedirs(base, exist_ok=True)
        path = os.path.join(base, path)
    return open(path, "w", newline="")


def main(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = stdout or sys.stdout
    try:
        table = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnruhError, ValueError, ArithmeticError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    fh = _open_output(args.output)
    try:
        table.write(fh or out, args.format)
    finally:
        if fh is not None:
            fh.close()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
