"""Command line front end: info, sce-curve, bound and validate."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .augustin import solve_augustin
from .bounds import code_rate, theorem1_at_rate, theorem2_at_rate
from .errors import (
    CapacityError,
    ConvergenceError,
    DegenerateVarianceError,
    DomainError,
    HypothesisError,
    RegimeError,
    StructureError,
    UndefinedTiltError,
)
from .prob import Channel, Composition, Distribution
from .sce import Regime, StrongConverse
from .validate import SUITES, run_suite

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_PROPERTY = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    tol: float = 1e-12
    max_iter: int = 10000
    rho_cap: float = 2.0 ** 16
    atom_cap: int = 10 ** 7
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.tol < 1e-3:
            raise InputError(f"--tol must lie in (0, 1e-3), got {self.tol!r}")
        if self.max_iter <= 0 or self.atom_cap <= 0:
            raise InputError("iteration and atom caps must be positive")
        if not self.rho_cap > 2:
            raise InputError("--rho-cap must exceed 2")


def fmt(x) -> str:
    return format(float(x), ".17g")


def _json_value(v):
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        # JSON has no infinities; they are written as null
        return fmt(v) if math.isfinite(v) else "null"
    return json.dumps(str(v))


def dumps(obj) -> str:
    """JSON with every float printed to 17 significant digits."""
    return _json_value(obj) + "\n"


def _csv_cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return fmt(v)
    if v is None:
        return ""
    if isinstance(v, (list, tuple)):
        return " ".join(_csv_cell(x) for x in v)
    return str(v)


def to_csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_csv_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if text.splitlines() else ""
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {line}") from None


def _require(data, keys, path):
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    missing = [k for k in keys if k not in data]
    if missing:
        raise InputError(f"{path}: missing key(s) {', '.join(missing)}")


def load_channel(path) -> Channel:
    data = _read_json(path)
    _require(data, ("input_alphabet", "output_alphabet", "matrix"), path)
    try:
        return Channel(data["matrix"], data["input_alphabet"], data["output_alphabet"])
    except (StructureError, DomainError, ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def load_distribution(path) -> Distribution:
    data = _read_json(path)
    _require(data, ("alphabet", "probs"), path)
    try:
        return Distribution(data["probs"], data["alphabet"])
    except (StructureError, DomainError, ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def parse_rates(spec: str) -> np.ndarray:
    try:
        start, stop, step = (float(s) for s in spec.split(":"))
    except ValueError:
        raise InputError(f"--rates expects start:stop:step, got {spec!r}") from None
    if not 0 < start < stop or not step > 0:
        raise InputError("--rates needs 0 < start < stop and step > 0")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def parse_alphas(spec: str):
    try:
        alphas = [float(s) for s in spec.split(",") if s.strip()]
    except ValueError:
        raise InputError(f"--alphas expects a comma separated list, got {spec!r}") from None
    if not alphas or any(not a > 0 for a in alphas):
        raise InputError("orders must be positive")
    return alphas


def _inputs(args):
    channel = load_channel(args.channel)
    p = load_distribution(args.composition)
    if p.alphabet != channel.input_alphabet:
        raise InputError(f"composition alphabet {list(p.alphabet)} does not match channel inputs "
                         f"{list(channel.input_alphabet)}")
    return channel, p


def cmd_info(args, cfg: RunConfig):
    channel, p = _inputs(args)
    rows = []
    for a in parse_alphas(args.alphas):
        sol = solve_augustin(a, channel, p, tol=cfg.tol, max_iter=cfg.max_iter, seed=cfg.seed)
        rows.append({"alpha": a, "I_alpha": sol.info,
                     "fixed_point_residual": sol.fixed_point_residual,
                     "certificate_margin": sol.certificate_margin})
    cols = ["alpha", "I_alpha", "fixed_point_residual", "certificate_margin"]
    return (dumps(rows) if args.format == "json" else to_csv(rows, cols)), EXIT_OK


def _sce_row(res):
    return {"rate": res.rate, "regime": res.regime.value, "rho_star": res.rho_star,
            "exponent": res.exponent, "slope": res.slope}


def cmd_sce_curve(args, cfg: RunConfig):
    channel, p = _inputs(args)
    rates = parse_rates(args.rates)
    sc = StrongConverse(channel, p, tol=cfg.tol, max_iter=cfg.max_iter, rho_cap=cfg.rho_cap)
    rows = [_sce_row(sc(r)) for r in rates]
    cols = ["rate", "regime", "rho_star", "exponent", "slope"]
    return (dumps(rows) if args.format == "json" else to_csv(rows, cols)), EXIT_OK


def bound_report(channel, composition, M, L, cfg: RunConfig = RunConfig()):
    rate = code_rate(composition.n, M, L)
    sc = StrongConverse(channel, composition.base, tol=cfg.tol, max_iter=cfg.max_iter,
                        rho_cap=cfg.rho_cap)
    out = {"rate": rate, "regime": Regime.ZERO.value, "rho_star": 1.0, "exponent": 0.0,
           "prefactor": None, "theorem1_bound": 0.0, "theorem2_bound": 0.0, "informative": False}
    if rate <= 0:
        return out
    res = sc(rate)
    out.update(regime=res.regime.value, rho_star=res.rho_star, exponent=res.exponent,
               theorem2_bound=theorem2_at_rate(channel, composition, rate, sc))
    if res.regime is Regime.PARAMETRIC:
        t1 = theorem1_at_rate(channel, composition, rate, sc)
        out.update(prefactor=t1.prefactor, theorem1_bound=t1.bound, informative=t1.informative)
    elif res.regime is Regime.HIGH_RATE:
        out.update(theorem1_bound=None)
    return out


def cmd_bound(args, cfg: RunConfig):
    channel, p = _inputs(args)
    if args.n is None or args.M is None or args.L is None:
        raise InputError("bound needs --n, --M and --L")
    if args.n <= 0 or args.M <= 0 or args.L <= 0:
        raise InputError("--n, --M and --L must be positive")
    try:
        composition = Composition.from_distribution(p, args.n)
    except StructureError as exc:
        raise InputError(str(exc)) from None
    report = bound_report(channel, composition, args.M, args.L, cfg)
    cols = list(report)
    return (to_csv([report], cols) if args.format == "csv" else dumps(report)), EXIT_OK


def cmd_validate(args, cfg: RunConfig):
    report = run_suite(args.suite, seed=cfg.seed, atom_cap=cfg.atom_cap)
    if args.format == "csv":
        rows = report["rows"]
        cols = list(rows[0]) if rows else []
        text = to_csv(rows, cols)
    else:
        text = dumps(report)
    return text, (EXIT_OK if report["passed"] else EXIT_PROPERTY)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-12)
    common.add_argument("--max-iter", type=int, default=10000)
    common.add_argument("--rho-cap", type=float, default=2.0 ** 16)
    common.add_argument("--atom-cap", type=int, default=10 ** 7)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default="-", help="output file (default: standard output)")
    common.add_argument("--format", choices=("csv", "json"))

    files = argparse.ArgumentParser(add_help=False)
    files.add_argument("--channel", required=True, help="channel JSON file")
    files.add_argument("--composition", required=True, help="input distribution JSON file")

    parser = _Parser(prog="sconverse", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("info", parents=[common, files], help="Augustin information per order")
    p.add_argument("--alphas", default="0.5,1,1.5,2,4,8")
    p.set_defaults(func=cmd_info, default_format="csv")
    p = sub.add_parser("sce-curve", parents=[common, files], help="strong converse exponent curve")
    p.add_argument("--rates", required=True, help="start:stop:step in nats")
    p.set_defaults(func=cmd_sce_curve, default_format="csv")
    p = sub.add_parser("bound", parents=[common, files], help="converse bounds for an (M, L) code")
    p.add_argument("--n", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--L", type=int, default=1)
    p.set_defaults(func=cmd_bound, default_format="json")
    p = sub.add_parser("validate", parents=[common], help="oracle sweeps")
    p.add_argument("suite", choices=SUITES)
    p.set_defaults(func=cmd_validate, default_format="json")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        cfg = RunConfig(tol=args.tol, max_iter=args.max_iter, rho_cap=args.rho_cap,
                        atom_cap=args.atom_cap, seed=args.seed)
        text, code = args.func(args, cfg)
    except (InputError, StructureError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConvergenceError, RegimeError, DegenerateVarianceError, UndefinedTiltError,
            CapacityError, HypothesisError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
