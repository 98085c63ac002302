"""Command line front end: ``weakkam <command> --input instance.json ...``.

Exit status is 0 on success, 1 when a check fails or a solver errors, and
2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import checks, critical, lax_oleinik, mather, selection, serialize
from .core import MODES, InstanceError, SolverConfig
from .instances import GeneratorSpec, generate

COMMANDS = ("solve", "critical", "barrier", "mather", "u0", "sweep", "check", "gen")


class UsageError(Exception):
    pass


def _add_common(p: argparse.ArgumentParser, needs_input: bool = True) -> None:
    if needs_input:
        p.add_argument("--input", required=True, metavar="PATH", help="instance JSON")
    p.add_argument("--output", metavar="PATH", help="write here instead of stdout")
    p.add_argument("--mode", choices=MODES, help="override the instance arithmetic mode")
    p.add_argument("--tol", type=float, default=1e-12, help="float-mode tolerance")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weakkam", description="Discrete weak KAM solver")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve u = T_lambda(u) + beta")
    _add_common(p)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--beta", default="0")

    p = sub.add_parser("critical", help="critical value by Karp, LP and discounted estimate")
    _add_common(p)
    p.add_argument("--lambda", dest="lam", default="1023/1024")

    for name, text in (("barrier", "Mane potential, Peierls barrier, Aubry set"),
                       ("mather", "extreme Mather measures"),
                       ("u0", "selected limit solution")):
        p = sub.add_parser(name, help=text)
        _add_common(p)

    p = sub.add_parser("sweep", help="vanishing discount experiment (CSV)")
    _add_common(p)
    p.add_argument("--schedule", help="comma separated lambdas; default 1-2^-k, k=1..20")
    p.add_argument("--csv-rational", choices=("decimal", "fraction"), default="decimal")

    p = sub.add_parser("check", help="run every property on the instance")
    _add_common(p)

    p = sub.add_parser("gen", help="generate an instance")
    _add_common(p, needs_input=False)
    p.add_argument("--spec", metavar="PATH", help="GeneratorSpec JSON (other flags ignored)")
    p.add_argument("--kind", default="random_rational",
                   choices=("random_rational", "random_float", "torus_lagrangian"))
    p.add_argument("--n", type=int)
    p.add_argument("--grid-size", type=int)
    p.add_argument("--lo", default="0")
    p.add_argument("--hi", default="10")
    p.add_argument("--denominator-bound", type=int, default=8)
    p.add_argument("--potential", help="comma separated potential values (torus)")
    return parser


def _emit(args, text: str) -> None:
    if args.output:
        serialize.write_atomic(args.output, text)
    else:
        sys.stdout.write(text)


def _cfg(args) -> SolverConfig:
    return SolverConfig(tol=args.tol, seed=args.seed)


def _scalar(space, text: str, flag: str):
    try:
        return space.scalar(text)
    except InstanceError as exc:
        raise UsageError(f"{flag}: {exc}") from exc


def _run(args) -> int:
    if args.command == "gen":
        if args.spec:
            with open(args.spec) as fh:
                spec = GeneratorSpec.from_dict(json.load(fh))
        else:
            potential = None
            if args.potential:
                potential = tuple(Fraction(v) for v in args.potential.split(","))
            try:
                spec = GeneratorSpec(
                    kind=args.kind, n=args.n, grid_size=args.grid_size, seed=args.seed,
                    cost_range=(Fraction(args.lo), Fraction(args.hi)),
                    denominator_bound=args.denominator_bound, potential=potential, mode=args.mode,
                )
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
        space = generate(spec)
        if args.mode:
            space = space.with_mode(args.mode)
        _emit(args, serialize.dumps(serialize.space_to_dict(space)))
        return 0

    try:
        space = serialize.load_space(args.input, args.mode)
    except FileNotFoundError as exc:
        raise UsageError(f"--input: no such file {args.input}") from exc
    cfg = _cfg(args)

    if args.command == "solve":
        lam = _scalar(space, args.lam, "--lambda")
        beta = _scalar(space, args.beta, "--beta")
        if not 0 < lam < 1:
            raise UsageError("--lambda must lie in (0, 1)")
        sol = lax_oleinik.solve_discounted(space, lam, beta, cfg)
        _emit(args, serialize.dumps(serialize.solution_to_dict(sol)))
        return 0

    if args.command == "critical":
        lam = _scalar(space, args.lam, "--lambda")
        if not 0 < lam < 1:
            raise UsageError("--lambda must lie in (0, 1)")
        alpha = critical.critical_value_karp(space)
        value, _ = mather.minimize_cost_lp(space)
        hat, bound = critical.critical_value_discounted_estimate(space, lam, cfg, alpha)
        out = {
            "alpha_karp": serialize.encode(alpha),
            "alpha_lp": serialize.encode(-value),
            "alpha_discounted": {
                "estimate": serialize.encode(hat),
                "error_bound": serialize.encode(bound),
                "lambda": serialize.encode(lam),
            },
        }
        _emit(args, serialize.dumps(out))
        return 0

    if args.command == "barrier":
        b = critical.barrier_data(space, cfg)
        _emit(args, serialize.dumps(serialize.barrier_to_dict(b)))
        return 0

    if args.command == "mather":
        b = critical.barrier_data(space, cfg)
        extremes = mather.extreme_mather_measures(space, b)
        out = {"alpha": serialize.encode(b.alpha),
               "measures": [serialize.measure_to_dict(cm) for cm in extremes]}
        _emit(args, serialize.dumps(out))
        return 0

    if args.command == "u0":
        _, _, sel = selection.select(space, cfg)
        _emit(args, serialize.dumps(serialize.selection_to_dict(sel)))
        return 0

    if args.command == "sweep":
        schedule = None
        if args.schedule:
            schedule = [_scalar(space, v, "--schedule") for v in args.schedule.split(",")]
            try:
                report = selection.convergence_sweep(space, cfg, schedule)
            except ValueError as exc:
                raise UsageError(f"--schedule: {exc}") from exc
        else:
            report = selection.convergence_sweep(space, cfg)
        _emit(args, serialize.sweep_to_csv(report, args.csv_rational))
        for row in report.rows:
            if row.failed:
                print(f"lambda={row.lam}: {row.error}", file=sys.stderr)
        return 0 if report.ok else 1

    if args.command == "check":
        results = checks.run_checks(space, cfg)
        lines = []
        for r in results:
            status = "PASS" if r.ok else "FAIL"
            lines.append(f"{status}  {r.name}" + (f"  [{r.detail}]" if r.detail else ""))
        _emit(args, "\n".join(lines) + "\n")
        failed = [r for r in results if not r.ok]
        for r in failed:
            print(f"check failed: {r.name}: {r.detail}", file=sys.stderr)
        return 0 if not failed else 1

    raise UsageError(f"unknown command {args.command}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _run(args)
    except UsageError as exc:
        print(f"weakkam {args.command}: {exc}", file=sys.stderr)
        return 2
    except (InstanceError, json.JSONDecodeError) as exc:
        print(f"weakkam {args.command}: bad instance: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"weakkam {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
