"""Command-line interface.

Subcommands: table, betti-curve, shadow-curve, collapse-sweep,
tree-spectral, lwc-check, hypertree.  A flat key=value config file can
seed any subcommand's options (command-line flags override it).  Exit
code 0 on success, 2 on precondition violations.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import complexes as cx
from . import experiments as xp
from .errors import (AtCriticalPoint, InvalidProbability, NoInteriorRoot,
                     NotAFixedPoint, ScaleExceeded)

_USER_ERRORS = (ValueError, InvalidProbability, NoInteriorRoot,
                AtCriticalPoint, ScaleExceeded, NotAFixedPoint)


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _write(out_path, text: str) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _c_grid(args) -> list[float]:
    if args.c is not None:
        return [float(args.c)]
    if args.c_min is None or args.c_max is None:
        raise ValueError("supply either --c or --c-min/--c-max/--c-steps")
    return [float(v) for v in
            np.linspace(args.c_min, args.c_max, args.c_steps)]


def _emit_records(args, records, columns) -> None:
    if args.format == "json":
        _write(args.out, xp.records_to_json(records, columns))
    else:
        _write(args.out, xp.records_to_csv(records, columns))


def _cmd_table(args) -> int:
    _emit_records(args, xp.run_table(args.d), xp.TABLE_COLUMNS)
    return 0


def _cmd_betti_curve(args) -> int:
    records = xp.run_betti_curve(args.d, _c_grid(args), args.n, args.seeds,
                                 seed_base=args.seed_base, jobs=args.jobs)
    _emit_records(args, records, xp.BETTI_COLUMNS)
    return 0


def _cmd_shadow_curve(args) -> int:
    records = xp.run_shadow_curve(args.d, _c_grid(args), args.n, args.seeds,
                                  seed_base=args.seed_base, jobs=args.jobs)
    _emit_records(args, records, xp.SHADOW_COLUMNS)
    return 0


def _cmd_collapse_sweep(args) -> int:
    records = xp.run_collapse_sweep(args.d, _c_grid(args), args.n, args.seeds,
                                    seed_base=args.seed_base, jobs=args.jobs)
    _emit_records(args, records, xp.COLLAPSE_COLUMNS)
    return 0


def _cmd_tree_spectral(args) -> int:
    records = xp.run_tree_spectral(
        args.d, args.c, args.depths, args.trees, seed_base=args.seed_base,
        pool=args.pool, sweeps=args.sweeps, init=args.init)
    _emit_records(args, records, xp.TREE_COLUMNS)
    return 0


def _cmd_lwc_check(args) -> int:
    result = xp.run_lwc_check(args.d, args.c, args.n, args.radius,
                              args.samples, instances=args.seeds,
                              seed_base=args.seed_base)
    _write(args.out, json.dumps(result, indent=2) + "\n")
    return 0


def _cmd_hypertree(args) -> int:
    y, record = xp.run_hypertree(args.n, args.d, args.seed)
    if args.out:
        cx.save_complex(y, args.out)
    sys.stdout.write(json.dumps(
        {"kind": record.kind, "params": record.params,
         "stats": record.stats}, indent=2) + "\n")
    return 0


def _add_common(sub, *, grid=True) -> None:
    sub.add_argument("--n", type=int, required=True, help="vertex count")
    sub.add_argument("--seeds", type=int, default=20,
                     help="number of Monte Carlo seeds")
    sub.add_argument("--seed-base", type=int, default=0,
                     help="first seed value")
    sub.add_argument("--jobs", type=int, default=1,
                     help="worker threads across seeds")
    if grid:
        sub.add_argument("--c", type=float, default=None,
                         help="single c value (overrides the grid)")
        sub.add_argument("--c-min", type=float, default=None)
        sub.add_argument("--c-max", type=float, default=None)
        sub.add_argument("--c-steps", type=int, default=11)


def _add_output(sub) -> None:
    sub.add_argument("--out", default=None, help="output path (default stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simphase",
        description="Phase transitions of random d-dimensional complexes")
    parser.add_argument("--config", default=None,
                        help="flat key=value file providing option defaults")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("table", help="threshold table per dimension")
    p.add_argument("--d", type=_int_list, default=[2, 3, 4, 5, 10, 100, 1000],
                   help="comma-separated dimensions")
    _add_output(p)
    p.set_defaults(func=_cmd_table)

    p = subs.add_parser("betti-curve", help="Betti densities along a c grid")
    p.add_argument("--d", type=int, default=2)
    _add_common(p)
    _add_output(p)
    p.set_defaults(func=_cmd_betti_curve)

    p = subs.add_parser("shadow-curve", help="shadow density along a c grid")
    p.add_argument("--d", type=int, default=2)
    _add_common(p)
    _add_output(p)
    p.set_defaults(func=_cmd_shadow_curve)

    p = subs.add_parser("collapse-sweep",
                        help="empty-core fraction along a c grid")
    p.add_argument("--d", type=int, default=2)
    _add_common(p)
    _add_output(p)
    p.set_defaults(func=_cmd_collapse_sweep)

    p = subs.add_parser("tree-spectral",
                        help="kernel mass vs truncation depth")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--depths", type=_int_list, default=[2, 4, 6, 8])
    p.add_argument("--trees", type=int, default=200)
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--pool", type=int, default=None,
                   help="add a population-dynamics row with this pool size")
    p.add_argument("--sweeps", type=int, default=300)
    p.add_argument("--init", choices=("ones", "zeros"), default="zeros")
    _add_output(p)
    p.set_defaults(func=_cmd_tree_spectral)

    p = subs.add_parser("lwc-check",
                        help="neighborhood law vs the Poisson d-tree law")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--radius", type=int, choices=(1, 2), default=1)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seeds", type=int, default=10,
                   help="number of sampled complexes")
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_lwc_check)

    p = subs.add_parser("hypertree", help="grow one random hypertree")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None,
                   help="write the complex in line format")
    p.set_defaults(func=_cmd_hypertree)

    return parser


def read_config(path: str) -> dict[str, str]:
    """Flat key=value lines; '#' starts a comment; keys match long flags."""
    pairs: dict[str, str] = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {raw.rstrip()!r}")
            key, value = line.split("=", 1)
            pairs[key.strip().replace("_", "-")] = value.strip()
    return pairs


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Inject config pairs as flags ahead of explicit ones (which then win)."""
    if "--config" not in argv and not any(
            a.startswith("--config=") for a in argv):
        return argv
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config", default=None)
    known, _ = probe.parse_known_args(argv)
    if known.config is None:
        return argv
    pairs = read_config(known.config)
    # only inject options the chosen subcommand understands
    subactions = next(a for a in parser._actions
                      if isinstance(a, argparse._SubParsersAction))
    command = next((a for a in argv if a in subactions.choices), None)
    if command is None:
        return argv
    sub = subactions.choices[command]
    valid = set(sub._option_string_actions)
    injected: list[str] = []
    for key, value in pairs.items():
        flag = f"--{key}"
        if flag in valid:
            injected.extend([flag, value])
    pos = argv.index(command) + 1
    return argv[:pos] + injected + argv[pos:]


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except _USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
