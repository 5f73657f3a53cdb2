"""Command-line interface: point evaluations, sweeps, figures, validation.

Every subcommand also accepts ``--config FILE`` with ``key = value`` lines
(keys named like the long flags); explicit flags win over the file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import _version
from .spin_models import critical_point
from .sweeps import (
    ENGINES,
    MODELS,
    SWEEP_VARIABLES,
    SweepSpec,
    evaluate_point,
    reproduce_figure,
    run_sweep,
    validate,
    write_sweep_csv,
)

_PARAM_FLAGS = (
    ("--jx", "jx"), ("--jy", "jy"), ("--jz", "jz"), ("--ha", "ha"), ("--hb", "hb"),
    ("--lambda", "lam"), ("--zeta", "zeta"),
    ("--bigj", "bigj"), ("--delta", "delta"), ("--field", "field"),
)


def _add_model_args(parser):
    parser.add_argument("--model", choices=MODELS, required=True)
    for flag, dest in _PARAM_FLAGS:
        parser.add_argument(flag, dest=dest, type=float, default=None)
    parser.add_argument("--kt", type=float, default=None, help="temperature kT (k=1)")


def _add_common(parser):
    parser.add_argument("--config", type=Path, default=None,
                        help="key=value file supplying flag defaults")
    parser.add_argument("--engine", choices=ENGINES, default="closed")
    parser.add_argument("--seed", type=int, default=20260810)


def build_parser():
    """Returns (parser, {command: subparser}) for default lookups."""
    parser = argparse.ArgumentParser(
        prog="thermotele",
        description="Teleportation efficiencies through thermal two-qubit "
                    "Heisenberg channels",
    )
    parser.add_argument("--version", action="version", version=_version.__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_point = sub.add_parser("point", help="evaluate one parameter point")
    _add_model_args(p_point)
    _add_common(p_point)
    p_point.add_argument("--out", type=Path, default=None, help="write CSV here")

    p_sweep = sub.add_parser("sweep", help="sweep one variable")
    _add_model_args(p_sweep)
    _add_common(p_sweep)
    p_sweep.add_argument("--var", choices=SWEEP_VARIABLES, required=True)
    p_sweep.add_argument("--from", dest="start", type=float, required=True)
    p_sweep.add_argument("--to", dest="stop", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--out", type=Path, default=None, help="write CSV here")

    p_fig = sub.add_parser("figure", help="regenerate a figure dataset")
    p_fig.add_argument("id", choices=[f"fig{i}" for i in range(2, 8)])
    _add_common(p_fig)
    p_fig.add_argument("--steps", type=int, default=60)
    p_fig.add_argument("--out", type=Path, default=Path("figures"))

    p_val = sub.add_parser("validate", help="run the acceptance battery")
    _add_common(p_val)
    p_val.add_argument("--cases", type=int, default=200)
    p_val.add_argument("--out", type=Path, default=None, help="JSON report path")

    p_crit = sub.add_parser("critical", help="locate a ground-level crossing")
    p_crit.add_argument("model", choices=["xy", "xxx_field", "xxz_field"])
    p_crit.add_argument("--field", type=float, default=None)
    p_crit.add_argument("--bigj", type=float, default=None)

    commands = {
        "point": p_point, "sweep": p_sweep, "figure": p_fig,
        "validate": p_val, "critical": p_crit,
    }
    return parser, commands


def _apply_config(args, parser_defaults):
    """Fill flag values from the config file wherever the flag kept its
    parser default (explicit flags therefore win)."""
    if getattr(args, "config", None) is None:
        return args
    values = {}
    for raw in args.config.read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SystemExit(f"config line not of form key=value: {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_").replace("lambda", "lam")] = value
    for key, value in values.items():
        if not hasattr(args, key):
            raise SystemExit(f"unknown config key {key!r}")
        if getattr(args, key) == parser_defaults.get(key):
            current = getattr(args, key)
            caster = type(current) if current is not None else float
            if isinstance(current, bool):
                caster = lambda v: v.lower() in ("1", "true", "yes")
            setattr(args, key, caster(value) if caster is not Path else Path(value))
    return args


def _fixed_from_args(args) -> dict:
    fixed = {}
    for _, dest in _PARAM_FLAGS:
        value = getattr(args, dest)
        if value is not None:
            fixed[dest] = value
    if args.kt is not None:
        fixed["kt"] = args.kt
    return fixed


def _cmd_point(args) -> int:
    if args.kt is None:
        raise SystemExit("point requires --kt")
    fixed = _fixed_from_args(args)
    record = evaluate_point(args.model, fixed, fixed["kt"], engine=args.engine)
    payload = {
        "model": record.model, "kt": record.kt, "engine": record.engine,
        "params": vars(record.params) | record.native,
        "det_value": record.det_value, "det_phi": record.det_phi,
        "det_set": record.det_set,
        "prob_value": record.prob_value, "prob_phi": record.prob_phi,
        "prob_set": record.prob_set, "prob_pair": record.prob_pair,
        "success_rate": record.success_rate,
        "above_classical_det": record.above_classical_det,
        "above_classical_prob": record.above_classical_prob,
        "engine_disagreement": record.engine_disagreement,
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    if args.out:
        write_sweep_csv([record], args.out)
    return 0


def _cmd_sweep(args) -> int:
    spec = SweepSpec(
        model=args.model, fixed=_fixed_from_args(args), swept=args.var,
        start=args.start, stop=args.stop, steps=args.steps, engine=args.engine,
    )
    records = run_sweep(spec)
    if args.out:
        write_sweep_csv(records, args.out)
        print(f"wrote {len(records)} records to {args.out}")
    else:
        for r in records:
            print(
                f"{r.kt if spec.swept == 'kt' else r.native[spec.swept]:.6g}"
                f"  det={r.det_value:.9f}  prob={r.prob_value:.9f}"
                f"  success={r.success_rate:.6f}"
            )
    return 0


def _cmd_figure(args) -> int:
    written = reproduce_figure(args.id, args.out, engine=args.engine, steps=args.steps)
    for path in written:
        print(path)
    return 0


def _cmd_validate(args) -> int:
    status, report = validate(seed=args.seed, cases=args.cases, report_path=args.out)
    for check in report["checks"]:
        mark = "PASS" if check["passed"] else "FAIL"
        print(f"{mark}  {check['name']}  (max_error={check['max_error']:.3e})")
    print(f"reconciliation: {report['reconciliation']['mapping']}")
    if args.out:
        print(f"report written to {args.out}")
    return status


def _cmd_critical(args) -> int:
    value = critical_point(args.model, field_h=args.field, exchange_j=args.bigj)
    print(f"{value:.12f}")
    return 0


def main(argv=None) -> int:
    parser, commands = build_parser()
    args = parser.parse_args(argv)
    defaults = {
        action.dest: action.default for action in commands[args.command]._actions
    }
    args = _apply_config(args, defaults)
    handler = {
        "point": _cmd_point,
        "sweep": _cmd_sweep,
        "figure": _cmd_figure,
        "validate": _cmd_validate,
        "critical": _cmd_critical,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
