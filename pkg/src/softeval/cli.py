"""Command-line interface.

Subcommands: ``evaluate`` (score prediction files against a reference),
``thresholds`` (tune per-class thresholds and write them as JSON),
``baseline`` (generate random prediction files from training data), and
``sweep`` (emit plot-ready curve CSVs for the epsilon and beta-r
experiments).

Option precedence is flags > environment > built-in defaults; environment
variables use the ``SOFTEVAL_`` prefix (THRESHOLD, MODES, SEED, FORMAT).
``-`` stands for stdin/stdout wherever a path is taken.

Exit codes: 0 success, 2 configuration error, 3 validation or parse
error, 4 alignment error.
"""

from __future__ import annotations

import argparse
import glob as _glob
import os
import sys

from .baselines import (
    constant_output,
    fit_betas,
    sample_betas,
    sample_rows,
    seeded_rng,
    shuffle_assignment,
    symmetric_beta_output,
)
from .dataio import (
    _write_handle,
    read_matrix,
    read_thresholds,
    write_matrix,
    write_report,
    write_thresholds,
)
from .errors import AlignmentError, ConfigError, SoftEvalError, ValidationError
from .evaluation import (
    MODES,
    evaluate_items_jackknife,
    evaluate_matrices,
    evaluate_runs,
    normalize_mode,
)
from .matrix import align
from .metrics import REF_BINARIZATION_TAU
from .sweep import (
    DEFAULT_EPSILON_START,
    DEFAULT_EPSILON_STEP,
    DEFAULT_EPSILON_STOP,
    DEFAULT_R_GRID,
    SweepConfig,
    beta_r_sweep,
    decimal_grid,
    epsilon_sweep,
    make_synthetic_reference,
)
from .thresholds import optimal_thresholds

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_ALIGNMENT = 4

ENV_PREFIX = "SOFTEVAL_"


def _env_str(env, key: str, fallback: str) -> str:
    return env.get(ENV_PREFIX + key, fallback)


def _env_float(env, key: str, fallback: float) -> float:
    raw = env.get(ENV_PREFIX + key)
    if raw is None:
        return fallback
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{ENV_PREFIX}{key} is not a number: {raw!r}") from None


def _env_int(env, key: str, fallback: int) -> int:
    raw = env.get(ENV_PREFIX + key)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{ENV_PREFIX}{key} is not an integer: {raw!r}") from None


def _parse_classes(value: str | None) -> list[str] | None:
    """Comma-separated class names, or @file with one name per line."""
    if value is None:
        return None
    if value.startswith("@"):
        path = value[1:]
        try:
            with open(path, "r", encoding="utf-8") as fh:
                names = [line.strip() for line in fh]
        except OSError as exc:
            raise ConfigError(f"cannot read class list {path}: {exc}") from exc
        names = [n for n in names if n]
    else:
        names = [n.strip() for n in value.split(",") if n.strip()]
    if not names:
        raise ConfigError(f"class list {value!r} is empty")
    return names


def _parse_grid_spec(value: str) -> tuple[float, ...]:
    """START:STOP:STEP in decimal arithmetic, or a comma-separated list."""
    if ":" in value:
        parts = value.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid spec must be START:STOP:STEP, got {value!r}")
        return decimal_grid(*parts)
    try:
        return tuple(float(v) for v in value.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"bad grid value in {value!r}") from None


def _write_bytes(data: bytes, path: str) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        try:
            with open(path, "wb") as fh:
                fh.write(data)
        except OSError as exc:
            raise ValidationError(f"cannot write {path}: {exc}") from exc


def _cmd_evaluate(args) -> None:
    if (args.pred is None) == (args.runs is None):
        raise ConfigError("exactly one of --pred or --runs is required")
    if (args.runs is None) != (not args.jackknife):
        raise ConfigError("--runs and --jackknife must be used together")
    if args.jackknife_items and args.runs is not None:
        raise ConfigError("--jackknife-items applies to a single --pred input")
    classes = _parse_classes(args.classes)
    modes = tuple(normalize_mode(m) for m in args.modes.split(",") if m.strip())
    if not modes:
        raise ConfigError(f"--modes {args.modes!r} selects nothing")
    thresholds = None
    inputs: dict = {"ref": args.ref}
    if args.thresholds is not None:
        thresholds = read_thresholds(args.thresholds)
        inputs["thresholds"] = args.thresholds
    ref = read_matrix(args.ref)

    if args.runs is not None:
        files = sorted(_glob.glob(args.runs))
        if not files:
            raise ConfigError(f"--runs {args.runs!r} matched no files")
        inputs["runs"] = files
        preds = [read_matrix(f) for f in files]
        report = evaluate_runs(
            preds,
            ref,
            run_names=files,
            classes=classes,
            modes=modes,
            threshold=args.threshold,
            thresholds=thresholds,
            inputs=inputs,
        )
    else:
        inputs["pred"] = args.pred
        pred = read_matrix(args.pred)
        evaluate = evaluate_items_jackknife if args.jackknife_items else evaluate_matrices
        report = evaluate(
            pred,
            ref,
            classes=classes,
            modes=modes,
            threshold=args.threshold,
            thresholds=thresholds,
            inputs=inputs,
        )
    _write_bytes(write_report(report, format=args.format), args.output)


def _cmd_thresholds(args) -> None:
    classes = _parse_classes(args.classes)
    pred = read_matrix(args.tune_on)
    ref = read_matrix(args.ref)
    aligned_pred, aligned_ref = align(pred, ref, classes)
    vector = optimal_thresholds(aligned_pred, aligned_ref.binarized(REF_BINARIZATION_TAU))
    write_thresholds(vector, args.output)


def _cmd_baseline(args) -> None:
    fitted_methods = {"betas", "shuffled-betas", "rows"}
    if args.method in fitted_methods and args.training is None:
        raise ConfigError(f"--method {args.method} requires --training")

    template = read_matrix(args.items_from) if args.items_from is not None else None
    training = read_matrix(args.training) if args.training is not None else None

    if args.n_items is not None:
        n_items = args.n_items
    elif template is not None:
        n_items = template.n_items
    elif training is not None:
        n_items = training.n_items
    else:
        raise ConfigError("--n-items is required without --training or --items-from")
    item_ids = None
    if template is not None:
        if n_items != template.n_items:
            raise ConfigError(
                f"--n-items {n_items} conflicts with --items-from ({template.n_items} items)"
            )
        item_ids = template.item_ids

    classes = _parse_classes(args.classes)
    if classes is None:
        if training is not None:
            classes = training.class_names
        elif template is not None:
            classes = template.class_names
        else:
            raise ConfigError("--classes is required without --training or --items-from")

    rng = seeded_rng(args.seed)
    if args.method == "betas":
        params = fit_betas(training, classes)
        out = sample_betas(params, n_items, rng, item_ids)
    elif args.method == "shuffled-betas":
        params = shuffle_assignment(fit_betas(training, classes), rng)
        out = sample_betas(params, n_items, rng, item_ids)
    elif args.method == "rows":
        out = sample_rows(training.subset(classes), n_items, rng, item_ids)
    elif args.method == "symmetric-r":
        out = symmetric_beta_output(args.r, n_items, classes, rng, item_ids)
    else:
        out = constant_output(args.value, n_items, classes, item_ids)
    write_matrix(out, args.output)


def _sweep_rows(args) -> tuple[tuple[str, ...], list[tuple[float, ...]]]:
    if args.mode == "epsilon":
        grid = _parse_grid_spec(args.grid)
        config = SweepConfig(mode="epsilon", grid=grid, anchor=args.anchor, base=args.base)
        points = epsilon_sweep(config.grid, anchor=config.anchor, base=config.base)
        header = ("x", "soft_F", "hard_F", "kld")
        rows = [(p.epsilon, p.soft_f, p.hard_f, p.kld) for p in points]
        return header, rows
    grid = _parse_grid_spec(args.r_grid)
    config = SweepConfig(mode="beta_r", grid=grid, n_items=args.n_items, seed=args.seed)
    if args.ref is not None:
        ref = read_matrix(args.ref)
    else:
        ref = make_synthetic_reference(config.n_items, n_classes=args.n_classes, seed=config.seed)
    points = beta_r_sweep(config.grid, ref, seed=config.seed, constant=args.constant)
    header = ("x", "soft_F", "hard_F", "hard_F_ot", "kld")
    rows = [
        (p.parameter, p.soft_f_micro, p.hard_f_micro, p.ot_f_micro, p.kld) for p in points
    ]
    return header, rows


def _cmd_sweep(args) -> None:
    header, rows = _sweep_rows(args)
    fh, close = _write_handle(args.output)
    try:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    finally:
        if close:
            fh.close()


def build_parser(env=None) -> argparse.ArgumentParser:
    env = os.environ if env is None else env
    parser = argparse.ArgumentParser(
        prog="softeval",
        description="Evaluate multilabel classifier outputs against soft reference labels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser(
        "evaluate", help="score a prediction file (or runs of them) against a reference"
    )
    p_eval.add_argument("--pred", help="prediction matrix CSV ('-' for stdin)")
    p_eval.add_argument("--ref", required=True, help="reference matrix CSV")
    p_eval.add_argument(
        "--classes", help="comma-separated class subset, or @file with one name per line"
    )
    p_eval.add_argument(
        "--modes",
        default=_env_str(env, "MODES", ",".join(MODES)),
        help=f"comma-separated subset of {{{','.join(MODES)}}} (default: all)",
    )
    p_eval.add_argument(
        "--threshold",
        type=float,
        default=_env_float(env, "THRESHOLD", 0.5),
        help="fixed binarization threshold for the hard mode (default 0.5)",
    )
    p_eval.add_argument(
        "--thresholds", help="JSON file of per-class thresholds for the hard_ot mode"
    )
    p_eval.add_argument("--runs", help="glob of prediction CSVs to jackknife")
    p_eval.add_argument(
        "--jackknife",
        action="store_true",
        help="aggregate --runs files into jackknife confidence intervals",
    )
    p_eval.add_argument(
        "--jackknife-items",
        action="store_true",
        help="add leave-one-item-out confidence intervals to a single --pred report",
    )
    p_eval.add_argument(
        "--format",
        choices=("json", "csv"),
        default=_env_str(env, "FORMAT", "json"),
        help="report format (default json)",
    )
    p_eval.add_argument("--output", "-o", default="-", help="output path (default stdout)")
    p_eval.set_defaults(handler=_cmd_evaluate)

    p_thr = sub.add_parser(
        "thresholds", help="tune per-class F-maximizing thresholds and write them as JSON"
    )
    p_thr.add_argument("--tune-on", required=True, help="prediction matrix CSV to tune on")
    p_thr.add_argument("--ref", required=True, help="reference matrix CSV")
    p_thr.add_argument(
        "--classes", help="comma-separated class subset, or @file with one name per line"
    )
    p_thr.add_argument("--output", "-o", default="-", help="output path (default stdout)")
    p_thr.set_defaults(handler=_cmd_thresholds)

    p_base = sub.add_parser("baseline", help="generate a random baseline prediction CSV")
    p_base.add_argument(
        "--method",
        required=True,
        choices=("betas", "shuffled-betas", "rows", "symmetric-r", "constant"),
    )
    p_base.add_argument("--training", help="training matrix CSV (for fitted methods)")
    p_base.add_argument(
        "--items-from", help="matrix CSV whose item ids the output should copy"
    )
    p_base.add_argument("--n-items", type=int, help="number of items to generate")
    p_base.add_argument(
        "--classes", help="class names for methods that do not take training data"
    )
    p_base.add_argument("--seed", type=int, default=_env_int(env, "SEED", 0))
    p_base.add_argument("--r", type=float, default=1.0, help="shape for symmetric-r")
    p_base.add_argument("--value", type=float, default=0.5, help="cell value for constant")
    p_base.add_argument("--output", "-o", default="-", help="output path (default stdout)")
    p_base.set_defaults(handler=_cmd_baseline)

    p_sweep = sub.add_parser("sweep", help="emit plot-ready curve CSVs")
    p_sweep.add_argument("--mode", required=True, choices=("epsilon", "beta-r"))
    p_sweep.add_argument(
        "--grid",
        default=f"{DEFAULT_EPSILON_START}:{DEFAULT_EPSILON_STOP}:{DEFAULT_EPSILON_STEP}",
        help="epsilon grid as START:STOP:STEP or comma-separated values; "
        "write --grid=-0.2:0.7:0.01 when START is negative",
    )
    p_sweep.add_argument("--anchor", type=float, default=0.8, help="agreement point value")
    p_sweep.add_argument("--base", type=float, default=0.2, help="perturbed point reference")
    p_sweep.add_argument(
        "--r-grid",
        default=",".join(repr(r) for r in DEFAULT_R_GRID),
        help="comma-separated r values for beta-r mode",
    )
    p_sweep.add_argument("--ref", help="reference matrix CSV for beta-r mode")
    p_sweep.add_argument(
        "--n-items", type=int, default=2000, help="synthetic reference size for beta-r"
    )
    p_sweep.add_argument(
        "--n-classes", type=int, default=5, help="synthetic reference classes for beta-r"
    )
    p_sweep.add_argument("--seed", type=int, default=_env_int(env, "SEED", 0))
    p_sweep.add_argument(
        "--constant", type=float, help="append a constant-output row at this value"
    )
    p_sweep.add_argument("--output", "-o", default="-", help="output path (default stdout)")
    p_sweep.set_defaults(handler=_cmd_sweep)

    return parser


def main(argv=None, env=None) -> int:
    try:
        parser = build_parser(env)
        args = parser.parse_args(argv)
        args.handler(args)
        return EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AlignmentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ALIGNMENT
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SoftEvalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
