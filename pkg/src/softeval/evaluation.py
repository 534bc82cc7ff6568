"""End-to-end evaluation: align inputs, score the requested modes, attach
the mean Bernoulli KL, and optionally jackknife repeated runs into
confidence intervals.

Modes:
    hard     binarize predictions at one fixed threshold (default 0.5)
    hard_ot  binarize predictions at per-class tuned thresholds
    soft     fuzzy-set scores on the raw membership grades

References are always binarized at 0.5 for the hard modes; the tunable
threshold applies to predictions only.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from importlib import metadata as _importlib_metadata

from .dataio import EvalReport, ModeScores, RunSeries
from .errors import ConfigError, ValidationError
from .matrix import ClassSubset, SoftLabelMatrix, align
from .metrics import REF_BINARIZATION_TAU, score_block
from .stats import (
    CONFIDENCE,
    KL_CLIP,
    KL_DIRECTION,
    bernoulli_kld,
    jackknife_from_leave_one_out,
    jackknife_mean,
)
from .thresholds import ThresholdVector, optimal_thresholds

MODES = ("hard", "hard_ot", "soft")

try:
    _VERSION = _importlib_metadata.version("softeval")
except _importlib_metadata.PackageNotFoundError:
    _VERSION = "0+unknown"


def normalize_mode(mode: str) -> str:
    """Accept dash or underscore spellings of a mode name."""
    normalized = mode.strip().replace("-", "_")
    if normalized not in MODES:
        raise ConfigError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
    return normalized


def _mode_scores(
    pred: SoftLabelMatrix,
    ref: SoftLabelMatrix,
    mode: str,
    threshold: float,
    tuned: ThresholdVector | None,
) -> ModeScores:
    if mode == "soft":
        block = score_block(pred, ref, mode="soft")
        return ModeScores(block.per_class, block.micro, block.macro_f)
    if mode == "hard":
        block = score_block(pred, ref, mode="hard", threshold=threshold)
        return ModeScores(block.per_class, block.micro, block.macro_f)
    vector = tuned if tuned is not None else optimal_thresholds(
        pred, ref.binarized(REF_BINARIZATION_TAU)
    )
    block = score_block(pred, ref, mode="hard", threshold=vector)
    return ModeScores(
        block.per_class,
        block.micro,
        block.macro_f,
        thresholds={name: float(t) for name, t in vector.thresholds.items()},
        unscorable=tuple(vector.unscorable),
    )


def build_metadata(
    class_names: Sequence[str],
    modes: Sequence[str],
    threshold: float,
    thresholds_source: str | None,
    inputs: dict | None = None,
    seed: int | None = None,
) -> dict:
    """Report metadata with a fixed key order, for byte-stable output."""
    return {
        "software": f"softeval {_VERSION}",
        "inputs": dict(inputs or {}),
        "classes": list(class_names),
        "modes": list(modes),
        "threshold": float(threshold),
        "ref_binarization_threshold": REF_BINARIZATION_TAU,
        "thresholds_source": thresholds_source,
        "kl_direction": KL_DIRECTION,
        "kl_clip": KL_CLIP,
        "confidence": CONFIDENCE,
        "prng": "numpy.random.Generator(PCG64)",
        "seed": seed,
    }


def evaluate_matrices(
    pred: SoftLabelMatrix,
    ref: SoftLabelMatrix,
    classes: Iterable[str] | ClassSubset | None = None,
    modes: Sequence[str] = MODES,
    threshold: float = 0.5,
    thresholds: ThresholdVector | None = None,
    inputs: dict | None = None,
) -> EvalReport:
    """Score one prediction matrix against a reference.

    ``thresholds`` supplies pre-tuned per-class thresholds for the
    ``hard_ot`` mode; when absent they are tuned on the evaluated pair
    itself and recorded in the result.
    """
    modes = tuple(normalize_mode(m) for m in modes)
    if not modes:
        raise ConfigError("at least one mode is required")
    aligned_pred, aligned_ref = align(pred, ref, classes)
    results = {
        mode: _mode_scores(aligned_pred, aligned_ref, mode, threshold, thresholds)
        for mode in modes
    }
    if "hard_ot" not in modes:
        source = None
    elif thresholds is not None:
        source = "provided"
    else:
        source = "tuned on evaluated pair"
    metadata = build_metadata(
        aligned_ref.class_names, modes, threshold, source, inputs=inputs
    )
    return EvalReport(
        metadata=metadata,
        results=results,
        kld=bernoulli_kld(aligned_pred, aligned_ref),
    )


def scalar_scores(report: EvalReport) -> dict[str, float]:
    """Flatten a single-input report to named scalars (micro P/R/F and
    macro F per mode, plus KLD), the series the run jackknife aggregates."""
    if report.results is None:
        raise ValidationError("report has no per-mode results to flatten")
    out: dict[str, float] = {}
    for mode, scores in report.results.items():
        out[f"{mode}.micro.precision"] = scores.micro.precision
        out[f"{mode}.micro.recall"] = scores.micro.recall
        out[f"{mode}.micro.f_score"] = scores.micro.f_score
        out[f"{mode}.macro.f_score"] = scores.macro_f
    if report.kld is not None:
        out["kld"] = report.kld
    return out


def evaluate_items_jackknife(
    pred: SoftLabelMatrix,
    ref: SoftLabelMatrix,
    classes: Iterable[str] | ClassSubset | None = None,
    modes: Sequence[str] = MODES,
    threshold: float = 0.5,
    thresholds: ThresholdVector | None = None,
    inputs: dict | None = None,
) -> EvalReport:
    """Score one matrix pair and jackknife every scalar over items.

    The full-sample point estimates are kept in ``results``; each scalar
    additionally gets a leave-one-item-out jackknife confidence interval.
    Tuned thresholds are re-tuned inside every replicate unless fixed ones
    are provided, so the tuning step's variability is part of the interval.
    """
    aligned_pred, aligned_ref = align(pred, ref, classes)
    n = aligned_pred.n_items
    if n < 2:
        raise ValidationError(f"jackknife over items needs at least 2 items, got {n}")
    full = evaluate_matrices(
        aligned_pred, aligned_ref, None, modes, threshold, thresholds, inputs
    )
    full_scalars = scalar_scores(full)
    loo_scalars = []
    for k in range(n):
        keep = [i for i in range(n) if i != k]
        ids = tuple(aligned_pred.item_ids[i] for i in keep)
        loo_pred = SoftLabelMatrix(ids, aligned_pred.class_names, aligned_pred.values[keep])
        loo_ref = SoftLabelMatrix(ids, aligned_ref.class_names, aligned_ref.values[keep])
        loo_report = evaluate_matrices(loo_pred, loo_ref, None, modes, threshold, thresholds)
        loo_scalars.append(scalar_scores(loo_report))
    intervals = {
        key: jackknife_from_leave_one_out(full_scalars[key], [s[key] for s in loo_scalars])
        for key in full_scalars
    }
    metadata = dict(full.metadata)
    metadata["jackknife"] = "items"
    metadata["n_items"] = n
    return EvalReport(
        metadata=metadata,
        results=full.results,
        kld=full.kld,
        confidence_intervals=intervals,
    )


def evaluate_runs(
    preds: Sequence[SoftLabelMatrix],
    ref: SoftLabelMatrix,
    run_names: Sequence[str] | None = None,
    classes: Iterable[str] | ClassSubset | None = None,
    modes: Sequence[str] = MODES,
    threshold: float = 0.5,
    thresholds: ThresholdVector | None = None,
    inputs: dict | None = None,
) -> EvalReport:
    """Score repeated prediction runs and jackknife each scalar score.

    Every run is evaluated independently against the same reference; the
    per-run scalars become jackknife estimates with 95% confidence
    intervals. Needs at least two runs.
    """
    if len(preds) < 2:
        raise ValidationError(
            f"jackknife over runs needs at least 2 prediction matrices, got {len(preds)}"
        )
    if run_names is not None and len(run_names) != len(preds):
        raise ConfigError(
            f"{len(run_names)} run names for {len(preds)} prediction matrices"
        )
    names = tuple(run_names) if run_names is not None else tuple(
        f"run_{i + 1}" for i in range(len(preds))
    )
    reports = [
        evaluate_matrices(p, ref, classes, modes, threshold, thresholds) for p in preds
    ]
    flat = [scalar_scores(r) for r in reports]
    series = {key: tuple(f[key] for f in flat) for key in flat[0]}
    intervals = {key: jackknife_mean(values) for key, values in series.items()}
    metadata = dict(reports[0].metadata)
    metadata["inputs"] = dict(inputs or {})
    metadata["n_runs"] = len(preds)
    return EvalReport(
        metadata=metadata,
        results=None,
        kld=None,
        confidence_intervals=intervals,
        runs=RunSeries(files=names, scores=series),
    )
