"""Soft and hard precision/recall/F-score for multilabel soft labels.

Predictions and references are membership grades in [0, 1]. Treating each
class column as a fuzzy set over the items, intersection uses the minimum
(the idempotent T-norm) and cardinality is the sum of grades, so

    precision = sum_i min(pred_i, ref_i) / sum_i pred_i
    recall    = sum_i min(pred_i, ref_i) / sum_i ref_i
    f_score   = 2 * sum_i min(pred_i, ref_i) / sum_i (pred_i + ref_i)

On binary inputs these coincide exactly with the classical TP-count
metrics. The F-score is always computed from the sums directly, never as
the harmonic mean of the (possibly degenerate) P and R quotients.

Degenerate denominators are resolved explicitly and flagged:

    pred empty, ref empty  ->  P = R = F = 1   (both_empty)
    pred empty, ref not    ->  P = R = F = 0   (empty_prediction)
    ref empty, pred not    ->  P = R = F = 0   (empty_reference)

Accumulation order: every sum runs strictly left to right, column sums over
items in row order, pooled (micro) sums class by class in subset order.
Results are therefore bit-identical across runs and thread counts.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import numpy as np

from .errors import AlignmentError, NoScorableClassesError, ValidationError
from .matrix import ClassSubset, SoftLabelMatrix, resolve_classes
from .validation import check_binary, check_same_length, check_threshold, check_unit_interval

#: Threshold used to binarize soft *references* before hard-metric scoring.
REF_BINARIZATION_TAU = 0.5


class Degeneracy(enum.Enum):
    """Which side of a precision/recall computation had zero total mass."""

    NONE = "none"
    EMPTY_PREDICTION = "empty_prediction"
    EMPTY_REFERENCE = "empty_reference"
    BOTH_EMPTY = "both_empty"


@dataclass(frozen=True)
class PRFTriple:
    """Precision, recall and F-score with an explicit degenerate-case flag."""

    precision: float
    recall: float
    f_score: float
    degenerate: Degeneracy = Degeneracy.NONE

    def __iter__(self):
        return iter((self.precision, self.recall, self.f_score))


@dataclass(frozen=True)
class ScoreBlock:
    """Per-class triples plus their micro and macro aggregates for one mode."""

    per_class: dict[str, PRFTriple]
    micro: PRFTriple
    macro_f: float


def _seq_sum(values: np.ndarray) -> float:
    # cumsum accumulates strictly left to right; np.sum's pairwise order would
    # break the documented accumulation contract
    if values.size == 0:
        return 0.0
    return float(np.cumsum(values)[-1])


def _prf_from_sums(inter: float, pred_sum: float, ref_sum: float) -> PRFTriple:
    if pred_sum == 0.0 and ref_sum == 0.0:
        return PRFTriple(1.0, 1.0, 1.0, Degeneracy.BOTH_EMPTY)
    if pred_sum == 0.0:
        return PRFTriple(0.0, 0.0, 0.0, Degeneracy.EMPTY_PREDICTION)
    if ref_sum == 0.0:
        return PRFTriple(0.0, 0.0, 0.0, Degeneracy.EMPTY_REFERENCE)
    return PRFTriple(
        inter / pred_sum,
        inter / ref_sum,
        2.0 * inter / (pred_sum + ref_sum),
        Degeneracy.NONE,
    )


def intersection_mass(pred, ref) -> float:
    """Fuzzy intersection cardinality ``sum_i min(pred_i, ref_i)``.

    Bounded above by both ``sum(pred)`` and ``sum(ref)``.
    """
    pred = check_unit_interval(pred, "pred", ndim=1)
    ref = check_unit_interval(ref, "ref", ndim=1)
    check_same_length(pred, ref)
    return _seq_sum(np.minimum(pred, ref))


def soft_prf(pred, ref) -> PRFTriple:
    """Soft precision/recall/F for one class column of membership grades."""
    pred = check_unit_interval(pred, "pred", ndim=1)
    ref = check_unit_interval(ref, "ref", ndim=1)
    check_same_length(pred, ref)
    inter = _seq_sum(np.minimum(pred, ref))
    return _prf_from_sums(inter, _seq_sum(pred), _seq_sum(ref))


def binarize(values, tau: float) -> np.ndarray:
    """Binarize with the strict rule ``value > tau`` (a value equal to the
    threshold stays negative)."""
    values = check_unit_interval(values, "values")
    tau = check_threshold(tau)
    return (values > tau).astype(np.float64)


def hard_prf(pred, ref_binary, tau: float = 0.5) -> PRFTriple:
    """Classical thresholded precision/recall/F against a binary reference.

    Equivalent to ``soft_prf(binarize(pred, tau), ref_binary)``, i.e. the
    intersection mass reduces to the true-positive count.
    """
    pred = check_unit_interval(pred, "pred", ndim=1)
    ref_binary = check_binary(ref_binary, "ref", ndim=1)
    check_same_length(pred, ref_binary)
    return soft_prf(binarize(pred, tau), ref_binary)


def _resolve_tau(threshold, class_name: str) -> float:
    if isinstance(threshold, Mapping):
        mapping = threshold
    elif hasattr(threshold, "thresholds"):
        mapping = threshold.thresholds
    else:
        return check_threshold(threshold)
    if class_name not in mapping:
        raise ValidationError(f"no threshold provided for class {class_name!r}")
    return check_threshold(mapping[class_name], name=f"tau[{class_name}]")


def _check_aligned(pred: SoftLabelMatrix, ref: SoftLabelMatrix) -> None:
    if pred.item_ids != ref.item_ids:
        raise AlignmentError("matrices are not item-aligned; call align() first")


def _column_sums(
    pred: SoftLabelMatrix, ref: SoftLabelMatrix, name: str, mode: str, threshold
) -> tuple[float, float, float]:
    p = pred.column(name)
    r = ref.column(name)
    if mode == "hard":
        # references are binarized at the fixed 0.5 before any hard scoring;
        # the tunable threshold applies to predictions only
        r = binarize(r, REF_BINARIZATION_TAU)
        p = binarize(p, _resolve_tau(threshold, name))
    elif mode != "soft":
        raise ValidationError(f"unknown mode {mode!r}; expected 'soft' or 'hard'")
    return _seq_sum(np.minimum(p, r)), _seq_sum(p), _seq_sum(r)


def per_class_scores(
    pred: SoftLabelMatrix,
    ref: SoftLabelMatrix,
    classes: Iterable[str] | ClassSubset | None = None,
    mode: str = "soft",
    threshold=0.5,
) -> dict[str, PRFTriple]:
    """Column-wise P/R/F triples over the evaluated class subset.

    ``mode`` is ``"soft"`` or ``"hard"``; in hard mode ``threshold`` is
    either one float applied to every class or a per-class mapping
    (e.g. a :class:`~softeval.thresholds.ThresholdVector`).
    """
    _check_aligned(pred, ref)
    names = resolve_classes(pred, ref, classes)
    out: dict[str, PRFTriple] = {}
    for name in names:
        out[name] = _prf_from_sums(*_column_sums(pred, ref, name, mode, threshold))
    return out


def micro_prf(
    pred: SoftLabelMatrix,
    ref: SoftLabelMatrix,
    classes: Iterable[str] | ClassSubset | None = None,
    mode: str = "soft",
    threshold=0.5,
) -> PRFTriple:
    """P/R/F over the pooled (item, class) cells of the subset."""
    _check_aligned(pred, ref)
    names = resolve_classes(pred, ref, classes)
    inter = pred_sum = ref_sum = 0.0
    for name in names:
        i, p, r = _column_sums(pred, ref, name, mode, threshold)
        inter += i
        pred_sum += p
        ref_sum += r
    return _prf_from_sums(inter, pred_sum, ref_sum)


def macro_f(class_scores: Mapping[str, PRFTriple]) -> float:
    """Unweighted mean F over classes, skipping both-empty degenerate ones.

    Classes where prediction and reference columns are both all-zero carry
    no information and are excluded; an empty reference with a non-empty
    prediction still counts (as F = 0), penalizing hallucinated classes.
    """
    if not class_scores:
        raise NoScorableClassesError("macro F of an empty class-score map")
    total = 0.0
    count = 0
    for triple in class_scores.values():
        if triple.degenerate is Degeneracy.BOTH_EMPTY:
            continue
        total += triple.f_score
        count += 1
    if count == 0:
        raise NoScorableClassesError("no scorable classes after the degenerate-class rule")
    return total / count


def score_block(
    pred: SoftLabelMatrix,
    ref: SoftLabelMatrix,
    classes: Iterable[str] | ClassSubset | None = None,
    mode: str = "soft",
    threshold=0.5,
) -> ScoreBlock:
    """Per-class, micro and macro scores for one mode in a single call."""
    per_class = per_class_scores(pred, ref, classes, mode=mode, threshold=threshold)
    micro = micro_prf(pred, ref, classes, mode=mode, threshold=threshold)
    return ScoreBlock(per_class=per_class, micro=micro, macro_f=macro_f(per_class))
