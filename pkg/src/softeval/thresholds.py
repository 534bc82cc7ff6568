"""Per-class decision thresholds that maximize hard F-score.

For one class the candidate set is the midpoints of consecutive distinct
sorted prediction values plus the sentinels 0.0 and 1.0. Midpoints are the
only places the strict ``value > tau`` binarization can change, 0.0 keeps
every positive prediction, and 1.0 empties the prediction set. Ties are
broken toward the smallest threshold. A class whose binarized reference
has no positive items cannot be scored (F is 0 for every threshold); it
gets the sentinel threshold 1.0 and is flagged as unscorable.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import ValidationError
from .matrix import ClassSubset, SoftLabelMatrix, resolve_classes
from .metrics import (
    Degeneracy,
    ScoreBlock,
    _check_aligned,
    _prf_from_sums,
    _seq_sum,
    score_block,
)
from .validation import as_float_array, check_binary, check_same_length, check_unit_interval

#: Threshold assigned to classes with no positive reference items.
UNSCORABLE_TAU = 1.0


@dataclass(frozen=True)
class ThresholdVector:
    """Per-class thresholds plus the names of classes that could not be tuned.

    Unscorable classes are still present in ``thresholds`` (with the
    sentinel value 1.0) so downstream evaluation never hits a missing key.
    """

    thresholds: dict[str, float]
    unscorable: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        for name, tau in self.thresholds.items():
            if not np.isfinite(tau) or not 0.0 <= tau <= 1.0:
                raise ValidationError(f"threshold for class {name!r} must be in [0, 1], got {tau}")
        missing = [name for name in self.unscorable if name not in self.thresholds]
        if missing:
            raise ValidationError(f"unscorable classes missing from thresholds: {missing}")

    @property
    def class_names(self) -> tuple[str, ...]:
        return tuple(self.thresholds)

    def __getitem__(self, name: str) -> float:
        return self.thresholds[name]


def threshold_candidates(values) -> np.ndarray:
    """Ascending candidate thresholds for one class's prediction values."""
    values = check_unit_interval(values, "values")
    if values.size == 0:
        return np.array([0.0, 1.0])
    uniq = np.unique(values)
    mids = (uniq[:-1] + uniq[1:]) / 2.0
    return np.concatenate(([0.0], mids, [1.0]))


def best_threshold(values, truth) -> tuple[float, float]:
    """Best (threshold, F-score) for one class; truth must contain a positive.

    Scans every candidate; among equal F-scores the smallest threshold wins.
    """
    values = check_unit_interval(values, "values")
    truth = check_binary(truth, "truth")
    check_same_length(values, truth)
    positives = float(np.cumsum(truth)[-1]) if truth.size else 0.0
    if positives == 0.0:
        raise ValidationError("class has no positive reference items; no threshold is scorable")

    cands = threshold_candidates(values)
    order = np.argsort(-values, kind="stable")
    tp_prefix = np.concatenate(([0.0], np.cumsum(truth[order])))
    asc = np.sort(values)
    kept = values.size - np.searchsorted(asc, cands, side="right")
    f_scores = 2.0 * tp_prefix[kept] / (kept + positives)
    best = int(np.argmax(f_scores))
    return float(cands[best]), float(f_scores[best])


def optimal_thresholds(
    pred: SoftLabelMatrix,
    ref_binary: SoftLabelMatrix,
    classes: Iterable[str] | ClassSubset | None = None,
) -> ThresholdVector:
    """Per-class F-maximizing thresholds against a binary reference."""
    _check_aligned(pred, ref_binary)
    names = resolve_classes(pred, ref_binary, classes)
    thresholds: dict[str, float] = {}
    unscorable: list[str] = []
    for name in names:
        truth = check_binary(ref_binary.column(name), f"reference class {name!r}")
        if not np.any(truth > 0.0):
            thresholds[name] = UNSCORABLE_TAU
            unscorable.append(name)
            continue
        tau, _ = best_threshold(pred.column(name), truth)
        thresholds[name] = tau
    return ThresholdVector(thresholds=thresholds, unscorable=tuple(unscorable))


def evaluate_with_thresholds(
    pred: SoftLabelMatrix,
    ref: SoftLabelMatrix,
    thresholds: ThresholdVector | Mapping[str, float],
    classes: Iterable[str] | ClassSubset | None = None,
) -> ScoreBlock:
    """Hard scores with a per-class threshold for each evaluated class."""
    return score_block(pred, ref, classes, mode="hard", threshold=thresholds)


class ThresholdOptimizer(BaseEstimator, TransformerMixin):
    """Learn per-column binarization thresholds that maximize hard F-score.

    ``fit`` takes unit-interval scores ``X`` of shape (n_samples, n_classes)
    and a binary indicator ``y`` of the same shape. ``transform`` binarizes
    new scores with the learned thresholds (strictly greater than). Columns
    whose reference contains no positive sample get the sentinel threshold
    1.0 and are marked in ``unscorable_``.
    """

    def fit(self, X, y):
        X = as_float_array(X, "X", ndim=2)
        X = check_unit_interval(X, "X")
        y = as_float_array(y, "y", ndim=2)
        y = check_binary(y, "y")
        if X.shape != y.shape:
            raise ValidationError(f"X and y shapes differ: {X.shape} vs {y.shape}")
        n_classes = X.shape[1]
        thresholds = np.empty(n_classes)
        best_scores = np.full(n_classes, np.nan)
        unscorable = np.zeros(n_classes, dtype=bool)
        for j in range(n_classes):
            if not np.any(y[:, j] > 0.0):
                thresholds[j] = UNSCORABLE_TAU
                unscorable[j] = True
                continue
            thresholds[j], best_scores[j] = best_threshold(X[:, j], y[:, j])
        self.n_features_in_ = n_classes
        self.thresholds_ = thresholds
        self.best_scores_ = best_scores
        self.unscorable_ = unscorable
        return self

    def _check_fitted_input(self, X) -> np.ndarray:
        if not hasattr(self, "thresholds_"):
            raise ValidationError("ThresholdOptimizer is not fitted; call fit first")
        X = as_float_array(X, "X", ndim=2)
        X = check_unit_interval(X, "X")
        if X.shape[1] != self.n_features_in_:
            raise ValidationError(
                f"X has {X.shape[1]} columns, expected {self.n_features_in_}"
            )
        return X

    def transform(self, X) -> np.ndarray:
        X = self._check_fitted_input(X)
        return (X > self.thresholds_).astype(np.float64)

    def predict(self, X) -> np.ndarray:
        return self.transform(X)

    def score(self, X, y) -> float:
        """Macro F-score of the binarized ``X`` against binary ``y``.

        Columns where both sides are empty are excluded, matching the
        macro rule used elsewhere.
        """
        X = self._check_fitted_input(X)
        y = as_float_array(y, "y", ndim=2)
        y = check_binary(y, "y")
        if X.shape != y.shape:
            raise ValidationError(f"X and y shapes differ: {X.shape} vs {y.shape}")
        hard = (X > self.thresholds_).astype(np.float64)
        f_values = []
        for j in range(X.shape[1]):
            inter = _seq_sum(np.minimum(hard[:, j], y[:, j]))
            triple = _prf_from_sums(inter, _seq_sum(hard[:, j]), _seq_sum(y[:, j]))
            if triple.degenerate is not Degeneracy.BOTH_EMPTY:
                f_values.append(triple.f_score)
        if not f_values:
            raise ValidationError("no scorable columns: every column is empty on both sides")
        return float(np.cumsum(f_values)[-1] / len(f_values))
