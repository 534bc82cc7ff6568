"""Bernoulli KL divergence and jackknife mean/confidence-interval estimation.

KL direction is fixed as KL(reference || prediction): predictions that put
no mass where the references do are penalized. Each (item, class) cell is
treated as a Bernoulli distribution; both arguments are clipped to
[KL_CLIP, 1 - KL_CLIP] before evaluation so exact 0/1 labels stay finite.
Natural-log units (nats).
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
from scipy import stats as _scipy_stats

from .errors import AlignmentError, ValidationError
from .matrix import ClassSubset, SoftLabelMatrix, resolve_classes
from .validation import as_float_array, check_same_length, check_unit_interval

#: Clip bound applied to both arguments of the per-cell Bernoulli KL.
KL_CLIP = 1e-7

#: Human-readable direction tag recorded in report metadata.
KL_DIRECTION = "KL(reference || prediction)"

CONFIDENCE = 0.95


def student_t_quantile(p: float, df: int) -> float:
    """Quantile of Student's t distribution with ``df`` degrees of freedom."""
    if df < 1:
        raise ValidationError(f"t quantile needs df >= 1, got {df}")
    return float(_scipy_stats.t.ppf(p, df))


def bernoulli_kld_values(pred, ref) -> float:
    """Mean per-cell Bernoulli KL(ref || pred) over two aligned value arrays."""
    pred = check_unit_interval(pred, "pred")
    ref = check_unit_interval(ref, "ref")
    check_same_length(pred, ref)
    if pred.size == 0:
        return 0.0
    q = np.clip(pred, KL_CLIP, 1.0 - KL_CLIP)
    y = np.clip(ref, KL_CLIP, 1.0 - KL_CLIP)
    cells = y * np.log(y / q) + (1.0 - y) * np.log((1.0 - y) / (1.0 - q))
    return float(np.mean(cells))


def bernoulli_kld(
    pred: SoftLabelMatrix,
    ref: SoftLabelMatrix,
    classes: Iterable[str] | ClassSubset | None = None,
) -> float:
    """Mean Bernoulli KL(ref || pred) over the (item, class) cells of the subset."""
    if pred.item_ids != ref.item_ids:
        raise AlignmentError("matrices are not item-aligned; call align() first")
    names = resolve_classes(pred, ref, classes)
    return bernoulli_kld_values(pred.subset(names).values, ref.subset(names).values)


@dataclass(frozen=True)
class JackknifeSummary:
    """Jackknife estimate of a mean with its standard error and 95% CI."""

    estimate: float
    standard_error: float
    ci_low: float
    ci_high: float
    confidence: float
    n: int


def jackknife_from_leave_one_out(full_value: float, loo_values) -> JackknifeSummary:
    """Jackknife summary from a full-sample statistic and its leave-one-out values.

    Pseudo-values are ``n * full - (n - 1) * loo_k``; the estimate is their
    mean, the standard error their sample standard deviation over sqrt(n),
    and the CI uses the Student-t quantile at n - 1 degrees of freedom.
    """
    loo = as_float_array(loo_values, "leave-one-out values", ndim=1)
    n = loo.size
    if n < 2:
        raise ValidationError(f"jackknife needs at least 2 observations, got {n}")
    pseudo = n * float(full_value) - (n - 1) * loo
    estimate = float(np.mean(pseudo))
    se = float(np.std(pseudo, ddof=1) / np.sqrt(n))
    half = student_t_quantile(0.5 + CONFIDENCE / 2.0, n - 1) * se
    return JackknifeSummary(
        estimate=estimate,
        standard_error=se,
        ci_low=estimate - half,
        ci_high=estimate + half,
        confidence=CONFIDENCE,
        n=int(n),
    )


def jackknife_mean(observations) -> JackknifeSummary:
    """Jackknife of the sample mean.

    For the mean statistic the pseudo-values collapse to the observations
    themselves, so the estimate equals the plain mean and the standard
    error equals s/sqrt(n); the general pseudo-value route is kept so the
    same machinery serves other statistics.
    """
    obs = as_float_array(observations, "observations", ndim=1)
    n = obs.size
    if n < 2:
        raise ValidationError(f"jackknife needs at least 2 observations, got {n}")
    total = float(np.cumsum(obs)[-1])
    loo = (total - obs) / (n - 1)
    return jackknife_from_leave_one_out(total / n, loo)
