"""Data-driven random baselines: per-class beta fits, shuffled fits,
resampled rows, symmetric beta noise, and constant output.

All sampling goes through numpy's PCG64 generator so a seed pins every
baseline bit-for-bit. Draw order is fixed (class by class, in class-name
order) and recorded here so reruns with the same seed reproduce exactly.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from .errors import ConfigError, ValidationError
from .matrix import ClassSubset, SoftLabelMatrix
from .validation import as_float_array, check_unit_interval

#: Identifier of the pinned PRNG, recorded in report metadata.
PRNG_ID = "numpy.random.Generator(PCG64)"


def seeded_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for a seed; the same seed always yields the same stream."""
    return np.random.Generator(np.random.PCG64(seed))


def as_generator(rng) -> np.random.Generator:
    """Coerce None, an integer seed, or a Generator into a Generator."""
    if rng is None:
        return np.random.default_rng()
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, (int, np.integer)):
        return seeded_rng(int(rng))
    raise ConfigError(f"expected a seed or numpy Generator, got {type(rng).__name__}")


def _default_ids(n_items: int) -> tuple[str, ...]:
    return tuple(f"item_{i + 1:06d}" for i in range(n_items))


def _check_n_items(n_items: int) -> int:
    if n_items < 1:
        raise ConfigError(f"n_items must be at least 1, got {n_items}")
    return int(n_items)


@dataclass(frozen=True)
class BetaParams:
    """Per-class beta parameters, with constant-mean fallbacks where the
    moment fit is degenerate (zero variance, mean at 0 or 1, or variance
    too large for any beta with that mean)."""

    class_names: tuple[str, ...]
    params: dict[str, tuple[float, float]]
    fallback_means: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        covered = set(self.params) | set(self.fallback_means)
        overlap = set(self.params) & set(self.fallback_means)
        if overlap:
            raise ValidationError(f"classes have both fit and fallback: {sorted(overlap)}")
        if covered != set(self.class_names) or len(self.class_names) != len(covered):
            raise ValidationError("params and fallback_means must cover each class exactly once")
        for name, (alpha, beta) in self.params.items():
            if not (alpha > 0.0 and beta > 0.0 and np.isfinite(alpha) and np.isfinite(beta)):
                raise ValidationError(f"class {name!r} has invalid beta parameters ({alpha}, {beta})")
        for name, mean in self.fallback_means.items():
            if not 0.0 <= mean <= 1.0:
                raise ValidationError(f"class {name!r} fallback mean {mean} outside [0, 1]")

    @property
    def degenerate_classes(self) -> tuple[str, ...]:
        return tuple(name for name in self.class_names if name in self.fallback_means)


def _moment_fit(values: np.ndarray) -> tuple[float, float] | None:
    """Method-of-moments beta fit; None when no valid beta matches the moments.

    Columns that are constant up to rounding count as zero-variance: the
    float variance of a constant column lands near eps^2 (~1e-32), not at
    exactly 0, and would otherwise fit an absurd beta.
    """
    m = float(np.mean(values))
    v = float(np.var(values, ddof=1))
    if not 0.0 < m < 1.0 or v < 1e-24 or v >= m * (1.0 - m):
        return None
    common = m * (1.0 - m) / v - 1.0
    return m * common, (1.0 - m) * common


def fit_betas(
    training: SoftLabelMatrix,
    classes: Iterable[str] | ClassSubset | None = None,
) -> BetaParams:
    """Fit a beta distribution per class from a training matrix.

    Classes where the fit is degenerate fall back to their constant mean
    and are listed in ``degenerate_classes``.
    """
    if training.n_items < 2:
        raise ValidationError(
            f"beta fit needs at least 2 items, got {training.n_items}"
        )
    if classes is None:
        names = training.class_names
    else:
        names = classes.selected if isinstance(classes, ClassSubset) else tuple(classes)
        missing = [name for name in names if name not in training.class_names]
        if missing:
            raise ValidationError(f"classes not present in training matrix: {missing}")
    params: dict[str, tuple[float, float]] = {}
    fallbacks: dict[str, float] = {}
    for name in names:
        column = training.column(name)
        fit = _moment_fit(column)
        if fit is None:
            fallbacks[name] = float(np.mean(column))
        else:
            params[name] = fit
    return BetaParams(class_names=tuple(names), params=params, fallback_means=fallbacks)


def sample_betas(
    params: BetaParams,
    n_items: int,
    rng=None,
    item_ids: Iterable[str] | None = None,
) -> SoftLabelMatrix:
    """Sample a matrix with each class drawn from its fitted beta.

    Fallback classes produce their constant mean. Columns are drawn one
    class at a time in ``class_names`` order.
    """
    n_items = _check_n_items(n_items)
    rng = as_generator(rng)
    columns = []
    for name in params.class_names:
        if name in params.params:
            alpha, beta = params.params[name]
            columns.append(rng.beta(alpha, beta, size=n_items))
        else:
            columns.append(np.full(n_items, params.fallback_means[name]))
    ids = tuple(item_ids) if item_ids is not None else _default_ids(n_items)
    return SoftLabelMatrix(
        item_ids=ids,
        class_names=params.class_names,
        values=np.column_stack(columns),
    )


def _derangement(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random permutation of range(n) with no fixed points, by rejection."""
    while True:
        perm = rng.permutation(n)
        if not np.any(perm == np.arange(n)):
            return perm


def shuffle_assignment(params: BetaParams, rng=None) -> BetaParams:
    """Reassign each class the parameters fitted for some other class.

    The reassignment is a uniform random derangement, so no class keeps
    its own parameters. Needs at least two classes.
    """
    n = len(params.class_names)
    if n < 2:
        raise ConfigError("shuffling needs at least 2 classes; no derangement exists for 1")
    rng = as_generator(rng)
    perm = _derangement(n, rng)
    new_params: dict[str, tuple[float, float]] = {}
    new_fallbacks: dict[str, float] = {}
    for i, name in enumerate(params.class_names):
        source = params.class_names[perm[i]]
        if source in params.params:
            new_params[name] = params.params[source]
        else:
            new_fallbacks[name] = params.fallback_means[source]
    return BetaParams(
        class_names=params.class_names,
        params=new_params,
        fallback_means=new_fallbacks,
    )


def sample_rows(
    training: SoftLabelMatrix,
    n_items: int,
    rng=None,
    item_ids: Iterable[str] | None = None,
) -> SoftLabelMatrix:
    """Sample whole items from the training matrix with replacement.

    Keeps the empirical co-occurrence structure between classes intact,
    unlike the per-class beta baselines.
    """
    n_items = _check_n_items(n_items)
    if training.n_items < 1:
        raise ValidationError("row sampling needs a non-empty training matrix")
    rng = as_generator(rng)
    idx = rng.integers(0, training.n_items, size=n_items)
    ids = tuple(item_ids) if item_ids is not None else _default_ids(n_items)
    return SoftLabelMatrix(
        item_ids=ids,
        class_names=training.class_names,
        values=training.values[idx],
    )


def symmetric_beta_output(
    r: float,
    n_items: int,
    class_names: Iterable[str],
    rng=None,
    item_ids: Iterable[str] | None = None,
) -> SoftLabelMatrix:
    """Matrix of i.i.d. Beta(r, r) cells: mean 1/2 for every r, with r
    controlling how strongly mass piles up at the interval ends (small r)
    or the middle (large r)."""
    if not r > 0.0:
        raise ConfigError(f"beta shape r must be positive, got {r}")
    n_items = _check_n_items(n_items)
    names = tuple(class_names)
    if not names:
        raise ConfigError("at least one class name is required")
    rng = as_generator(rng)
    columns = [rng.beta(r, r, size=n_items) for _ in names]
    ids = tuple(item_ids) if item_ids is not None else _default_ids(n_items)
    return SoftLabelMatrix(item_ids=ids, class_names=names, values=np.column_stack(columns))


def constant_output(
    value: float,
    n_items: int,
    class_names: Iterable[str],
    item_ids: Iterable[str] | None = None,
) -> SoftLabelMatrix:
    """Matrix with every cell equal to ``value``."""
    if not 0.0 <= value <= 1.0:
        raise ConfigError(f"constant value must be in [0, 1], got {value}")
    n_items = _check_n_items(n_items)
    names = tuple(class_names)
    if not names:
        raise ConfigError("at least one class name is required")
    ids = tuple(item_ids) if item_ids is not None else _default_ids(n_items)
    return SoftLabelMatrix(
        item_ids=ids,
        class_names=names,
        values=np.full((n_items, len(names)), float(value)),
    )


class BetaBaseline(BaseEstimator):
    """Per-column beta baseline over plain arrays.

    ``fit`` learns method-of-moments beta parameters per column (constant
    mean where the fit is degenerate); ``sample`` draws new rows. With
    ``shuffle=True`` the fitted parameters are reassigned between columns
    by a random derangement at fit time.
    """

    def __init__(self, shuffle: bool = False, random_state=None):
        self.shuffle = shuffle
        self.random_state = random_state

    def fit(self, X, y=None):
        X = as_float_array(X, "X", ndim=2)
        X = check_unit_interval(X, "X")
        if X.shape[0] < 2:
            raise ValidationError(f"beta fit needs at least 2 rows, got {X.shape[0]}")
        n_classes = X.shape[1]
        alphas = np.full(n_classes, np.nan)
        betas = np.full(n_classes, np.nan)
        fallback = np.full(n_classes, np.nan)
        for j in range(n_classes):
            fit = _moment_fit(X[:, j])
            if fit is None:
                fallback[j] = float(np.mean(X[:, j]))
            else:
                alphas[j], betas[j] = fit
        if self.shuffle:
            if n_classes < 2:
                raise ConfigError("shuffling needs at least 2 columns")
            perm = _derangement(n_classes, as_generator(self.random_state))
            alphas, betas, fallback = alphas[perm], betas[perm], fallback[perm]
        self.n_features_in_ = n_classes
        self.alphas_ = alphas
        self.betas_ = betas
        self.fallback_means_ = fallback
        return self

    def sample(self, n_samples: int, random_state=None) -> np.ndarray:
        if not hasattr(self, "alphas_"):
            raise ValidationError("BetaBaseline is not fitted; call fit first")
        n_samples = _check_n_items(n_samples)
        rng = as_generator(self.random_state if random_state is None else random_state)
        out = np.empty((n_samples, self.n_features_in_))
        for j in range(self.n_features_in_):
            if np.isnan(self.alphas_[j]):
                out[:, j] = self.fallback_means_[j]
            else:
                out[:, j] = rng.beta(self.alphas_[j], self.betas_[j], size=n_samples)
        return out


class RowSampleBaseline(BaseEstimator):
    """Baseline that resamples whole training rows with replacement."""

    def __init__(self, random_state=None):
        self.random_state = random_state

    def fit(self, X, y=None):
        X = as_float_array(X, "X", ndim=2)
        X = check_unit_interval(X, "X")
        if X.shape[0] < 1:
            raise ValidationError("row sampling needs at least 1 training row")
        self.n_features_in_ = X.shape[1]
        self.training_ = X.copy()
        return self

    def sample(self, n_samples: int, random_state=None) -> np.ndarray:
        if not hasattr(self, "training_"):
            raise ValidationError("RowSampleBaseline is not fitted; call fit first")
        n_samples = _check_n_items(n_samples)
        rng = as_generator(self.random_state if random_state is None else random_state)
        idx = rng.integers(0, self.training_.shape[0], size=n_samples)
        return self.training_[idx]
