"""Curve experiments: the two-point epsilon perturbation and the
symmetric-beta random-prediction study.

Epsilon mode scores a fixed two-value pair: one point where prediction and
reference agree at ``anchor`` and one where the reference is ``base`` and
the prediction is ``base + epsilon``. Soft F then follows the closed form
2*(1 + min(0, eps)) / (2 + eps), while hard F at threshold 0.5 stays 1
until the perturbed prediction crosses the threshold and drops to 2/3.

Beta-r mode scores matrices of i.i.d. Beta(r, r) cells against a reference
matrix, for each r in the grid, reporting soft, hard (fixed 0.5 and
per-class optimal thresholds) and mean Bernoulli KL. An optional constant
output row is appended for comparison. Every binarized Beta(r, r) cell is
Bernoulli(1/2) regardless of r, so hard scores at a fixed threshold are
statistically flat across the grid while soft scores track the KL.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation

import numpy as np

from .baselines import constant_output, symmetric_beta_output
from .errors import ConfigError
from .matrix import SoftLabelMatrix
from .metrics import REF_BINARIZATION_TAU, binarize, hard_prf, score_block, soft_prf
from .stats import bernoulli_kld, bernoulli_kld_values
from .thresholds import evaluate_with_thresholds, optimal_thresholds

#: Fig-style default perturbation pair: agreement point and perturbed base.
DEFAULT_ANCHOR = 0.8
DEFAULT_BASE = 0.2

#: Default epsilon grid bounds; keeps base + epsilon inside [0, 1].
DEFAULT_EPSILON_START = "-0.2"
DEFAULT_EPSILON_STOP = "0.8"
DEFAULT_EPSILON_STEP = "0.01"

#: Default r grid for the symmetric-beta study.
DEFAULT_R_GRID = (0.01, 0.1, 1.0, 5.0, 20.0)

SWEEP_MODES = ("epsilon", "beta_r")


def decimal_grid(start, stop, step) -> tuple[float, ...]:
    """Inclusive grid from start to stop in exact decimal steps.

    Values are built in decimal arithmetic and converted to float at the
    end, so a step of 0.01 lands on clean hundredths instead of drifting.
    """
    try:
        start_d = Decimal(str(start))
        stop_d = Decimal(str(stop))
        step_d = Decimal(str(step))
    except InvalidOperation as exc:
        raise ConfigError(f"bad grid bounds: {start!r}:{stop!r}:{step!r}") from exc
    if step_d <= 0:
        raise ConfigError(f"grid step must be positive, got {step}")
    if stop_d < start_d:
        raise ConfigError(f"grid stop {stop} is below start {start}")
    count = int((stop_d - start_d) / step_d)
    return tuple(float(start_d + i * step_d) for i in range(count + 1))


@dataclass(frozen=True)
class SweepConfig:
    """Which sweep to run and over which grid.

    ``anchor`` and ``base`` are the two-point values for epsilon mode;
    ``n_items`` and ``seed`` feed the beta_r mode (synthetic reference and
    sampling streams).
    """

    mode: str
    grid: tuple[float, ...]
    anchor: float = DEFAULT_ANCHOR
    base: float = DEFAULT_BASE
    n_items: int = 2000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in SWEEP_MODES:
            raise ConfigError(f"sweep mode must be one of {SWEEP_MODES}, got {self.mode!r}")
        if len(self.grid) == 0:
            raise ConfigError("sweep grid must not be empty")
        grid = np.asarray(self.grid, dtype=np.float64)
        if not np.all(np.isfinite(grid)):
            raise ConfigError("sweep grid values must be finite")
        if np.any(np.diff(grid) <= 0.0):
            raise ConfigError("sweep grid must be strictly increasing")
        for name, value in (("anchor", self.anchor), ("base", self.base)):
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {value}")
        if self.n_items < 1:
            raise ConfigError(f"n_items must be at least 1, got {self.n_items}")


@dataclass(frozen=True)
class EpsilonPoint:
    """Scores for one epsilon offset of the two-point pair."""

    epsilon: float
    soft_precision: float
    soft_recall: float
    soft_f: float
    hard_f: float
    kld: float


@dataclass(frozen=True)
class BetaRPoint:
    """Scores for one random-prediction system against the reference.

    ``kind`` is "beta" with ``parameter`` = r, or "constant" with
    ``parameter`` = the constant cell value.
    """

    kind: str
    parameter: float
    soft_f_micro: float
    soft_f_macro: float
    hard_f_micro: float
    hard_f_macro: float
    ot_f_micro: float
    ot_f_macro: float
    kld: float


def epsilon_sweep(
    grid,
    anchor: float = DEFAULT_ANCHOR,
    base: float = DEFAULT_BASE,
) -> list[EpsilonPoint]:
    """Score the two-point pair for every epsilon in the grid."""
    points = []
    ref = np.array([anchor, base])
    ref_binary = binarize(ref, REF_BINARIZATION_TAU)
    for eps in grid:
        perturbed = base + float(eps)
        if not 0.0 <= perturbed <= 1.0:
            raise ConfigError(
                f"epsilon {eps} puts the perturbed value {perturbed} outside [0, 1]"
            )
        pred = np.array([anchor, perturbed])
        soft = soft_prf(pred, ref)
        hard = hard_prf(pred, ref_binary)
        points.append(
            EpsilonPoint(
                epsilon=float(eps),
                soft_precision=soft.precision,
                soft_recall=soft.recall,
                soft_f=soft.f_score,
                hard_f=hard.f_score,
                kld=bernoulli_kld_values(pred, ref),
            )
        )
    return points


def make_synthetic_reference(
    n_items: int,
    n_classes: int = 5,
    seed: int = 0,
    class_names=None,
) -> SoftLabelMatrix:
    """Generate a soft reference matrix for sweeps when no real data is given.

    Each class draws from its own beta distribution with a moderate mean
    (0.3 to 0.7), so every class gets both positive and negative items
    after binarization at 0.5 with overwhelming probability.
    """
    if n_items < 1:
        raise ConfigError(f"n_items must be at least 1, got {n_items}")
    if class_names is None:
        if n_classes < 1:
            raise ConfigError(f"n_classes must be at least 1, got {n_classes}")
        width = max(2, len(str(n_classes)))
        class_names = tuple(f"class_{i + 1:0{width}d}" for i in range(n_classes))
    else:
        class_names = tuple(class_names)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, 1])))
    columns = []
    for _ in class_names:
        mean = rng.uniform(0.3, 0.7)
        concentration = rng.uniform(1.5, 6.0)
        columns.append(rng.beta(mean * concentration, (1.0 - mean) * concentration, size=n_items))
    return SoftLabelMatrix(
        item_ids=tuple(f"item_{i + 1:06d}" for i in range(n_items)),
        class_names=class_names,
        values=np.column_stack(columns),
    )


def _score_system(
    kind: str,
    parameter: float,
    pred: SoftLabelMatrix,
    ref: SoftLabelMatrix,
    ref_binary: SoftLabelMatrix,
) -> BetaRPoint:
    soft = score_block(pred, ref, mode="soft")
    hard = score_block(pred, ref, mode="hard", threshold=0.5)
    tuned = optimal_thresholds(pred, ref_binary)
    ot = evaluate_with_thresholds(pred, ref_binary, tuned)
    return BetaRPoint(
        kind=kind,
        parameter=parameter,
        soft_f_micro=soft.micro.f_score,
        soft_f_macro=soft.macro_f,
        hard_f_micro=hard.micro.f_score,
        hard_f_macro=hard.macro_f,
        ot_f_micro=ot.micro.f_score,
        ot_f_macro=ot.macro_f,
        kld=bernoulli_kld(pred, ref),
    )


def beta_r_sweep(
    grid,
    ref: SoftLabelMatrix,
    seed: int = 0,
    constant: float | None = None,
) -> list[BetaRPoint]:
    """Score one Beta(r, r) prediction matrix per r against the reference.

    Each grid position gets its own child stream of the seed (streams are
    keyed by position, not by the r value), so the same grid and seed
    reproduce every row exactly and no two rows share randomness. The
    optional constant row reuses the same reference.
    """
    grid = tuple(float(r) for r in grid)
    if not grid:
        raise ConfigError("r grid must not be empty")
    for r in grid:
        if not r > 0.0:
            raise ConfigError(f"beta shape r must be positive, got {r}")
    ref_binary = ref.binarized(REF_BINARIZATION_TAU)
    children = np.random.SeedSequence(seed).spawn(len(grid))
    points = []
    for r, child in zip(grid, children):
        pred = symmetric_beta_output(
            r,
            ref.n_items,
            ref.class_names,
            rng=np.random.Generator(np.random.PCG64(child)),
            item_ids=ref.item_ids,
        )
        points.append(_score_system("beta", r, pred, ref, ref_binary))
    if constant is not None:
        pred = constant_output(constant, ref.n_items, ref.class_names, item_ids=ref.item_ids)
        points.append(_score_system("constant", float(constant), pred, ref, ref_binary))
    return points


def run_sweep(
    config: SweepConfig,
    ref: SoftLabelMatrix | None = None,
    constant: float | None = None,
):
    """Dispatch a sweep from its config; beta_r synthesizes a reference
    from the config seed when none is supplied."""
    if config.mode == "epsilon":
        return epsilon_sweep(config.grid, anchor=config.anchor, base=config.base)
    if ref is None:
        ref = make_synthetic_reference(config.n_items, seed=config.seed)
    return beta_r_sweep(config.grid, ref, seed=config.seed, constant=constant)
