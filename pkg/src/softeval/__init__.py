"""Evaluation of multilabel classifier outputs against soft reference labels.

Soft (unit-interval) labels are scored with fuzzy-set precision, recall
and F-score; hard thresholded scoring, per-class optimal-threshold search,
Bernoulli KL divergence, jackknife confidence intervals and data-driven
random baselines round out the toolkit. See the CLI (``softeval --help``)
for the file-based workflow.
"""

from .baselines import (
    PRNG_ID,
    BetaBaseline,
    BetaParams,
    RowSampleBaseline,
    as_generator,
    constant_output,
    fit_betas,
    sample_betas,
    sample_rows,
    seeded_rng,
    shuffle_assignment,
    symmetric_beta_output,
)
from .dataio import (
    EvalReport,
    ModeScores,
    RunSeries,
    parse_report,
    read_matrix,
    read_thresholds,
    report_from_dict,
    report_to_dict,
    write_matrix,
    write_report,
    write_thresholds,
)
from .errors import (
    AlignmentError,
    ConfigError,
    NoScorableClassesError,
    SoftEvalError,
    ValidationError,
)
from .evaluation import (
    MODES,
    evaluate_items_jackknife,
    evaluate_matrices,
    evaluate_runs,
    normalize_mode,
    scalar_scores,
)
from .matrix import ClassSubset, SoftLabelMatrix, align, resolve_classes
from .metrics import (
    REF_BINARIZATION_TAU,
    Degeneracy,
    PRFTriple,
    ScoreBlock,
    binarize,
    hard_prf,
    intersection_mass,
    macro_f,
    micro_prf,
    per_class_scores,
    score_block,
    soft_prf,
)
from .stats import (
    CONFIDENCE,
    KL_CLIP,
    KL_DIRECTION,
    JackknifeSummary,
    bernoulli_kld,
    bernoulli_kld_values,
    jackknife_from_leave_one_out,
    jackknife_mean,
    student_t_quantile,
)
from .sweep import (
    BetaRPoint,
    EpsilonPoint,
    SweepConfig,
    beta_r_sweep,
    decimal_grid,
    epsilon_sweep,
    make_synthetic_reference,
    run_sweep,
)
from .thresholds import (
    UNSCORABLE_TAU,
    ThresholdOptimizer,
    ThresholdVector,
    best_threshold,
    evaluate_with_thresholds,
    optimal_thresholds,
    threshold_candidates,
)

__all__ = [
    "AlignmentError",
    "BetaBaseline",
    "BetaParams",
    "BetaRPoint",
    "CONFIDENCE",
    "ClassSubset",
    "ConfigError",
    "Degeneracy",
    "EpsilonPoint",
    "EvalReport",
    "JackknifeSummary",
    "KL_CLIP",
    "KL_DIRECTION",
    "MODES",
    "ModeScores",
    "NoScorableClassesError",
    "PRFTriple",
    "PRNG_ID",
    "REF_BINARIZATION_TAU",
    "RowSampleBaseline",
    "RunSeries",
    "ScoreBlock",
    "SoftEvalError",
    "SoftLabelMatrix",
    "SweepConfig",
    "ThresholdOptimizer",
    "ThresholdVector",
    "UNSCORABLE_TAU",
    "ValidationError",
    "align",
    "as_generator",
    "bernoulli_kld",
    "bernoulli_kld_values",
    "best_threshold",
    "beta_r_sweep",
    "binarize",
    "constant_output",
    "decimal_grid",
    "epsilon_sweep",
    "evaluate_items_jackknife",
    "evaluate_matrices",
    "evaluate_runs",
    "evaluate_with_thresholds",
    "fit_betas",
    "hard_prf",
    "intersection_mass",
    "jackknife_from_leave_one_out",
    "jackknife_mean",
    "macro_f",
    "make_synthetic_reference",
    "micro_prf",
    "normalize_mode",
    "optimal_thresholds",
    "parse_report",
    "per_class_scores",
    "read_matrix",
    "read_thresholds",
    "resolve_classes",
    "report_from_dict",
    "report_to_dict",
    "run_sweep",
    "sample_betas",
    "sample_rows",
    "scalar_scores",
    "score_block",
    "seeded_rng",
    "shuffle_assignment",
    "soft_prf",
    "student_t_quantile",
    "symmetric_beta_output",
    "threshold_candidates",
    "write_matrix",
    "write_report",
    "write_thresholds",
]
