"""Soft-label matrix container and alignment.

A :class:`SoftLabelMatrix` is an items-by-classes grid of membership grades
in [0, 1], used both for system predictions and reference labels. Rows are
keyed by opaque item ids, columns by class names; both are unique and
ordered. The value buffer is read-only so instances behave as immutable
values.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import AlignmentError, ValidationError
from .validation import check_unit_interval


def _check_unique(names: Sequence[str], kind: str) -> tuple[str, ...]:
    names = tuple(str(n) for n in names)
    seen = set()
    for n in names:
        if n in seen:
            raise ValidationError(f"duplicate {kind} {n!r}")
        seen.add(n)
    return names


@dataclass(frozen=True, eq=False)
class SoftLabelMatrix:
    """Dense items x classes grid of unit-interval membership values."""

    item_ids: tuple[str, ...]
    class_names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "item_ids", _check_unique(self.item_ids, "item id"))
        object.__setattr__(self, "class_names", _check_unique(self.class_names, "class name"))
        values = check_unit_interval(self.values, "values", ndim=2).copy()
        if values.shape != (len(self.item_ids), len(self.class_names)):
            raise ValidationError(
                f"values shape {values.shape} does not match "
                f"{len(self.item_ids)} items x {len(self.class_names)} classes"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n_items(self) -> int:
        return len(self.item_ids)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def column(self, class_name: str) -> np.ndarray:
        """Return the (read-only) value column for ``class_name``."""
        try:
            j = self.class_names.index(class_name)
        except ValueError:
            raise AlignmentError(f"class {class_name!r} not present in matrix") from None
        return self.values[:, j]

    def subset(self, classes: Sequence[str]) -> "SoftLabelMatrix":
        """Restrict to ``classes`` in the given order."""
        classes = tuple(classes)
        idx = []
        for c in classes:
            if c not in self.class_names:
                raise AlignmentError(f"class {c!r} not present in matrix")
            idx.append(self.class_names.index(c))
        return SoftLabelMatrix(self.item_ids, classes, self.values[:, idx])

    def binarized(self, tau: float) -> "SoftLabelMatrix":
        """Binarize all values with the strict rule ``value > tau``."""
        return SoftLabelMatrix(
            self.item_ids, self.class_names, (self.values > float(tau)).astype(np.float64)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, SoftLabelMatrix):
            return NotImplemented
        return (
            self.item_ids == other.item_ids
            and self.class_names == other.class_names
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self) -> str:
        return f"SoftLabelMatrix({self.n_items} items x {self.n_classes} classes)"


@dataclass(frozen=True)
class ClassSubset:
    """Ordered, duplicate-free selection of class names to evaluate.

    ``of`` validates the selection against a parent matrix; ``None`` or an
    empty request means "all classes of the parent".
    """

    selected: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.selected:
            raise ValidationError("class subset must not be empty")
        object.__setattr__(self, "selected", _check_unique(self.selected, "class name"))

    @classmethod
    def of(cls, parent: SoftLabelMatrix, classes: Iterable[str] | None = None) -> "ClassSubset":
        if classes is None:
            return cls(parent.class_names)
        subset = cls(tuple(classes))
        missing = [c for c in subset.selected if c not in parent.class_names]
        if missing:
            raise AlignmentError(f"classes not present in matrix: {missing}")
        return subset

    def __iter__(self):
        return iter(self.selected)

    def __len__(self) -> int:
        return len(self.selected)


def resolve_classes(
    pred: SoftLabelMatrix,
    ref: SoftLabelMatrix,
    classes: Iterable[str] | ClassSubset | None = None,
) -> tuple[str, ...]:
    """Resolve the evaluated class subset against both matrices.

    Defaults to the reference's class order; every selected class must be
    present in both inputs.
    """
    if isinstance(classes, ClassSubset):
        names = classes.selected
    elif classes is None:
        names = ref.class_names
    else:
        names = ClassSubset(tuple(classes)).selected
    missing_ref = [c for c in names if c not in ref.class_names]
    missing_pred = [c for c in names if c not in pred.class_names]
    if missing_ref or missing_pred:
        parts = []
        if missing_pred:
            parts.append(f"missing from prediction: {missing_pred}")
        if missing_ref:
            parts.append(f"missing from reference: {missing_ref}")
        raise AlignmentError("class subset not covered; " + "; ".join(parts))
    return names


def align(
    pred: SoftLabelMatrix,
    ref: SoftLabelMatrix,
    classes: Iterable[str] | ClassSubset | None = None,
) -> tuple[SoftLabelMatrix, SoftLabelMatrix]:
    """Align prediction and reference matrices for evaluation.

    Rows of ``pred`` are reordered to the reference's item order, and both
    matrices are restricted to the evaluated class subset (reference class
    order when ``classes`` is None, in which case the class sets must agree
    exactly). Items present in only one input are an error listing the
    symmetric difference -- nothing is dropped silently.
    """
    pred_ids = set(pred.item_ids)
    ref_ids = set(ref.item_ids)
    if pred_ids != ref_ids:
        only_pred = sorted(pred_ids - ref_ids)
        only_ref = sorted(ref_ids - pred_ids)
        parts = []
        if only_ref:
            parts.append(f"missing from prediction: {only_ref}")
        if only_pred:
            parts.append(f"missing from reference: {only_pred}")
        raise AlignmentError("item ids differ; " + "; ".join(parts))

    if classes is None and set(pred.class_names) != set(ref.class_names):
        only_pred = sorted(set(pred.class_names) - set(ref.class_names))
        only_ref = sorted(set(ref.class_names) - set(pred.class_names))
        raise AlignmentError(
            "class sets differ and no subset was requested; "
            f"prediction-only: {only_pred}, reference-only: {only_ref}"
        )
    names = resolve_classes(pred, ref, classes)

    row_of = {item: i for i, item in enumerate(pred.item_ids)}
    order = np.fromiter((row_of[item] for item in ref.item_ids), dtype=np.intp)
    aligned_pred = SoftLabelMatrix(ref.item_ids, pred.class_names, pred.values[order])
    return aligned_pred.subset(names), ref.subset(names)
