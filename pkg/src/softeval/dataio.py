"""Reading and writing soft-label matrices, threshold vectors and reports.

Matrix files are wide CSV: a literal ``item_id`` header cell followed by
one column per class, one row per item, ``.`` decimal point, comma
separator. UTF-8 throughout; LF or CRLF accepted on read, LF written.
Values are written with full round-trip precision so that reading a
written matrix reproduces it bit for bit. ``-`` means stdin or stdout.

Reports serialize to JSON (lossless round trip, stable key order) or to a
flat CSV with one row per (class | micro | macro) x mode at 6 decimal
places. Confidence intervals and KLD appear only in the JSON form.
"""

from __future__ import annotations

import csv
import json
import sys
from dataclasses import dataclass
from typing import IO

import numpy as np

from .errors import ConfigError, ValidationError
from .matrix import SoftLabelMatrix, align
from .metrics import Degeneracy, PRFTriple
from .stats import JackknifeSummary
from .thresholds import ThresholdVector

__all__ = [
    "read_matrix",
    "write_matrix",
    "read_thresholds",
    "write_thresholds",
    "ModeScores",
    "RunSeries",
    "EvalReport",
    "report_to_dict",
    "report_from_dict",
    "write_report",
    "parse_report",
    "align",
]


def _read_handle(path) -> tuple[IO[str], str, bool]:
    if hasattr(path, "read"):
        return path, getattr(path, "name", "<stream>"), False
    if str(path) == "-":
        return sys.stdin, "<stdin>", False
    try:
        return open(path, "r", encoding="utf-8-sig", newline=""), str(path), True
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


def _write_handle(path) -> tuple[IO[str], bool]:
    if hasattr(path, "write"):
        return path, False
    if str(path) == "-":
        return sys.stdout, False
    try:
        return open(path, "w", encoding="utf-8", newline=""), True
    except OSError as exc:
        raise ValidationError(f"cannot write {path}: {exc}") from exc


def read_matrix(path, expected_classes=None) -> SoftLabelMatrix:
    """Parse a wide-CSV soft-label matrix.

    Every malformed cell is reported with its item id and class name;
    nothing partial is returned. ``expected_classes`` adds a presence check
    for class columns that must exist.
    """
    fh, where, close = _read_handle(path)
    try:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValidationError(f"{where}: empty input, expected a header row")
        if not header or header[0] != "item_id":
            got = header[0] if header else ""
            raise ValidationError(f"{where}: first header cell must be 'item_id', got {got!r}")
        classes = tuple(header[1:])
        if not classes:
            raise ValidationError(f"{where}: header has no class columns")
        seen_classes = set()
        for name in classes:
            if not name:
                raise ValidationError(f"{where}: empty class name in header")
            if name in seen_classes:
                raise ValidationError(f"{where}: duplicate class {name!r} in header")
            seen_classes.add(name)

        ids: list[str] = []
        seen_ids: set[str] = set()
        rows: list[list[float]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValidationError(
                    f"{where}: line {lineno}: expected {len(header)} cells, got {len(row)}"
                )
            item = row[0]
            if not item:
                raise ValidationError(f"{where}: line {lineno}: empty item id")
            if item in seen_ids:
                raise ValidationError(f"{where}: duplicate item id {item!r}")
            seen_ids.add(item)
            parsed = []
            for cls, cell in zip(classes, row[1:]):
                try:
                    value = float(cell)
                except ValueError:
                    raise ValidationError(
                        f"{where}: item {item!r}, class {cls!r}: non-numeric value {cell!r}"
                    ) from None
                if not np.isfinite(value):
                    raise ValidationError(
                        f"{where}: item {item!r}, class {cls!r}: non-finite value {cell!r}"
                    )
                if not 0.0 <= value <= 1.0:
                    raise ValidationError(
                        f"{where}: item {item!r}, class {cls!r}: value {cell} outside [0, 1]"
                    )
                parsed.append(value)
            ids.append(item)
            rows.append(parsed)
    finally:
        if close:
            fh.close()

    if expected_classes is not None:
        missing = [c for c in expected_classes if c not in classes]
        if missing:
            raise ValidationError(f"{where}: missing expected classes: {missing}")
    values = np.array(rows, dtype=np.float64) if rows else np.empty((0, len(classes)))
    return SoftLabelMatrix(item_ids=tuple(ids), class_names=classes, values=values)


def write_matrix(matrix: SoftLabelMatrix, path) -> None:
    """Write a matrix as wide CSV with full-precision values and LF endings."""
    fh, close = _write_handle(path)
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("item_id",) + matrix.class_names)
        for item, row in zip(matrix.item_ids, matrix.values):
            writer.writerow([item] + [repr(float(v)) for v in row])
    finally:
        if close:
            fh.close()


def write_thresholds(thresholds: ThresholdVector, path) -> None:
    """Write a threshold vector as JSON."""
    payload = {
        "thresholds": {name: float(tau) for name, tau in thresholds.thresholds.items()},
        "unscorable": list(thresholds.unscorable),
    }
    fh, close = _write_handle(path)
    try:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    finally:
        if close:
            fh.close()


def read_thresholds(path) -> ThresholdVector:
    """Read a threshold vector from JSON."""
    fh, where, close = _read_handle(path)
    try:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{where}: invalid JSON: {exc}") from exc
    finally:
        if close:
            fh.close()
    if not isinstance(payload, dict) or "thresholds" not in payload:
        raise ValidationError(f"{where}: expected an object with a 'thresholds' field")
    raw = payload["thresholds"]
    if not isinstance(raw, dict):
        raise ValidationError(f"{where}: 'thresholds' must map class names to numbers")
    thresholds = {}
    for name, tau in raw.items():
        if not isinstance(tau, (int, float)) or isinstance(tau, bool):
            raise ValidationError(f"{where}: threshold for class {name!r} is not a number")
        thresholds[str(name)] = float(tau)
    unscorable = payload.get("unscorable", [])
    if not isinstance(unscorable, list):
        raise ValidationError(f"{where}: 'unscorable' must be a list of class names")
    return ThresholdVector(thresholds=thresholds, unscorable=tuple(str(n) for n in unscorable))


@dataclass(frozen=True)
class ModeScores:
    """Scores for one evaluation mode.

    ``thresholds`` and ``unscorable`` are populated only for the tuned
    hard mode, recording the per-class thresholds actually applied.
    """

    per_class: dict[str, PRFTriple]
    micro: PRFTriple
    macro_f: float
    thresholds: dict[str, float] | None = None
    unscorable: tuple[str, ...] = ()


@dataclass(frozen=True)
class RunSeries:
    """Per-run scalar scores backing a jackknife confidence-interval block."""

    files: tuple[str, ...]
    scores: dict[str, tuple[float, ...]]


@dataclass(frozen=True)
class EvalReport:
    """Full evaluation result.

    Single-input reports fill ``results`` (one ModeScores per mode) and
    ``kld``. Multi-run jackknife reports instead fill ``runs`` with the
    per-run scalar series and ``confidence_intervals`` with one summary
    per reported score; absent blocks stay None and serialize as null.
    """

    metadata: dict
    results: dict[str, ModeScores] | None = None
    kld: float | None = None
    confidence_intervals: dict[str, JackknifeSummary] | None = None
    runs: RunSeries | None = None


def _triple_to_dict(triple: PRFTriple) -> dict:
    return {
        "precision": triple.precision,
        "recall": triple.recall,
        "f_score": triple.f_score,
        "degenerate": triple.degenerate.value,
    }


def _triple_from_dict(d: dict) -> PRFTriple:
    return PRFTriple(
        precision=float(d["precision"]),
        recall=float(d["recall"]),
        f_score=float(d["f_score"]),
        degenerate=Degeneracy(d.get("degenerate", "none")),
    )


def _mode_to_dict(scores: ModeScores) -> dict:
    return {
        "per_class": {name: _triple_to_dict(t) for name, t in scores.per_class.items()},
        "micro": _triple_to_dict(scores.micro),
        "macro_f": scores.macro_f,
        "thresholds": scores.thresholds,
        "unscorable": list(scores.unscorable),
    }


def _mode_from_dict(d: dict) -> ModeScores:
    thresholds = d.get("thresholds")
    return ModeScores(
        per_class={name: _triple_from_dict(t) for name, t in d["per_class"].items()},
        micro=_triple_from_dict(d["micro"]),
        macro_f=float(d["macro_f"]),
        thresholds=None if thresholds is None else {k: float(v) for k, v in thresholds.items()},
        unscorable=tuple(d.get("unscorable", ())),
    )


def _ci_to_dict(ci: JackknifeSummary) -> dict:
    return {
        "estimate": ci.estimate,
        "standard_error": ci.standard_error,
        "ci_low": ci.ci_low,
        "ci_high": ci.ci_high,
        "confidence": ci.confidence,
        "n": ci.n,
    }


def _ci_from_dict(d: dict) -> JackknifeSummary:
    return JackknifeSummary(
        estimate=float(d["estimate"]),
        standard_error=float(d["standard_error"]),
        ci_low=float(d["ci_low"]),
        ci_high=float(d["ci_high"]),
        confidence=float(d["confidence"]),
        n=int(d["n"]),
    )


def report_to_dict(report: EvalReport) -> dict:
    """Plain-dict form of a report with a stable key order."""
    return {
        "metadata": report.metadata,
        "results": None
        if report.results is None
        else {mode: _mode_to_dict(s) for mode, s in report.results.items()},
        "kld": report.kld,
        "confidence_intervals": None
        if report.confidence_intervals is None
        else {key: _ci_to_dict(ci) for key, ci in report.confidence_intervals.items()},
        "runs": None
        if report.runs is None
        else {
            "files": list(report.runs.files),
            "scores": {key: list(vals) for key, vals in report.runs.scores.items()},
        },
    }


def report_from_dict(d: dict) -> EvalReport:
    """Inverse of :func:`report_to_dict`; floats survive exactly."""
    results = d.get("results")
    cis = d.get("confidence_intervals")
    runs = d.get("runs")
    kld = d.get("kld")
    return EvalReport(
        metadata=d.get("metadata", {}),
        results=None if results is None else {m: _mode_from_dict(s) for m, s in results.items()},
        kld=None if kld is None else float(kld),
        confidence_intervals=None if cis is None else {k: _ci_from_dict(c) for k, c in cis.items()},
        runs=None
        if runs is None
        else RunSeries(
            files=tuple(runs.get("files", ())),
            scores={k: tuple(float(v) for v in vals) for k, vals in runs["scores"].items()},
        ),
    )


def _report_csv(report: EvalReport) -> str:
    if report.results is None:
        raise ConfigError(
            "CSV report output needs per-mode results; jackknife run reports are JSON only"
        )
    out = []
    out.append("mode,scope,precision,recall,f_score,degenerate")
    for mode, scores in report.results.items():
        for name, triple in scores.per_class.items():
            out.append(
                f"{mode},{name},{triple.precision:.6f},{triple.recall:.6f},"
                f"{triple.f_score:.6f},{triple.degenerate.value}"
            )
        micro = scores.micro
        out.append(
            f"{mode},micro,{micro.precision:.6f},{micro.recall:.6f},"
            f"{micro.f_score:.6f},{micro.degenerate.value}"
        )
        out.append(f"{mode},macro,,,{scores.macro_f:.6f},")
    return "\n".join(out) + "\n"


def write_report(report: EvalReport, format: str = "json") -> bytes:
    """Serialize a report; JSON is lossless, CSV is the 6-decimal table."""
    if format == "json":
        text = json.dumps(report_to_dict(report), indent=2) + "\n"
    elif format == "csv":
        text = _report_csv(report)
    else:
        raise ConfigError(f"unknown report format {format!r}; expected 'json' or 'csv'")
    return text.encode("utf-8")


def parse_report(data) -> EvalReport:
    """Parse a JSON report produced by :func:`write_report`."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        payload = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid report JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ValidationError("report JSON must be a single object")
    return report_from_dict(payload)
