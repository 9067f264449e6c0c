"""Accuracy, confusion matrices, and per-class precision/recall/F1 reports."""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .jsonio import dumps_canonical

REPORT_FORMAT_VERSION = 1


class EvalError(Exception):
    pass


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int
    zero_denominator: tuple[str, ...] = ()


@dataclass(frozen=True)
class EvalReport:
    labels: tuple[str, ...]
    confusion: np.ndarray          # rows = gold, columns = predicted, counts
    accuracy: float
    per_class: tuple[ClassMetrics, ...]
    n: int


def score(pairs: list[tuple[str, str]], labels: tuple[str, ...] | list[str]) -> EvalReport:
    """Score (gold, predicted) pairs against a fixed label ordering.

    Zero-denominator metrics are reported as 0 and flagged.
    """
    if not pairs:
        raise EvalError("cannot score an empty prediction set")
    labels = tuple(labels)
    index = {l: i for i, l in enumerate(labels)}
    k = len(labels)
    confusion = np.zeros((k, k), dtype=np.int64)
    for gold, predicted in pairs:
        if gold not in index or predicted not in index:
            raise EvalError(f"label pair ({gold!r}, {predicted!r}) outside {labels}")
        confusion[index[gold], index[predicted]] += 1
    n = len(pairs)
    accuracy = float(np.trace(confusion)) / n
    per_class = []
    for i in range(k):
        tp = float(confusion[i, i])
        fp = float(confusion[:, i].sum() - confusion[i, i])
        fn = float(confusion[i, :].sum() - confusion[i, i])
        flags = []
        if tp + fp > 0:
            precision = tp / (tp + fp)
        else:
            precision = 0.0
            flags.append("precision")
        if tp + fn > 0:
            recall = tp / (tp + fn)
        else:
            recall = 0.0
            flags.append("recall")
        if precision + recall > 0:
            f1 = 2.0 * precision * recall / (precision + recall)
        else:
            f1 = 0.0
            flags.append("f1")
        per_class.append(
            ClassMetrics(
                precision=precision,
                recall=recall,
                f1=f1,
                support=int(confusion[i, :].sum()),
                zero_denominator=tuple(flags),
            )
        )
    return EvalReport(
        labels=labels, confusion=confusion, accuracy=accuracy,
        per_class=tuple(per_class), n=n,
    )


def report_to_dict(report: EvalReport) -> dict:
    row_sums = report.confusion.sum(axis=1, keepdims=True)
    normalized = np.divide(
        report.confusion, row_sums, out=np.zeros(report.confusion.shape), where=row_sums > 0
    )
    return {
        "version": REPORT_FORMAT_VERSION,
        "n": report.n,
        "accuracy": report.accuracy,
        "labels": list(report.labels),
        "confusion": [[int(c) for c in row] for row in report.confusion],
        "confusion_row_normalized": [[float(c) for c in row] for row in normalized],
        "per_class": {
            label: {
                "precision": m.precision,
                "recall": m.recall,
                "f1": m.f1,
                "support": m.support,
                "zero_denominator": list(m.zero_denominator),
            }
            for label, m in zip(report.labels, report.per_class)
        },
    }


def render(report: EvalReport, fmt: str = "text") -> str:
    if fmt == "json":
        return dumps_canonical(report_to_dict(report)) + "\n"
    if fmt == "csv":
        return _render_csv(report)
    if fmt == "text":
        return _render_text(report)
    raise EvalError(f"unknown report format {fmt!r}")


def _render_csv(report: EvalReport) -> str:
    out = io.StringIO()
    out.write("gold\\predicted," + ",".join(report.labels) + "\n")
    for label, row in zip(report.labels, report.confusion):
        out.write(label + "," + ",".join(str(int(c)) for c in row) + "\n")
    return out.getvalue()


def _render_text(report: EvalReport) -> str:
    width = max(9, max(len(l) for l in report.labels) + 2)
    out = io.StringIO()
    out.write(f"accuracy: {report.accuracy:.4f}  (n={report.n})\n\n")
    out.write(" " * 10 + "".join(f"{l:>{width}}" for l in report.labels) + "\n")
    rows = (
        ("precision", [m.precision for m in report.per_class]),
        ("recall", [m.recall for m in report.per_class]),
        ("f1-score", [m.f1 for m in report.per_class]),
    )
    for name, values in rows:
        out.write(f"{name:<10}" + "".join(f"{v:>{width}.4f}" for v in values) + "\n")
    out.write(
        f"{'support':<10}" + "".join(f"{m.support:>{width}d}" for m in report.per_class) + "\n"
    )
    flagged = [
        f"{label}.{metric}"
        for label, m in zip(report.labels, report.per_class)
        for metric in m.zero_denominator
    ]
    if flagged:
        out.write("\nzero-denominator metrics reported as 0: " + ", ".join(flagged) + "\n")
    out.write("\nconfusion matrix (rows = gold, columns = predicted):\n")
    out.write(" " * 10 + "".join(f"{l:>{width}}" for l in report.labels) + "\n")
    for label, row in zip(report.labels, report.confusion):
        out.write(f"{label:<10}" + "".join(f"{int(c):>{width}d}" for c in row) + "\n")
    return out.getvalue()
