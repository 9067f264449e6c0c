"""Late fusion of per-tweet log-probability vectors by elementwise summation.

The wire format is JSON Lines, one record per tweet:
``{"id": ..., "gold": ..., "source": ..., "logprobs": {label: float, ...}}``.
Fused scores are raw sums (never renormalized); prediction is the argmax
with ties broken toward the lowest class index.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import LABELS
from .jsonio import dumps_record

ENTRY_TOLERANCE = 1e-9     # allowed positive slack on log-probabilities
LOGSUMEXP_TOLERANCE = 1e-6

FIVE_CLASS = tuple(LABELS)
FOUR_CLASS = tuple(l for l in LABELS if l != "neutral")


class StreamError(Exception):
    """Wire-format violation or stream misalignment."""


@dataclass(frozen=True)
class LogProbRecord:
    id: str
    gold: str | None
    source: str
    labels: tuple[str, ...]      # canonical order, 4- or 5-class
    logprobs: np.ndarray         # aligned with labels

    def to_wire(self) -> str:
        return dumps_record(
            {
                "id": self.id,
                "gold": self.gold,
                "source": self.source,
                "logprobs": {l: float(v) for l, v in zip(self.labels, self.logprobs)},
            }
        )


@dataclass(frozen=True)
class FusedRecord:
    id: str
    gold: str | None
    labels: tuple[str, ...]
    scores: np.ndarray           # raw summed log-probabilities
    predicted: str


def _canonical_labels(keys) -> tuple[str, ...]:
    key_set = frozenset(keys)
    if key_set == frozenset(FIVE_CLASS):
        return FIVE_CLASS
    if key_set == frozenset(FOUR_CLASS):
        return FOUR_CLASS
    raise StreamError(f"unexpected logprob key set {sorted(key_set)}")


def record_from_obj(obj: dict, where: str = "") -> LogProbRecord:
    try:
        rec_id = obj["id"]
        source = obj["source"]
        logprobs = obj["logprobs"]
    except (KeyError, TypeError) as exc:
        raise StreamError(f"{where}: missing field {exc}") from exc
    if not isinstance(rec_id, str) or not rec_id:
        raise StreamError(f"{where}: id must be a non-empty string")
    gold = obj.get("gold")
    labels = _canonical_labels(logprobs)
    if gold is not None and gold not in labels:
        raise StreamError(f"{where}: gold label {gold!r} outside class set")
    values = np.array([float(logprobs[l]) for l in labels])
    return LogProbRecord(id=rec_id, gold=gold, source=source, labels=labels, logprobs=values)


def check_logprob_vector(record: LogProbRecord) -> None:
    """Enforce the distribution contract: entries <= 0, logsumexp(entries) = 0."""
    v = record.logprobs
    if not np.all(np.isfinite(v)):
        raise StreamError(f"record {record.id!r}: non-finite log-probability")
    worst = float(v.max())
    if worst > ENTRY_TOLERANCE:
        raise StreamError(
            f"record {record.id!r}: log-probability {worst!r} above zero"
        )
    peak = float(v.max())
    lse = peak + math.log(float(np.sum(np.exp(v - peak))))
    if abs(lse) > LOGSUMEXP_TOLERANCE:
        raise StreamError(
            f"record {record.id!r}: probabilities sum to exp({lse:.3e}) != 1"
        )


def validate_stream(path) -> list[LogProbRecord]:
    """Parse one JSONL stream and enforce every record invariant."""
    path = Path(path)
    records: list[LogProbRecord] = []
    labels: tuple[str, ...] | None = None
    sources: set[str] = set()
    ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            where = f"{path.name}:{lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise StreamError(f"{where}: invalid JSON ({exc})") from exc
            record = record_from_obj(obj, where)
            check_logprob_vector(record)
            if labels is None:
                labels = record.labels
            elif record.labels != labels:
                raise StreamError(f"{where}: class set differs from the rest of the stream")
            if record.id in ids:
                raise StreamError(f"{where}: duplicate id {record.id!r}")
            ids.add(record.id)
            sources.add(record.source)
            records.append(record)
    if not records:
        raise StreamError(f"{path}: empty stream")
    if len(sources) > 1:
        raise StreamError(f"{path}: mixed sources in one stream: {sorted(sources)}")
    return records


def write_stream(records: list[LogProbRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(record.to_wire())
            fh.write("\n")


def fuse(streams: list[list[LogProbRecord]]) -> list[FusedRecord]:
    """Sum aligned log-probability vectors across models; argmax per id.

    Streams are ordered by source name before summation so the float
    accumulation order (left to right) is reproducible regardless of the
    order in which the files were supplied.
    """
    if not streams or any(not s for s in streams):
        raise StreamError("fusion requires at least one non-empty stream")
    streams = sorted(streams, key=lambda s: s[0].source)
    base = streams[0]
    labels = base[0].labels
    base_ids = [r.id for r in base]
    base_set = set(base_ids)
    by_id: list[dict[str, LogProbRecord]] = []
    for stream in streams:
        if stream[0].labels != labels:
            raise StreamError(
                f"class-set mismatch: {stream[0].source} has {stream[0].labels}, "
                f"{base[0].source} has {labels}"
            )
        index = {r.id: r for r in stream}
        missing = sorted(base_set - set(index))
        extra = sorted(set(index) - base_set)
        if missing:
            raise StreamError(f"stream {stream[0].source!r} is missing id {missing[0]!r}")
        if extra:
            raise StreamError(f"stream {stream[0].source!r} has unmatched id {extra[0]!r}")
        by_id.append(index)
    fused: list[FusedRecord] = []
    for rec_id in base_ids:
        total = np.zeros(len(labels))
        gold: str | None = None
        for index in by_id:
            record = index[rec_id]
            total = total + record.logprobs
            if record.gold is not None:
                if gold is not None and gold != record.gold:
                    raise StreamError(f"record {rec_id!r}: conflicting gold labels")
                gold = record.gold
        predicted = labels[int(np.argmax(total))]
        fused.append(FusedRecord(id=rec_id, gold=gold, labels=labels,
                                 scores=total, predicted=predicted))
    return fused
