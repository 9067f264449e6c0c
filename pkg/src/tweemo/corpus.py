"""Dataset ingestion, label encoding, class balancing, and the train/validation/test split.

Emotion tweets come from WASSA-style tab-separated files (intensity column
discarded); neutral tweets from a CrowdFlower-style CSV filtered on a
configurable sentiment tag.  Splits are deterministic in (input, seed).
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .rng import seeded_shuffle

logger = logging.getLogger(__name__)

# Fixed bijection, alphabetical order.
LABELS = ("anger", "fear", "joy", "neutral", "sadness")
LABEL_TO_INDEX = {name: i for i, name in enumerate(LABELS)}
WASSA_LABELS = frozenset({"anger", "fear", "joy", "sadness"})

TRAIN_FRACTION = 0.8
HOLDOUT_FRACTION = 0.1  # validation and test each


class CorpusError(Exception):
    """Malformed input file or unsatisfiable balancing request."""


@dataclass(frozen=True)
class LabeledTweet:
    id: str
    text: str
    label: str

    def __post_init__(self):
        if not self.text:
            raise ValueError(f"tweet {self.id!r} has empty text")
        if self.label not in LABEL_TO_INDEX:
            raise ValueError(f"tweet {self.id!r} has unknown label {self.label!r}")

    @property
    def label_index(self) -> int:
        return LABEL_TO_INDEX[self.label]


@dataclass(frozen=True)
class DatasetSplit:
    train: list[LabeledTweet]
    validation: list[LabeledTweet]
    test: list[LabeledTweet]
    seed: int

    def partitions(self):
        return (("train", self.train), ("validation", self.validation), ("test", self.test))


def _is_numeric_id(field: str) -> bool:
    return field.strip().isdigit()


def load_wassa(directory) -> list[LabeledTweet]:
    """Read every WASSA-format TSV file under ``directory``.

    Rows are (id, tweet, emotion, intensity); the intensity column is
    discarded.  A first row whose id field is non-numeric is treated as a
    header and skipped.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise CorpusError(f"WASSA directory not found: {directory}")
    files = sorted(p for p in directory.iterdir() if p.is_file() and not p.name.startswith("."))
    if not files:
        raise CorpusError(f"no files in WASSA directory: {directory}")
    tweets: list[LabeledTweet] = []
    seen_ids: set[str] = set()
    for path in files:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.rstrip("\n").rstrip("\r")
                if not line:
                    continue
                fields = line.split("\t")
                if len(fields) != 4:
                    raise CorpusError(
                        f"{path.name}:{lineno}: expected 4 tab-separated fields, got {len(fields)}"
                    )
                tweet_id, text, emotion, _intensity = fields
                if lineno == 1 and not _is_numeric_id(tweet_id):
                    continue  # header row
                emotion = emotion.strip().lower()
                if emotion not in WASSA_LABELS:
                    raise CorpusError(
                        f"{path.name}:{lineno}: unknown emotion {emotion!r} "
                        f"(expected one of {sorted(WASSA_LABELS)})"
                    )
                if not text:
                    raise CorpusError(f"{path.name}:{lineno}: empty tweet text")
                if tweet_id in seen_ids:
                    raise CorpusError(f"{path.name}:{lineno}: duplicate id {tweet_id!r}")
                seen_ids.add(tweet_id)
                tweets.append(LabeledTweet(id=tweet_id, text=text, label=emotion))
    return tweets


def load_neutral(
    csv_path,
    text_column: str = "content",
    sentiment_column: str = "sentiment",
    neutral_tag: str = "neutral",
    id_column: str = "tweet_id",
) -> list[LabeledTweet]:
    """Read a CrowdFlower-style CSV, keeping rows whose sentiment equals ``neutral_tag``.

    Column names are configurable because the original source has decayed;
    any neutral-labelled corpus in the same shape is accepted.  If the id
    column is absent, row numbers are used.
    """
    csv_path = Path(csv_path)
    if not csv_path.is_file():
        raise CorpusError(f"neutral CSV not found: {csv_path}")
    tweets: list[LabeledTweet] = []
    seen_ids: set[str] = set()
    with open(csv_path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        headers = reader.fieldnames or []
        missing = [c for c in (text_column, sentiment_column) if c not in headers]
        if missing:
            raise CorpusError(
                f"{csv_path.name}: missing column(s) {missing}; available headers: {headers}"
            )
        has_id = id_column in headers
        for rownum, row in enumerate(reader, start=2):
            if row[sentiment_column] != neutral_tag:
                continue
            text = row[text_column]
            if not text:
                raise CorpusError(f"{csv_path.name}:{rownum}: empty text")
            tweet_id = row[id_column] if has_id else f"neutral-{rownum}"
            if tweet_id in seen_ids:
                raise CorpusError(f"{csv_path.name}:{rownum}: duplicate id {tweet_id!r}")
            seen_ids.add(tweet_id)
            tweets.append(LabeledTweet(id=tweet_id, text=text, label="neutral"))
    return tweets


def _dedupe(tweets: list[LabeledTweet]) -> list[LabeledTweet]:
    """Drop repeats of identical (text, label) pairs, keeping first occurrence."""
    seen: set[tuple[str, str]] = set()
    kept = []
    for t in tweets:
        key = (t.text, t.label)
        if key in seen:
            continue
        seen.add(key)
        kept.append(t)
    dropped = len(tweets) - len(kept)
    if dropped:
        logger.info("dropped %d duplicate (text, label) pairs", dropped)
    return kept


def split_sizes(per_class: int) -> tuple[int, int, int]:
    """80/10/10 with floor rounding; the remainder goes to train."""
    n_val = int(per_class * HOLDOUT_FRACTION)
    n_test = int(per_class * HOLDOUT_FRACTION)
    n_train = per_class - n_val - n_test
    return n_train, n_val, n_test


def balance_and_split(
    tweets: list[LabeledTweet],
    per_class: int = 1500,
    seed: int = 42,
    drop_neutral: bool = False,
) -> DatasetSplit:
    """Sample ``per_class`` tweets per retained class and cut 80/10/10.

    Sampling is without replacement from a seeded shuffle of each class, so
    identical (input, seed) pairs yield identical splits on every platform.
    With ``drop_neutral`` the neutral class is excluded entirely.
    """
    if per_class <= 0:
        raise CorpusError("per_class must be positive")
    ids = [t.id for t in tweets]
    if len(set(ids)) != len(ids):
        raise CorpusError("duplicate ids in input dataset")
    tweets = _dedupe(tweets)
    retained = [l for l in LABELS if not (drop_neutral and l == "neutral")]
    by_class: dict[str, list[LabeledTweet]] = {l: [] for l in retained}
    for t in tweets:
        if drop_neutral and t.label == "neutral":
            continue
        by_class[t.label].append(t)
    for label in retained:
        if len(by_class[label]) < per_class:
            raise CorpusError(
                f"class {label!r} has {len(by_class[label])} tweets, need {per_class}"
            )
    n_train, n_val, n_test = split_sizes(per_class)
    train: list[LabeledTweet] = []
    validation: list[LabeledTweet] = []
    test: list[LabeledTweet] = []
    for label in retained:
        # Per-class sub-seed keeps the shuffle independent of other classes.
        sub_seed = (seed ^ LABEL_TO_INDEX[label]) & ((1 << 64) - 1)
        shuffled = seeded_shuffle(by_class[label], sub_seed)[:per_class]
        train.extend(shuffled[:n_train])
        validation.extend(shuffled[n_train : n_train + n_val])
        test.extend(shuffled[n_train + n_val : n_train + n_val + n_test])
    return DatasetSplit(train=train, validation=validation, test=test, seed=seed)


# --- JSON Lines split files -------------------------------------------------

def write_jsonl(tweets: list[LabeledTweet], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for t in tweets:
            fh.write(json.dumps({"id": t.id, "text": t.text, "label": t.label},
                                ensure_ascii=False, sort_keys=True, separators=(",", ":")))
            fh.write("\n")


def read_jsonl(path) -> list[LabeledTweet]:
    tweets = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                tweets.append(LabeledTweet(id=obj["id"], text=obj["text"], label=obj["label"]))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise CorpusError(f"{path}:{lineno}: bad record ({exc})") from exc
    return tweets


def file_sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()
