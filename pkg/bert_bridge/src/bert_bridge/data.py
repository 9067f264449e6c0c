"""Split-file reading, label encoding, and the tokenizer interface."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import torch

from .textprep import light_clean


class DataError(Exception):
    pass


@dataclass(frozen=True)
class SplitData:
    ids: list[str]
    texts: list[str]          # light-cleaned
    labels: list[int]
    classes: list[str]        # alphabetical; label i = classes[i]


def read_split(path, classes: list[str] | None = None) -> SplitData:
    """Read one JSONL split file written by the classical pipeline's prepare.

    Label encoding is the fixed alphabetical bijection over the classes seen
    (or the explicit ``classes`` list when aligning validation/test with the
    training encoder).
    """
    path = Path(path)
    ids, texts, raw_labels = [], [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                ids.append(str(obj["id"]))
                texts.append(light_clean(str(obj["text"])))
                raw_labels.append(str(obj["label"]))
            except (json.JSONDecodeError, KeyError) as exc:
                raise DataError(f"{path}:{lineno}: bad split record ({exc})") from exc
    if not ids:
        raise DataError(f"{path}: empty split file")
    if classes is None:
        classes = sorted(set(raw_labels))
    index = {c: i for i, c in enumerate(classes)}
    unknown = sorted({l for l in raw_labels if l not in index})
    if unknown:
        raise DataError(f"{path}: labels {unknown} outside class set {classes}")
    return SplitData(
        ids=ids, texts=texts, labels=[index[l] for l in raw_labels], classes=list(classes)
    )


class Batch(dict):
    """input_ids / attention_mask tensors plus the truncation count."""


def encode_texts(tokenizer, texts: list[str], max_len: int) -> tuple[torch.Tensor, torch.Tensor, int]:
    """Tokenize to fixed-length tensors; returns (input_ids, attention_mask, n_truncated).

    ``tokenizer`` follows the adapter protocol: ``encode(text) -> list[int]``
    (no padding, no truncation) and ``pad_id``.
    """
    rows, masks, truncated = [], [], 0
    for text in texts:
        token_ids = tokenizer.encode(text)
        if len(token_ids) > max_len:
            token_ids = token_ids[:max_len]
            truncated += 1
        pad = max_len - len(token_ids)
        rows.append(token_ids + [tokenizer.pad_id] * pad)
        masks.append([1] * len(token_ids) + [0] * pad)
    return (
        torch.tensor(rows, dtype=torch.long),
        torch.tensor(masks, dtype=torch.long),
        truncated,
    )


class HfTokenizerAdapter:
    """Wraps a Hugging Face tokenizer into the encode/pad_id protocol."""

    def __init__(self, hf_model_id: str):
        from transformers import AutoTokenizer  # deferred: needs a download

        self._tok = AutoTokenizer.from_pretrained(hf_model_id, use_fast=True)
        self.pad_id = self._tok.pad_token_id or 0

    def encode(self, text: str) -> list[int]:
        return self._tok.encode(text, add_special_tokens=True)
