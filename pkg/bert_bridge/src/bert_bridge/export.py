"""Export per-tweet log-probability streams in the shared wire format."""

from __future__ import annotations

import json
from pathlib import Path

import torch

from .data import HfTokenizerAdapter, encode_texts, read_split
from .model import EmotionClassifier, HfEncoderAdapter


class ExportError(Exception):
    pass


def load_checkpoint(checkpoint_path, encoder_factory=None):
    payload = torch.load(checkpoint_path, map_location="cpu", weights_only=False)
    classes = payload["classes"]
    config = payload["config"]
    encoder = encoder_factory() if encoder_factory is not None else HfEncoderAdapter(
        _hf_id_for(config["variant"])
    )
    model = EmotionClassifier(encoder, n_classes=len(classes), dropout=config["dropout"])
    model.load_state_dict(payload["state_dict"])
    model.eval()  # dropout off at inference
    return model, classes, config


def _hf_id_for(variant: str) -> str:
    from .config import VARIANTS

    return VARIANTS[variant]["hf_id"]


@torch.no_grad()
def export_logprobs(
    checkpoint_path,
    split_path,
    out_path,
    encoder_factory=None,
    tokenizer=None,
    batch_size: int = 64,
) -> int:
    """One wire-format record per split tweet, in split-file order.

    Returns the record count.  Fails if the split carries labels the
    checkpoint was not trained on.
    """
    model, classes, config = load_checkpoint(checkpoint_path, encoder_factory)
    try:
        split = read_split(split_path, classes=classes)
    except Exception as exc:
        raise ExportError(f"split/checkpoint mismatch: {exc}") from exc
    if tokenizer is None:
        tokenizer = HfTokenizerAdapter(_hf_id_for(config["variant"]))
    input_ids, attention_mask, _ = encode_texts(tokenizer, split.texts, config["max_len"])

    out_path = Path(out_path)
    count = 0
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        for start in range(0, len(split.ids), batch_size):
            batch_lp = model(
                input_ids[start : start + batch_size],
                attention_mask[start : start + batch_size],
            ).double()
            # Exact renormalization so the wire contract (logsumexp = 0) holds
            # at float64 precision rather than the model's float32.
            batch_lp = batch_lp - torch.logsumexp(batch_lp, dim=-1, keepdim=True)
            for row_index in range(batch_lp.shape[0]):
                i = start + row_index
                record = {
                    "id": split.ids[i],
                    "gold": classes[split.labels[i]],
                    "source": config["variant"],
                    "logprobs": {
                        label: float(batch_lp[row_index, k])
                        for k, label in enumerate(classes)
                    },
                }
                fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True,
                                    separators=(",", ":")))
                fh.write("\n")
                count += 1
    return count
