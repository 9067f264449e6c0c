"""Fine-tuning loop: AdamW, NLL loss, linear LR decay, gradient norm clipping.

Trains for the configured number of epochs, logs per-epoch validation
accuracy, and keeps the epoch with the best validation accuracy as the
exported checkpoint.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import torch
from torch import nn
from torch.optim.lr_scheduler import LambdaLR

from .config import BertFinetuneConfig
from .data import encode_texts, read_split
from .model import EmotionClassifier, HfEncoderAdapter
from .data import HfTokenizerAdapter

CHECKPOINT_NAME = "checkpoint.pt"
MANIFEST_NAME = "manifest.json"


def linear_decay_schedule(optimizer, total_steps: int) -> LambdaLR:
    """Linear decay from the base LR to exactly 0 at total_steps, no warmup."""

    def factor(step: int) -> float:
        return max(0.0, float(total_steps - step) / float(max(1, total_steps)))

    return LambdaLR(optimizer, factor)


def _batches(n: int, batch_size: int, generator: torch.Generator | None):
    order = torch.randperm(n, generator=generator) if generator is not None else torch.arange(n)
    for start in range(0, n, batch_size):
        yield order[start : start + batch_size]


@torch.no_grad()
def evaluate_accuracy(model, input_ids, attention_mask, labels, batch_size: int) -> float:
    model.eval()
    hits = 0
    for idx in _batches(labels.numel(), batch_size, generator=None):
        log_probs = model(input_ids[idx], attention_mask[idx])
        hits += int((log_probs.argmax(dim=-1) == labels[idx]).sum())
    return hits / labels.numel()


def _stderr_log(message: str) -> None:
    print(message, file=sys.stderr)


def finetune(
    config: BertFinetuneConfig,
    splits_dir,
    out_dir,
    encoder_factory=None,
    tokenizer=None,
    log=_stderr_log,
) -> Path:
    """Train on {splits_dir}/train.jsonl, select the best epoch on validation.

    ``encoder_factory``/``tokenizer`` default to the pre-trained Hugging Face
    stack for the configured variant; tests inject download-free stubs.
    Writes checkpoint.pt and manifest.json under out_dir.
    """
    splits_dir = Path(splits_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    torch.manual_seed(config.seed)

    train = read_split(splits_dir / "train.jsonl")
    validation = read_split(splits_dir / "validation.jsonl", classes=train.classes)
    if tokenizer is None:
        tokenizer = HfTokenizerAdapter(config.hf_model_id)
    max_len = config.resolved_max_len
    train_ids, train_mask, truncated_train = encode_texts(tokenizer, train.texts, max_len)
    val_ids, val_mask, truncated_val = encode_texts(tokenizer, validation.texts, max_len)
    train_labels = torch.tensor(train.labels, dtype=torch.long)
    val_labels = torch.tensor(validation.labels, dtype=torch.long)
    if truncated_train or truncated_val:
        log(f"[finetune] truncated {truncated_train} train / {truncated_val} validation "
            f"sequences to {max_len} tokens")

    encoder = encoder_factory() if encoder_factory is not None else HfEncoderAdapter(
        config.hf_model_id
    )
    model = EmotionClassifier(encoder, n_classes=len(train.classes), dropout=config.dropout)
    optimizer = torch.optim.AdamW(
        model.parameters(), lr=config.lr, weight_decay=config.weight_decay
    )
    steps_per_epoch = (train_labels.numel() + config.batch_size - 1) // config.batch_size
    scheduler = linear_decay_schedule(optimizer, config.epochs * steps_per_epoch)
    loss_fn = nn.NLLLoss()
    shuffle_gen = torch.Generator().manual_seed(config.seed)

    best_state = None
    best_epoch = -1
    best_accuracy = -1.0
    epoch_log = []
    for epoch in range(config.epochs):
        model.train()
        total_loss = 0.0
        for idx in _batches(train_labels.numel(), config.batch_size, shuffle_gen):
            optimizer.zero_grad()
            log_probs = model(train_ids[idx], train_mask[idx])
            loss = loss_fn(log_probs, train_labels[idx])
            loss.backward()
            torch.nn.utils.clip_grad_norm_(model.parameters(), config.grad_clip_norm)
            optimizer.step()
            scheduler.step()
            total_loss += loss.item() * idx.numel()
        train_loss = total_loss / train_labels.numel()
        val_accuracy = evaluate_accuracy(model, val_ids, val_mask, val_labels,
                                         config.batch_size)
        epoch_log.append({"epoch": epoch, "train_loss": train_loss,
                          "validation_accuracy": val_accuracy})
        log(f"[finetune] epoch {epoch}: loss {train_loss:.4f} "
            f"val acc {val_accuracy:.4f}")
        if val_accuracy > best_accuracy:
            best_accuracy = val_accuracy
            best_epoch = epoch
            best_state = {k: v.detach().clone() for k, v in model.state_dict().items()}

    checkpoint_path = out_dir / CHECKPOINT_NAME
    torch.save(
        {
            "state_dict": best_state,
            "classes": train.classes,
            "config": config.to_manifest(),
        },
        checkpoint_path,
    )
    manifest = {
        "config": config.to_manifest(),
        "classes": train.classes,
        "epochs": epoch_log,
        "chosen_epoch": best_epoch,
        "best_validation_accuracy": best_accuracy,
        "truncated": {"train": truncated_train, "validation": truncated_val},
    }
    (out_dir / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return checkpoint_path
