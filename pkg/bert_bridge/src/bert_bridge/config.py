"""Fine-tuning configuration with per-variant padding defaults."""

from __future__ import annotations

from dataclasses import dataclass, field, fields

VARIANTS = {
    "bert-base-cased": {"hf_id": "bert-base-cased", "max_len": 85},
    "roberta-base": {"hf_id": "roberta-base", "max_len": 170},
    "bertweet-base": {"hf_id": "vinai/bertweet-base", "max_len": 90},
}

HIDDEN_WIDTH = 768


@dataclass(frozen=True)
class BertFinetuneConfig:
    variant: str = "bertweet-base"
    max_len: int | None = None  # None = the variant's padding default
    lr: float = 2e-5
    epochs: int = 5
    batch_size: int = 16
    dropout: float = 0.30
    grad_clip_norm: float = 1.0
    weight_decay: float = 0.01
    seed: int = 42

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(
                f"unknown variant {self.variant!r}; expected one of {sorted(VARIANTS)}"
            )
        if self.max_len is not None and self.max_len <= 0:
            raise ValueError("max_len must be positive")

    @property
    def resolved_max_len(self) -> int:
        return self.max_len if self.max_len is not None else VARIANTS[self.variant]["max_len"]

    @property
    def hf_model_id(self) -> str:
        return VARIANTS[self.variant]["hf_id"]

    def to_manifest(self) -> dict:
        """Fully-resolved values plus which fields deviate from the defaults."""
        defaults = BertFinetuneConfig()
        overrides = sorted(
            f.name for f in fields(self)
            if getattr(self, f.name) != getattr(defaults, f.name) and f.name != "variant"
        )
        return {
            "variant": self.variant,
            "max_len": self.resolved_max_len,
            "lr": self.lr,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "dropout": self.dropout,
            "grad_clip_norm": self.grad_clip_norm,
            "weight_decay": self.weight_decay,
            "seed": self.seed,
            "overridden_fields": overrides,
        }
