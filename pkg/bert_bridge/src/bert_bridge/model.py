"""Classifier head over a pooled first-token encoder output."""

from __future__ import annotations

import zlib

import torch
from torch import nn

from .config import HIDDEN_WIDTH


class ClassificationHead(nn.Module):
    """dropout -> dense (768 -> K) -> log-softmax."""

    def __init__(self, n_classes: int, dropout: float = 0.30, hidden: int = HIDDEN_WIDTH):
        super().__init__()
        self.dropout = nn.Dropout(dropout)
        self.dense = nn.Linear(hidden, n_classes)
        self.log_softmax = nn.LogSoftmax(dim=-1)

    def forward(self, pooled: torch.Tensor) -> torch.Tensor:
        return self.log_softmax(self.dense(self.dropout(pooled)))


class EmotionClassifier(nn.Module):
    """Encoder adapter + head; the encoder must map (ids, mask) to (batch, 768)."""

    def __init__(self, encoder: nn.Module, n_classes: int, dropout: float = 0.30):
        super().__init__()
        self.encoder = encoder
        self.head = ClassificationHead(n_classes, dropout)

    def forward(self, input_ids: torch.Tensor, attention_mask: torch.Tensor) -> torch.Tensor:
        pooled = self.encoder(input_ids, attention_mask)
        return self.head(pooled)


class HfEncoderAdapter(nn.Module):
    """Pools the first-token ([CLS]) embedding of a Hugging Face encoder."""

    def __init__(self, hf_model_id: str):
        super().__init__()
        from transformers import AutoModel  # deferred: needs a download

        self.encoder = AutoModel.from_pretrained(hf_model_id)

    def forward(self, input_ids: torch.Tensor, attention_mask: torch.Tensor) -> torch.Tensor:
        output = self.encoder(input_ids=input_ids, attention_mask=attention_mask)
        return output.last_hidden_state[:, 0]


class StubEncoder(nn.Module):
    """Download-free stand-in: mean-pooled random embeddings projected to 768.

    Used by the test suite and smoke runs; carries enough signal for a head
    to learn token-distribution differences.
    """

    def __init__(self, vocab_size: int = 8192, hidden: int = HIDDEN_WIDTH, seed: int = 0):
        super().__init__()
        generator = torch.Generator().manual_seed(seed)
        self.embedding = nn.Embedding(vocab_size, hidden)
        with torch.no_grad():
            self.embedding.weight.copy_(
                torch.randn(vocab_size, hidden, generator=generator) * 0.1
            )

    def forward(self, input_ids: torch.Tensor, attention_mask: torch.Tensor) -> torch.Tensor:
        embedded = self.embedding(input_ids)
        mask = attention_mask.unsqueeze(-1).to(embedded.dtype)
        summed = (embedded * mask).sum(dim=1)
        counts = mask.sum(dim=1).clamp(min=1.0)
        return summed / counts


class StubTokenizer:
    """CRC-hashed whitespace tokenizer matching the adapter protocol."""

    pad_id = 0

    def __init__(self, vocab_size: int = 8192):
        self.vocab_size = vocab_size

    def encode(self, text: str) -> list[int]:
        tokens = text.split()
        return [
            (zlib.crc32(word.encode("utf-8")) % (self.vocab_size - 1)) + 1
            for word in tokens
        ] or [1]
