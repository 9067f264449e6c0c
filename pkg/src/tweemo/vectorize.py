"""TF-IDF vectorization over token lists.

Smoothed idf ln((1+N)/(1+df)) + 1, raw term counts, L2 normalization.
Documents that are empty or fully out-of-vocabulary map to the zero vector.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import log

import numpy as np
from scipy import sparse

MODEL_FORMAT_VERSION = 1


class VectorizerError(Exception):
    pass


@dataclass(frozen=True)
class SparseVector:
    """L2-normalized sparse row: strictly increasing indices, non-zero values."""

    indices: np.ndarray
    values: np.ndarray
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "indices", np.asarray(self.indices, dtype=np.int64))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.indices.shape != self.values.shape:
            raise ValueError("indices and values must have equal length")
        if self.indices.size:
            if np.any(np.diff(self.indices) <= 0):
                raise ValueError("indices must be strictly increasing")
            if self.indices[0] < 0 or self.indices[-1] >= self.dim:
                raise ValueError("index out of range")
            if np.any(self.values == 0.0):
                raise ValueError("explicit zeros not allowed")

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def squared_norm(self) -> float:
        return float(np.dot(self.values, self.values))

    def dot(self, other: "SparseVector") -> float:
        common, ix, iy = np.intersect1d(
            self.indices, other.indices, assume_unique=True, return_indices=True
        )
        if not common.size:
            return 0.0
        return float(np.dot(self.values[ix], other.values[iy]))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices] = self.values
        return out


def vectors_to_csr(vectors: list[SparseVector], dim: int | None = None) -> sparse.csr_matrix:
    if dim is None:
        if not vectors:
            raise ValueError("need dim for an empty vector list")
        dim = vectors[0].dim
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    for i, v in enumerate(vectors):
        if v.dim != dim:
            raise ValueError("dimension mismatch")
        indptr[i + 1] = indptr[i] + v.nnz
    indices = np.concatenate([v.indices for v in vectors]) if vectors else np.zeros(0, np.int64)
    data = np.concatenate([v.values for v in vectors]) if vectors else np.zeros(0)
    return sparse.csr_matrix((data, indices, indptr), shape=(len(vectors), dim))


@dataclass(frozen=True)
class TfIdfModel:
    vocabulary: dict[str, int]  # token -> column, dense 0-based, sorted-token order
    idf: np.ndarray
    n_docs_fitted: int

    @property
    def n_features(self) -> int:
        return len(self.vocabulary)

    def to_dict(self) -> dict:
        return {
            "version": MODEL_FORMAT_VERSION,
            "vocabulary": self.vocabulary,
            "idf": [float(x) for x in self.idf],
            "n_docs_fitted": self.n_docs_fitted,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "TfIdfModel":
        if obj.get("version") != MODEL_FORMAT_VERSION:
            raise VectorizerError(f"unsupported tf-idf model version {obj.get('version')!r}")
        vocab = {str(k): int(v) for k, v in obj["vocabulary"].items()}
        return cls(
            vocabulary=vocab,
            idf=np.asarray(obj["idf"], dtype=np.float64),
            n_docs_fitted=int(obj["n_docs_fitted"]),
        )


def fit(train_docs: list[list[str]]) -> TfIdfModel:
    """Build the vocabulary and smoothed idf weights from training token lists."""
    if not train_docs or all(not doc for doc in train_docs):
        raise VectorizerError("cannot fit tf-idf on an all-empty corpus")
    df: Counter[str] = Counter()
    for doc in train_docs:
        df.update(set(doc))
    vocabulary = {token: i for i, token in enumerate(sorted(df))}
    n = len(train_docs)
    idf = np.array(
        [log((1.0 + n) / (1.0 + df[token])) + 1.0 for token in sorted(df)], dtype=np.float64
    )
    return TfIdfModel(vocabulary=vocabulary, idf=idf, n_docs_fitted=n)


def transform(model: TfIdfModel, doc: list[str]) -> SparseVector:
    """Map one token list to an L2-normalized tf-idf vector (zero vector when fully OOV)."""
    counts = Counter(doc)
    pairs = sorted(
        (model.vocabulary[t], c) for t, c in counts.items() if t in model.vocabulary
    )
    if not pairs:
        return SparseVector(np.zeros(0, np.int64), np.zeros(0), model.n_features)
    indices = np.array([i for i, _ in pairs], dtype=np.int64)
    values = np.array([c for _, c in pairs], dtype=np.float64) * model.idf[indices]
    norm = float(np.sqrt(np.dot(values, values)))
    if norm > 0.0:
        values = values / norm
    return SparseVector(indices, values, model.n_features)


def transform_many(model: TfIdfModel, docs: list[list[str]]) -> list[SparseVector]:
    return [transform(model, doc) for doc in docs]
