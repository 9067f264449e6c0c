"""Multinomial and Gaussian Naive Bayes baselines over tf-idf vectors.

The multinomial model treats tf-idf weights as fractional counts with
additive smoothing.  The Gaussian model floors per-class variances at
smoothing * (largest per-feature variance over the whole training set).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .vectorize import SparseVector, TfIdfModel, vectors_to_csr

MODEL_FORMAT_VERSION = 1


class BayesError(Exception):
    pass


def _logsumexp_rows(m: np.ndarray) -> np.ndarray:
    peak = np.max(m, axis=1)
    return peak + np.log(np.sum(np.exp(m - peak[:, None]), axis=1))


def _class_log_priors(labels: np.ndarray, n_classes: int) -> np.ndarray:
    counts = np.bincount(labels, minlength=n_classes).astype(np.float64)
    if np.any(counts == 0):
        missing = int(np.flatnonzero(counts == 0)[0])
        raise BayesError(f"class index {missing} missing from training data")
    return np.log(counts / counts.sum())


@dataclass
class MultinomialNbModel:
    class_log_priors: np.ndarray           # (K,)
    feature_log_likelihood: np.ndarray     # (K, V)
    alpha: float
    classes: list[str]
    tfidf: TfIdfModel

    def log_proba_matrix(self, vectors: list[SparseVector]) -> np.ndarray:
        X = vectors_to_csr(vectors, self.tfidf.n_features)
        joint = X @ self.feature_log_likelihood.T + self.class_log_priors[None, :]
        return joint - _logsumexp_rows(joint)[:, None]

    def predict_log_proba(self, x: SparseVector) -> np.ndarray:
        return self.log_proba_matrix([x])[0]

    def predict_index(self, x: SparseVector) -> int:
        return int(np.argmax(self.predict_log_proba(x)))

    def predict(self, x: SparseVector) -> str:
        return self.classes[self.predict_index(x)]

    def to_dict(self) -> dict:
        return {
            "version": MODEL_FORMAT_VERSION,
            "kind": "mnb",
            "alpha": self.alpha,
            "classes": self.classes,
            "class_log_priors": [float(v) for v in self.class_log_priors],
            "feature_log_likelihood": [[float(v) for v in row]
                                       for row in self.feature_log_likelihood],
            "tfidf": self.tfidf.to_dict(),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "MultinomialNbModel":
        if obj.get("version") != MODEL_FORMAT_VERSION or obj.get("kind") != "mnb":
            raise BayesError("unsupported mnb model file")
        return cls(
            class_log_priors=np.asarray(obj["class_log_priors"], np.float64),
            feature_log_likelihood=np.asarray(obj["feature_log_likelihood"], np.float64),
            alpha=float(obj["alpha"]),
            classes=list(obj["classes"]),
            tfidf=TfIdfModel.from_dict(obj["tfidf"]),
        )


@dataclass
class GaussianNbModel:
    class_log_priors: np.ndarray   # (K,)
    means: np.ndarray              # (K, V)
    variances: np.ndarray          # (K, V), already floored
    smoothing: float
    classes: list[str]
    tfidf: TfIdfModel
    batch_rows: int = 512          # densification cap for prediction

    def log_proba_matrix(self, vectors: list[SparseVector]) -> np.ndarray:
        X = vectors_to_csr(vectors, self.tfidf.n_features)
        out = np.empty((X.shape[0], len(self.classes)))
        log_norm = -0.5 * np.sum(np.log(2.0 * np.pi * self.variances), axis=1)  # (K,)
        for start in range(0, X.shape[0], self.batch_rows):
            dense = X[start : start + self.batch_rows].toarray()
            for k in range(len(self.classes)):
                dev = dense - self.means[k][None, :]
                quad = -0.5 * np.sum(dev * dev / self.variances[k][None, :], axis=1)
                out[start : start + dense.shape[0], k] = (
                    self.class_log_priors[k] + log_norm[k] + quad
                )
        return out - _logsumexp_rows(out)[:, None]

    def predict_log_proba(self, x: SparseVector) -> np.ndarray:
        return self.log_proba_matrix([x])[0]

    def predict_index(self, x: SparseVector) -> int:
        return int(np.argmax(self.predict_log_proba(x)))

    def predict(self, x: SparseVector) -> str:
        return self.classes[self.predict_index(x)]

    def to_dict(self) -> dict:
        return {
            "version": MODEL_FORMAT_VERSION,
            "kind": "gnb",
            "smoothing": self.smoothing,
            "classes": self.classes,
            "class_log_priors": [float(v) for v in self.class_log_priors],
            "means": [[float(v) for v in row] for row in self.means],
            "variances": [[float(v) for v in row] for row in self.variances],
            "tfidf": self.tfidf.to_dict(),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "GaussianNbModel":
        if obj.get("version") != MODEL_FORMAT_VERSION or obj.get("kind") != "gnb":
            raise BayesError("unsupported gnb model file")
        return cls(
            class_log_priors=np.asarray(obj["class_log_priors"], np.float64),
            means=np.asarray(obj["means"], np.float64),
            variances=np.asarray(obj["variances"], np.float64),
            smoothing=float(obj["smoothing"]),
            classes=list(obj["classes"]),
            tfidf=TfIdfModel.from_dict(obj["tfidf"]),
        )


def fit_mnb(
    vectors: list[SparseVector],
    labels: list[int],
    class_names: list[str],
    alpha: float = 1.0,
    tfidf: TfIdfModel | None = None,
) -> MultinomialNbModel:
    """log P(t|c) = ln((count(t,c) + alpha) / (total(c) + alpha * |V|))."""
    if alpha <= 0:
        raise BayesError("alpha must be positive")
    if tfidf is None:
        raise BayesError("fit_mnb requires the TfIdfModel used to produce the vectors")
    X = vectors_to_csr(vectors, tfidf.n_features)
    if X.nnz and X.data.min() < 0:
        raise BayesError("multinomial NB requires non-negative feature values")
    y = np.asarray(labels)
    k = len(class_names)
    priors = _class_log_priors(y, k)
    counts = np.zeros((k, X.shape[1]))
    for c in range(k):
        rows = np.flatnonzero(y == c)
        counts[c] = np.asarray(X[rows].sum(axis=0)).ravel()
    smoothed = counts + alpha
    totals = smoothed.sum(axis=1, keepdims=True)
    fll = np.log(smoothed) - np.log(totals)
    return MultinomialNbModel(
        class_log_priors=priors,
        feature_log_likelihood=fll,
        alpha=alpha,
        classes=list(class_names),
        tfidf=tfidf,
    )


def fit_gnb(
    vectors: list[SparseVector],
    labels: list[int],
    class_names: list[str],
    smoothing: float = 0.5,
    tfidf: TfIdfModel | None = None,
) -> GaussianNbModel:
    """Per-class feature means/variances with a proportional variance floor."""
    if smoothing < 0:
        raise BayesError("smoothing must be non-negative")
    if tfidf is None:
        raise BayesError("fit_gnb requires the TfIdfModel used to produce the vectors")
    X = vectors_to_csr(vectors, tfidf.n_features)
    y = np.asarray(labels)
    k = len(class_names)
    priors = _class_log_priors(y, k)
    n, v = X.shape
    global_mean = np.asarray(X.mean(axis=0)).ravel()
    global_sq = np.asarray(X.multiply(X).mean(axis=0)).ravel()
    global_var = np.maximum(global_sq - global_mean**2, 0.0)
    epsilon = smoothing * float(global_var.max()) if v else 0.0
    if epsilon <= 0.0 and smoothing > 0.0:
        epsilon = smoothing * 1e-9  # all-constant training matrix
    means = np.zeros((k, v))
    variances = np.zeros((k, v))
    for c in range(k):
        rows = np.flatnonzero(y == c)
        Xc = X[rows]
        mean = np.asarray(Xc.mean(axis=0)).ravel()
        sq = np.asarray(Xc.multiply(Xc).mean(axis=0)).ravel()
        means[c] = mean
        variances[c] = np.maximum(sq - mean**2, 0.0) + epsilon
    if np.any(variances <= 0.0):
        raise BayesError("zero variance survived flooring; use smoothing > 0")
    return GaussianNbModel(
        class_log_priors=priors,
        means=means,
        variances=variances,
        smoothing=smoothing,
        classes=list(class_names),
        tfidf=tfidf,
    )
