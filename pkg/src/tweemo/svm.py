"""RBF-kernel multi-class SVM with a from-scratch SMO dual solver.

One-vs-rest binaries, each solved by sequential minimal optimization with
maximal-violating-pair working-set selection, then calibrated with a Platt
sigmoid fitted on out-of-fold decision values.  Class probabilities come
from the normalized per-binary sigmoids and are reported as natural logs.
"""

from __future__ import annotations

from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import exp, log1p

import numpy as np
from scipy import sparse

from .rng import seeded_shuffle
from .vectorize import SparseVector, TfIdfModel, vectors_to_csr

MODEL_FORMAT_VERSION = 1
_TAU = 1e-12  # curvature floor for degenerate working pairs


class SvmTrainingError(Exception):
    pass


@dataclass(frozen=True)
class SvmConfig:
    C: float = 1.0
    gamma: float | str = "auto"  # "auto" = 1 / (n_features * mean feature variance)
    tol: float = 1e-3
    max_passes: int = 1000  # iteration budget is max_passes * n_samples
    platt_folds: int = 3
    sv_threshold: float = 1e-8
    cache_mb: int = 512
    calibration: str = "platt"

    def __post_init__(self):
        if self.C <= 0:
            raise ValueError("C must be positive")
        if isinstance(self.gamma, str):
            if self.gamma != "auto":
                raise ValueError(f"gamma must be positive or 'auto', got {self.gamma!r}")
        elif self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.calibration != "platt":
            raise ValueError(f"unknown calibration {self.calibration!r}")


def resolve_gamma(config: SvmConfig, X: sparse.csr_matrix) -> float:
    if not isinstance(config.gamma, str):
        return float(config.gamma)
    n_features = X.shape[1]
    col_mean = np.asarray(X.mean(axis=0)).ravel()
    col_sq_mean = np.asarray(X.multiply(X).mean(axis=0)).ravel()
    mean_var = float(np.mean(col_sq_mean - col_mean**2))
    if mean_var <= 0.0:
        return 1.0 / n_features
    return 1.0 / (n_features * mean_var)


def rbf_kernel(x: SparseVector, y: SparseVector, gamma: float) -> float:
    """exp(-gamma * ||x - y||^2)."""
    if x.dim != y.dim:
        raise ValueError("dimension mismatch")
    d2 = x.squared_norm() + y.squared_norm() - 2.0 * x.dot(y)
    return exp(-gamma * max(d2, 0.0))


class RbfKernelMatrix:
    """Kernel rows over a fixed sample set, precomputed when the budget allows.

    Falls back to an LRU row cache when the full n x n matrix would exceed
    ``cache_mb``.  Rows are float64 numpy arrays of length n.
    """

    def __init__(self, X: sparse.csr_matrix, gamma: float, cache_mb: int = 512):
        self.X = X.tocsr()
        self.gamma = gamma
        self.n = X.shape[0]
        self._sq = np.asarray(self.X.multiply(self.X).sum(axis=1)).ravel()
        budget = cache_mb * 1024 * 1024
        self._full: np.ndarray | None = None
        if 8 * self.n * self.n <= budget:
            gram = (self.X @ self.X.T).toarray()
            d2 = self._sq[:, None] + self._sq[None, :] - 2.0 * gram
            np.fill_diagonal(d2, 0.0)
            np.maximum(d2, 0.0, out=d2)
            self._full = np.exp(-gamma * d2)
        else:
            self._max_rows = max(2, budget // (8 * self.n))
            self._cache: OrderedDict[int, np.ndarray] = OrderedDict()

    def row(self, i: int) -> np.ndarray:
        if self._full is not None:
            return self._full[i]
        cached = self._cache.get(i)
        if cached is not None:
            self._cache.move_to_end(i)
            return cached
        xi = self.X.getrow(i)
        d2 = self._sq + self._sq[i] - 2.0 * (self.X @ xi.T).toarray().ravel()
        d2[i] = 0.0
        np.maximum(d2, 0.0, out=d2)
        row = np.exp(-self.gamma * d2)
        self._cache[i] = row
        while len(self._cache) > self._max_rows:
            self._cache.popitem(last=False)
        return row

    def submatrix(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        if self._full is not None:
            return self._full[np.ix_(rows, cols)]
        return np.stack([self.row(i)[cols] for i in rows])


class _SubsetKernel:
    """View of a precomputed kernel submatrix used for cross-validation solves."""

    def __init__(self, matrix: np.ndarray):
        self._m = matrix
        self.n = matrix.shape[0]

    def row(self, i: int) -> np.ndarray:
        return self._m[i]


def smo_solve(
    kernel,
    y: np.ndarray,
    C: float,
    tol: float,
    max_iter: int,
) -> tuple[np.ndarray, float, int]:
    """Solve the dual QP by maximal-violating-pair SMO.

    Returns (alpha, bias, iterations).  ``kernel`` provides .row(i) -> K[i, :].
    Raises SvmTrainingError when the KKT gap is still above tol at max_iter.
    """
    n = y.size
    alpha = np.zeros(n)
    grad = -np.ones(n)  # gradient of 1/2 a'Qa - e'a  at alpha = 0
    pos = y > 0
    for iteration in range(max_iter):
        viol = -y * grad
        up = (pos & (alpha < C)) | (~pos & (alpha > 0.0))
        low = (~pos & (alpha < C)) | (pos & (alpha > 0.0))
        if not up.any() or not low.any():
            break
        i = int(np.flatnonzero(up)[np.argmax(viol[up])])
        j = int(np.flatnonzero(low)[np.argmin(viol[low])])
        gap = viol[i] - viol[j]
        if gap <= tol:
            break
        ki = kernel.row(i)
        kj = kernel.row(j)
        quad = max(ki[i] + kj[j] - 2.0 * ki[j], _TAU)
        # Box limits along the feasible direction (equality constraint preserved).
        limit_i = (C - alpha[i]) if y[i] > 0 else alpha[i]
        limit_j = alpha[j] if y[j] > 0 else (C - alpha[j])
        step = min(gap / quad, limit_i, limit_j)
        alpha[i] += y[i] * step
        alpha[j] -= y[j] * step
        # Snap binding coordinates to their exact bound.
        if step == limit_i:
            alpha[i] = C if y[i] > 0 else 0.0
        if step == limit_j:
            alpha[j] = 0.0 if y[j] > 0 else C
        grad += (y * step) * (ki - kj)
    else:
        viol = -y * grad
        up = (pos & (alpha < C)) | (~pos & (alpha > 0.0))
        low = (~pos & (alpha < C)) | (pos & (alpha > 0.0))
        gap = float(np.max(viol[up]) - np.min(viol[low]))
        raise SvmTrainingError(
            f"SMO did not converge in {max_iter} iterations; KKT violation {gap:.3e}"
        )

    bias = _compute_bias(alpha, grad, y, C)
    return alpha, bias, iteration

def _compute_bias(alpha: np.ndarray, grad: np.ndarray, y: np.ndarray, C: float) -> float:
    """Average y*grad over free vectors; midpoint of the bound gap otherwise."""
    ygrad = y * grad
    free = (alpha > 0.0) & (alpha < C)
    if free.any():
        rho = float(np.mean(ygrad[free]))
    else:
        upper = (y > 0) & (alpha == 0.0) | (y < 0) & (alpha == C)
        lower = (y < 0) & (alpha == 0.0) | (y > 0) & (alpha == C)
        ub = float(np.min(ygrad[upper])) if upper.any() else 0.0
        lb = float(np.max(ygrad[lower])) if lower.any() else 0.0
        rho = (ub + lb) / 2.0
    return -rho


def fit_platt(decision_values: np.ndarray, labels: np.ndarray) -> tuple[float, float]:
    """Regularized sigmoid MLE; returns (a, b) with p = sigmoid(a*f + b).

    Newton iteration on the Platt loss with Bayesian target smoothing,
    following the standard numerically-stable formulation.
    """
    f = np.asarray(decision_values, dtype=np.float64)
    y = np.asarray(labels)
    n_pos = int(np.sum(y > 0))
    n_neg = y.size - n_pos
    hi = (n_pos + 1.0) / (n_pos + 2.0)
    lo = 1.0 / (n_neg + 2.0)
    t = np.where(y > 0, hi, lo)
    A, B = 0.0, log1p(n_neg / (n_pos + 1.0))  # log((n_neg + 1) / (n_pos + 1))

    def objective(a_, b_):
        z = f * a_ + b_
        return float(np.sum(np.where(z >= 0, t * z + np.log1p(np.exp(-np.abs(z))),
                                     (t - 1.0) * z + np.log1p(np.exp(-np.abs(z))))))

    fval = objective(A, B)
    sigma = 1e-12
    for _ in range(100):
        z = f * A + B
        p = np.where(z >= 0, np.exp(-np.clip(z, 0, None)) / (1.0 + np.exp(-np.clip(z, 0, None))),
                     1.0 / (1.0 + np.exp(np.clip(z, None, 0))))
        pq = p * (1.0 - p)
        h11 = float(np.dot(f * f, pq)) + sigma
        h22 = float(np.sum(pq)) + sigma
        h21 = float(np.dot(f, pq))
        d1 = t - p
        g1 = float(np.dot(f, d1))
        g2 = float(np.sum(d1))
        if abs(g1) < 1e-5 and abs(g2) < 1e-5:
            break
        det = h11 * h22 - h21 * h21
        dA = -(h22 * g1 - h21 * g2) / det
        dB = -(-h21 * g1 + h11 * g2) / det
        gd = g1 * dA + g2 * dB
        stepsize = 1.0
        while stepsize >= 1e-10:
            newA, newB = A + stepsize * dA, B + stepsize * dB
            newf = objective(newA, newB)
            if newf < fval + 1e-4 * stepsize * gd:
                A, B, fval = newA, newB, newf
                break
            stepsize /= 2.0
        else:
            break
    return -A, -B


def log_sigmoid(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    return np.where(z >= 0, -np.log1p(np.exp(-np.abs(z))), z - np.log1p(np.exp(-np.abs(z))))


@dataclass
class BinarySvm:
    """One one-vs-rest binary: kept support vectors, duals, bias, Platt sigmoid."""

    support_vectors: list[SparseVector]
    alphas: np.ndarray       # pre-multiplication alpha_i, for the box-constraint check
    dual_coefs: np.ndarray   # alpha_i * y_i
    bias: float
    platt_a: float
    platt_b: float
    _sv_csr: sparse.csr_matrix | None = field(default=None, repr=False, compare=False)
    _sv_sq: np.ndarray | None = field(default=None, repr=False, compare=False)

    def _ensure_csr(self, dim: int):
        if self._sv_csr is None:
            self._sv_csr = vectors_to_csr(self.support_vectors, dim)
            self._sv_sq = np.asarray(
                self._sv_csr.multiply(self._sv_csr).sum(axis=1)
            ).ravel()

    def decision_values(self, X: sparse.csr_matrix, x_sq: np.ndarray, gamma: float) -> np.ndarray:
        if not self.support_vectors:
            return np.full(X.shape[0], self.bias)
        self._ensure_csr(X.shape[1])
        gram = (X @ self._sv_csr.T).toarray()
        d2 = x_sq[:, None] + self._sv_sq[None, :] - 2.0 * gram
        np.maximum(d2, 0.0, out=d2)
        k = np.exp(-gamma * d2)
        return k @ self.dual_coefs + self.bias


@dataclass
class SvmModel:
    config: SvmConfig
    resolved_gamma: float
    seed: int
    classes: list[str]
    binaries: list[BinarySvm]
    tfidf: TfIdfModel

    # --- inference ---------------------------------------------------------

    def decision_matrix(self, vectors: list[SparseVector]) -> np.ndarray:
        X = vectors_to_csr(vectors, self.tfidf.n_features)
        x_sq = np.asarray(X.multiply(X).sum(axis=1)).ravel()
        cols = [b.decision_values(X, x_sq, self.resolved_gamma) for b in self.binaries]
        return np.stack(cols, axis=1)

    def log_proba_matrix(self, vectors: list[SparseVector]) -> np.ndarray:
        dv = self.decision_matrix(vectors)
        a = np.array([b.platt_a for b in self.binaries])
        b = np.array([b.platt_b for b in self.binaries])
        log_p = log_sigmoid(dv * a[None, :] + b[None, :])
        lse = _logsumexp_rows(log_p)
        return log_p - lse[:, None]

    def predict_log_proba(self, x: SparseVector) -> np.ndarray:
        return self.log_proba_matrix([x])[0]

    def predict_index(self, x: SparseVector) -> int:
        return int(np.argmax(self.predict_log_proba(x)))

    def predict(self, x: SparseVector) -> str:
        return self.classes[self.predict_index(x)]

    # --- persistence -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "version": MODEL_FORMAT_VERSION,
            "kind": "svm",
            "config": {
                "C": self.config.C,
                "gamma": self.config.gamma,
                "tol": self.config.tol,
                "max_passes": self.config.max_passes,
                "platt_folds": self.config.platt_folds,
                "sv_threshold": self.config.sv_threshold,
                "cache_mb": self.config.cache_mb,
                "calibration": self.config.calibration,
            },
            "resolved_gamma": self.resolved_gamma,
            "seed": self.seed,
            "classes": self.classes,
            "binaries": [
                {
                    "sv_indices": [[int(i) for i in sv.indices] for sv in b.support_vectors],
                    "sv_values": [[float(v) for v in sv.values] for sv in b.support_vectors],
                    "alphas": [float(a) for a in b.alphas],
                    "dual_coefs": [float(c) for c in b.dual_coefs],
                    "bias": b.bias,
                    "platt_a": b.platt_a,
                    "platt_b": b.platt_b,
                }
                for b in self.binaries
            ],
            "tfidf": self.tfidf.to_dict(),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "SvmModel":
        if obj.get("version") != MODEL_FORMAT_VERSION or obj.get("kind") != "svm":
            raise SvmTrainingError("unsupported svm model file")
        cfg = obj["config"]
        config = SvmConfig(
            C=cfg["C"], gamma=cfg["gamma"], tol=cfg["tol"], max_passes=cfg["max_passes"],
            platt_folds=cfg["platt_folds"], sv_threshold=cfg["sv_threshold"],
            cache_mb=cfg["cache_mb"], calibration=cfg["calibration"],
        )
        tfidf = TfIdfModel.from_dict(obj["tfidf"])
        binaries = []
        for raw in obj["binaries"]:
            svs = [
                SparseVector(np.asarray(ix, np.int64), np.asarray(vs, np.float64),
                             tfidf.n_features)
                for ix, vs in zip(raw["sv_indices"], raw["sv_values"])
            ]
            binaries.append(
                BinarySvm(
                    support_vectors=svs,
                    alphas=np.asarray(raw["alphas"], np.float64),
                    dual_coefs=np.asarray(raw["dual_coefs"], np.float64),
                    bias=float(raw["bias"]),
                    platt_a=float(raw["platt_a"]),
                    platt_b=float(raw["platt_b"]),
                )
            )
        return cls(
            config=config,
            resolved_gamma=float(obj["resolved_gamma"]),
            seed=int(obj["seed"]),
            classes=list(obj["classes"]),
            binaries=binaries,
            tfidf=tfidf,
        )


def _logsumexp_rows(m: np.ndarray) -> np.ndarray:
    peak = np.max(m, axis=1)
    return peak + np.log(np.sum(np.exp(m - peak[:, None]), axis=1))


def _fold_assignment(n: int, folds: int, seed: int) -> np.ndarray:
    order = seeded_shuffle(list(range(n)), seed)
    assignment = np.zeros(n, dtype=np.int64)
    size = n // folds
    remainder = n % folds
    start = 0
    for f in range(folds):
        count = size + (1 if f < remainder else 0)
        for idx in order[start : start + count]:
            assignment[idx] = f
        start += count
    return assignment


def train_binary(
    data: list[tuple[SparseVector, int]],
    config: SvmConfig,
    seed: int = 42,
) -> BinarySvm:
    """Train one binary SVM with out-of-fold Platt calibration.

    ``data`` pairs each vector with a +1/-1 label; both labels must appear.
    """
    vectors = [v for v, _ in data]
    y = np.array([lbl for _, lbl in data], dtype=np.float64)
    if not np.any(y > 0) or not np.any(y < 0):
        raise SvmTrainingError("binary training requires both labels present")
    X = vectors_to_csr(vectors)
    gamma = resolve_gamma(config, X)
    kernel = RbfKernelMatrix(X, gamma, config.cache_mb)
    folds = _fold_assignment(len(data), config.platt_folds, seed)
    return _train_binary_on_kernel(kernel, y, config, _make_fold_blocks(kernel, folds), vectors)


def _make_fold_blocks(kernel: RbfKernelMatrix, folds: np.ndarray) -> dict[int, tuple]:
    """Per-fold (train_idx, hold_idx, K_train_train, K_hold_train), shared by all classes."""
    blocks = {}
    for f in sorted(set(folds.tolist())):
        train_idx = np.flatnonzero(folds != f)
        hold_idx = np.flatnonzero(folds == f)
        blocks[f] = (
            train_idx,
            hold_idx,
            kernel.submatrix(train_idx, train_idx),
            kernel.submatrix(hold_idx, train_idx),
        )
    return blocks


def _train_binary_on_kernel(
    kernel: RbfKernelMatrix,
    y: np.ndarray,
    config: SvmConfig,
    fold_blocks: dict[int, tuple],
    vectors: list[SparseVector],
) -> BinarySvm:
    n = y.size
    max_iter = config.max_passes * n
    # Out-of-fold decision values for calibration.
    oof = np.zeros(n)
    for f, (train_idx, hold_idx, k_tr, k_cross) in fold_blocks.items():
        y_tr = y[train_idx]
        if not np.any(y_tr > 0) or not np.any(y_tr < 0):
            raise SvmTrainingError(
                f"calibration fold {f} leaves a single-label training subset; "
                "use more data or fewer folds"
            )
        alpha, bias, _ = smo_solve(_SubsetKernel(k_tr), y_tr, config.C, config.tol, max_iter)
        oof[hold_idx] = k_cross @ (alpha * y_tr) + bias
    platt_a, platt_b = fit_platt(oof, y)

    alpha, bias, _ = smo_solve(kernel, y, config.C, config.tol, max_iter)
    keep = np.flatnonzero(alpha > config.sv_threshold)
    return BinarySvm(
        support_vectors=[vectors[int(i)] for i in keep],
        alphas=alpha[keep].copy(),
        dual_coefs=(alpha[keep] * y[keep]).copy(),
        bias=bias,
        platt_a=platt_a,
        platt_b=platt_b,
    )


def fit_svm(
    vectors: list[SparseVector],
    labels: list[int],
    class_names: list[str],
    config: SvmConfig = SvmConfig(),
    seed: int = 42,
    tfidf: TfIdfModel | None = None,
    threads: int = 1,
) -> SvmModel:
    """Fit the one-vs-rest multi-class model over already-vectorized data.

    ``labels`` are indices into ``class_names``; every class must be present.
    The kernel matrix and CV fold blocks are shared across the per-class
    binaries, which train independently (optionally in parallel).
    """
    if tfidf is None:
        raise SvmTrainingError("fit_svm requires the TfIdfModel used to produce the vectors")
    y_idx = np.asarray(labels)
    for k in range(len(class_names)):
        if not np.any(y_idx == k):
            raise SvmTrainingError(f"class {class_names[k]!r} missing from training data")
    X = vectors_to_csr(vectors, tfidf.n_features)
    gamma = resolve_gamma(config, X)
    kernel = RbfKernelMatrix(X, gamma, config.cache_mb)
    folds = _fold_assignment(len(vectors), config.platt_folds, seed)
    fold_blocks = _make_fold_blocks(kernel, folds)

    def train_class(k: int) -> BinarySvm:
        y_bin = np.where(y_idx == k, 1.0, -1.0)
        return _train_binary_on_kernel(kernel, y_bin, config, fold_blocks, vectors)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            binaries = list(pool.map(train_class, range(len(class_names))))
    else:
        binaries = [train_class(k) for k in range(len(class_names))]
    return SvmModel(
        config=config,
        resolved_gamma=gamma,
        seed=seed,
        classes=list(class_names),
        binaries=binaries,
        tfidf=tfidf,
    )
