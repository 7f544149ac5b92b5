"""Kernel evaluations and Gram-matrix assembly.

Three modes: exact fidelity (statevector), shot-sampled fidelity via the
compute-uncompute circuit, and a classical RBF baseline. Sampled entries
derive their seed from (master seed, row index, column index), so matrices
are reproducible regardless of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDataError, DimensionError
from .feature_map import FeatureMapConfig, build_circuit, map_to_state
from .sim import (
    inverse_circuit,
    mask_seed,
    run_circuit,
    sample_counts,
    zero_probability,
    zero_state,
)

FIDELITY_EXACT = "fidelity_exact"
FIDELITY_SAMPLED = "fidelity_sampled"
RBF = "rbf"
KERNEL_MODES = (FIDELITY_EXACT, FIDELITY_SAMPLED, RBF)


@dataclass(frozen=True)
class KernelConfig:
    mode: str
    feature_map: FeatureMapConfig = field(default=FeatureMapConfig(num_features=2))
    shots: int = 1000
    seed: int = 0
    gamma: float | None = None

    def __post_init__(self):
        if self.mode not in KERNEL_MODES:
            raise ValueError(f"mode must be one of {KERNEL_MODES}, got {self.mode!r}")
        if self.mode == FIDELITY_SAMPLED and self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")
        if self.gamma is not None and not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


@dataclass(eq=False)
class KernelMatrix:
    rows: int
    cols: int
    values: np.ndarray
    symmetric: bool


def _as_features(x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError(f"{name} must be a 1-D feature vector, got shape {x.shape}")
    return x


def _check_same_length(x: np.ndarray, y: np.ndarray) -> None:
    if x.shape != y.shape:
        raise DimensionError(f"feature lengths differ: {x.shape[0]} vs {y.shape[0]}")


def _uncompute_state(x, y, fm: FeatureMapConfig):
    """State U(y)^-1 U(x) |0...0>; its all-zeros probability is the fidelity."""
    state = run_circuit(build_circuit(x, fm), zero_state(fm.num_features))
    return run_circuit(inverse_circuit(build_circuit(y, fm)), state)


def fidelity_exact(x, y, fm: FeatureMapConfig) -> float:
    """|<0...0| U(y)^-1 U(x) |0...0>|^2 via the compute-uncompute circuit."""
    x = _as_features(x, "x")
    y = _as_features(y, "y")
    _check_same_length(x, y)
    p = zero_probability(_uncompute_state(x, y, fm))
    return min(max(p, 0.0), 1.0)


def fidelity_sampled(x, y, fm: FeatureMapConfig, shots: int, seed: int) -> float:
    """Shot estimate of the fidelity: fraction of all-zeros outcomes when
    sampling the compute-uncompute circuit."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    x = _as_features(x, "x")
    y = _as_features(y, "y")
    _check_same_length(x, y)
    counts = sample_counts(_uncompute_state(x, y, fm), shots, seed)
    zeros = counts.get("0" * fm.num_features, 0)
    return zeros / shots


def rbf(x, y, gamma: float) -> float:
    """exp(-gamma * ||x - y||^2)."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    x = _as_features(x, "x")
    y = _as_features(y, "y")
    _check_same_length(x, y)
    return float(np.exp(-gamma * np.sum((x - y) ** 2)))


def default_gamma(X) -> float:
    """1 / (n_features * var), var pooled over every entry of X.

    Mirrors the untuned "scale" default of common SVM toolkits.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.size == 0:
        raise ValueError(f"X must be a non-empty 2-D feature matrix, got shape {X.shape}")
    var = float(X.var())
    if var <= 0.0:
        raise DegenerateDataError("feature matrix is constant; gamma undefined")
    return 1.0 / (X.shape[1] * var)


def pair_seed(master_seed: int, i: int, j: int) -> int:
    """Deterministic per-entry seed derived from the master seed and the
    (row, column) indices, independent of evaluation order."""
    ss = np.random.SeedSequence([mask_seed(master_seed), int(i), int(j)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _feature_matrix(X, name: str) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise DimensionError(f"{name} must be a non-empty 2-D matrix, got shape {X.shape}")
    return X


def _check_feature_dim(cfg: KernelConfig, d: int) -> None:
    if cfg.mode in (FIDELITY_EXACT, FIDELITY_SAMPLED):
        if cfg.feature_map.num_features != d:
            raise DimensionError(
                f"feature map encodes {cfg.feature_map.num_features} feature(s) "
                f"but data has {d}"
            )
    elif cfg.gamma is None:
        raise ValueError("rbf mode requires gamma; resolve it via default_gamma")


def _statevectors(X: np.ndarray, fm: FeatureMapConfig) -> np.ndarray:
    return np.array([map_to_state(x, fm).amplitudes for x in X])


def _sq_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return ((A[:, None, :] - B[None, :, :]) ** 2).sum(axis=-1)


def gram_symmetric(X, cfg: KernelConfig) -> KernelMatrix:
    """Training Gram matrix: upper triangle computed once per unordered
    pair, mirrored to the lower triangle, diagonal pinned to exactly 1.0
    (no shots spent on it)."""
    X = _feature_matrix(X, "X")
    n, d = X.shape
    _check_feature_dim(cfg, d)

    if cfg.mode == FIDELITY_SAMPLED:
        K = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                K[i, j] = fidelity_sampled(
                    X[i], X[j], cfg.feature_map, cfg.shots,
                    pair_seed(cfg.seed, i, j),
                )
    else:
        if cfg.mode == FIDELITY_EXACT:
            sv = _statevectors(X, cfg.feature_map)
            full = np.clip(np.abs(sv.conj() @ sv.T) ** 2, 0.0, 1.0)
        else:
            full = np.exp(-cfg.gamma * _sq_distances(X, X))
        K = np.triu(full, k=1)

    K = K + K.T
    np.fill_diagonal(K, 1.0)
    return KernelMatrix(rows=n, cols=n, values=K, symmetric=True)


def gram_rectangular(X_test, X_train, cfg: KernelConfig) -> KernelMatrix:
    """Prediction-time block: values[i][j] = k(X_test[i], X_train[j])."""
    X_test = _feature_matrix(X_test, "X_test")
    X_train = _feature_matrix(X_train, "X_train")
    if X_test.shape[1] != X_train.shape[1]:
        raise DimensionError(
            f"feature dimensions differ: {X_test.shape[1]} vs {X_train.shape[1]}"
        )
    _check_feature_dim(cfg, X_train.shape[1])

    if cfg.mode == FIDELITY_SAMPLED:
        m, n = X_test.shape[0], X_train.shape[0]
        K = np.zeros((m, n))
        for i in range(m):
            for j in range(n):
                K[i, j] = fidelity_sampled(
                    X_test[i], X_train[j], cfg.feature_map, cfg.shots,
                    pair_seed(cfg.seed, i, j),
                )
    elif cfg.mode == FIDELITY_EXACT:
        sv_test = _statevectors(X_test, cfg.feature_map)
        sv_train = _statevectors(X_train, cfg.feature_map)
        K = np.clip(np.abs(sv_test.conj() @ sv_train.T) ** 2, 0.0, 1.0)
    else:
        K = np.exp(-cfg.gamma * _sq_distances(X_test, X_train))

    return KernelMatrix(rows=K.shape[0], cols=K.shape[1], values=K, symmetric=False)


def save_kernel_csv(matrix: KernelMatrix, path) -> None:
    """Write the full matrix row-major, 17 significant digits per entry."""
    with open(path, "w", encoding="utf-8") as fh:
        for row in matrix.values:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
