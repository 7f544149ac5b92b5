"""Second-order (ZZ-interaction) feature map circuits.

A feature vector x is encoded by repeating, per repetition: a Hadamard
layer, single-qubit phases 2*x_i, and for each entangled pair (i, j) the
block CX(i->j), PHASE(2*(pi - x_i)*(pi - x_j)) on j, CX(i->j). One qubit
per feature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .sim import Circuit, QuantumState, cnot, hadamard, phase, run_circuit, zero_state

ENTANGLEMENTS = ("full", "linear")


@dataclass(frozen=True)
class FeatureMapConfig:
    num_features: int
    repetitions: int = 2
    entanglement: str = "full"

    def __post_init__(self):
        if self.num_features < 1:
            raise ValueError(f"num_features must be >= 1, got {self.num_features}")
        if self.repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {self.repetitions}")
        if self.entanglement not in ENTANGLEMENTS:
            raise ValueError(
                f"entanglement must be one of {ENTANGLEMENTS}, got "
                f"{self.entanglement!r}"
            )

    def pairs(self) -> list[tuple[int, int]]:
        """Qubit pairs receiving an entangling block, enumerated i < j."""
        n = self.num_features
        if self.entanglement == "full":
            return [(i, j) for i in range(n) for j in range(i + 1, n)]
        return [(i, i + 1) for i in range(n - 1)]


@dataclass(eq=False)
class PhaseSet:
    """Data-derived phases: one per qubit, one per unordered qubit pair."""

    single: np.ndarray
    pairwise: dict[tuple[int, int], float]


def compute_phases(x) -> PhaseSet:
    """phi_i = x_i and phi_ij = (pi - x_i) * (pi - x_j) for all i < j."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError(f"feature vector must be 1-D, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("feature values must be finite")
    n = x.shape[0]
    pairwise = {
        (i, j): float((math.pi - x[i]) * (math.pi - x[j]))
        for i in range(n)
        for j in range(i + 1, n)
    }
    return PhaseSet(single=x.copy(), pairwise=pairwise)


def build_circuit(x, config: FeatureMapConfig) -> Circuit:
    """Feature map circuit for ``x``; deterministic gate-for-gate."""
    x = np.asarray(x, dtype=float)
    if x.shape != (config.num_features,):
        raise DimensionError(
            f"expected {config.num_features} feature(s), got shape {x.shape}"
        )
    phases = compute_phases(x)
    n = config.num_features
    gates = []
    for _ in range(config.repetitions):
        for q in range(n):
            gates.append(hadamard(q))
        for q in range(n):
            gates.append(phase(2.0 * phases.single[q], q))
        for i, j in config.pairs():
            gates.append(cnot(i, j))
            gates.append(phase(2.0 * phases.pairwise[(i, j)], j))
            gates.append(cnot(i, j))
    return Circuit(n, gates)


def map_to_state(x, config: FeatureMapConfig) -> QuantumState:
    """Run the feature map circuit on |0...0>."""
    return run_circuit(build_circuit(x, config), zero_state(config.num_features))
