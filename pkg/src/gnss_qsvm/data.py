"""Sample schema, CSV ingestion, min-max scaling, and synthetic datasets.

Each sample pairs the RHCP-LHCP carrier-to-noise density difference (dB-Hz)
with the satellite elevation angle (degrees) and one of three reception
labels. The synthetic generator stands in for field recordings that are not
publicly available: class counts follow the preset shapes, while the value
distributions are domain-plausible inventions (reflections flip circular
polarization, so LOS has a strongly positive C/N0 difference and NLOS sits
near zero or below).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CsvParseError, DegenerateDataError
from .sim import mask_seed

LABELS = ("LOS", "NLOS", "LOS_NLOS")

CSV_HEADER = ["cn0_diff", "elevation_deg", "label"]

T0_SHAPE = "T0_SHAPE"
T1_SHAPE = "T1_SHAPE"
T2_SHAPE = "T2_SHAPE"
PRESETS = (T0_SHAPE, T1_SHAPE, T2_SHAPE)

_PRESET_COUNTS = {
    T0_SHAPE: {"LOS": 80, "NLOS": 40, "LOS_NLOS": 32},
    T1_SHAPE: {"LOS": 23, "NLOS": 10, "LOS_NLOS": 8},
    T2_SHAPE: {"LOS": 80, "NLOS": 10, "LOS_NLOS": 30},
}

# label -> (cn0 mean, cn0 std, elevation low, elevation high)
_CLASS_DISTRIBUTIONS = {
    "LOS": (8.0, 2.0, 30.0, 90.0),
    "NLOS": (-3.0, 2.0, 5.0, 45.0),
    "LOS_NLOS": (2.0, 2.5, 10.0, 60.0),
}


@dataclass(frozen=True)
class SignalSample:
    cn0_diff: float
    elevation: float
    label: str

    def __post_init__(self):
        if not math.isfinite(self.cn0_diff):
            raise ValueError(f"cn0_diff must be finite, got {self.cn0_diff}")
        if not 0.0 <= self.elevation <= 90.0:
            raise ValueError(
                f"elevation {self.elevation} out of [0, 90] degrees"
            )
        if self.label not in LABELS:
            raise ValueError(f"unknown label {self.label!r}")


@dataclass(eq=False)
class Dataset:
    samples: list[SignalSample]
    name: str = ""

    def __len__(self) -> int:
        return len(self.samples)

    def features(self) -> np.ndarray:
        """n x 2 matrix with columns (cn0_diff, elevation)."""
        return np.array([[s.cn0_diff, s.elevation] for s in self.samples], dtype=float)

    def labels(self) -> list[str]:
        return [s.label for s in self.samples]

    def class_counts(self) -> dict[str, int]:
        counts = {label: 0 for label in LABELS}
        for s in self.samples:
            counts[s.label] += 1
        return counts


@dataclass(eq=False)
class ScalerParams:
    data_min: np.ndarray
    data_max: np.ndarray
    target_lo: float = 0.0
    target_hi: float = 1.0


def load_csv(path) -> Dataset:
    """Parse a sample CSV; schema errors name the offending line."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise CsvParseError(f"{path}: empty file")
    if rows[0] != CSV_HEADER:
        raise CsvParseError(
            f"{path}:1: bad header {','.join(rows[0])!r}, "
            f"expected {','.join(CSV_HEADER)!r}"
        )
    samples = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 3:
            raise CsvParseError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
        try:
            cn0 = float(row[0])
        except ValueError:
            raise CsvParseError(
                f"{path}:{lineno}: unparsable cn0_diff {row[0]!r}"
            ) from None
        try:
            elevation = float(row[1])
        except ValueError:
            raise CsvParseError(
                f"{path}:{lineno}: unparsable elevation_deg {row[1]!r}"
            ) from None
        if row[2] not in LABELS:
            raise CsvParseError(f"{path}:{lineno}: unknown label {row[2]!r}")
        try:
            samples.append(SignalSample(cn0, elevation, row[2]))
        except ValueError as exc:
            raise CsvParseError(f"{path}:{lineno}: {exc}") from None
    if not samples:
        raise CsvParseError(f"{path}: no data rows")
    return Dataset(samples=samples, name=path.stem)


def write_csv(dataset: Dataset, path) -> None:
    """Writer counterpart of load_csv; floats use repr for exact round trips."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(CSV_HEADER) + "\n")
        for s in dataset.samples:
            fh.write(f"{float(s.cn0_diff)!r},{float(s.elevation)!r},{s.label}\n")


def fit_scaler(train: Dataset, target_lo: float = 0.0, target_hi: float = 1.0) -> ScalerParams:
    """Record per-feature min/max from the training set only."""
    if not train.samples:
        raise ValueError("cannot fit a scaler on an empty dataset")
    if not target_hi > target_lo:
        raise ValueError(
            f"target_hi must exceed target_lo, got [{target_lo}, {target_hi}]"
        )
    X = train.features()
    data_min = X.min(axis=0)
    data_max = X.max(axis=0)
    for col, name in enumerate(("cn0_diff", "elevation")):
        if data_max[col] <= data_min[col]:
            raise DegenerateDataError(
                f"feature {name!r} is constant ({data_min[col]!r}); cannot scale"
            )
    return ScalerParams(data_min, data_max, float(target_lo), float(target_hi))


def apply_scaler(params: ScalerParams, data) -> np.ndarray:
    """Linear per-feature map onto [target_lo, target_hi].

    Values outside the fitted range are not clamped and land outside the
    target interval.
    """
    X = data.features() if isinstance(data, Dataset) else np.asarray(data, dtype=float)
    span = params.data_max - params.data_min
    scale = (params.target_hi - params.target_lo) / span
    return params.target_lo + (X - params.data_min) * scale


def generate_synthetic(preset: str, seed: int = 0) -> Dataset:
    """Seeded synthetic dataset with the preset's exact class counts.

    The generator stream is keyed on (seed, preset) so datasets drawn from
    different presets with the same seed share no samples.
    """
    if preset not in _PRESET_COUNTS:
        raise ValueError(f"unknown preset {preset!r}, expected one of {PRESETS}")
    rng = np.random.default_rng([mask_seed(seed), PRESETS.index(preset)])
    samples = []
    for label in LABELS:
        count = _PRESET_COUNTS[preset][label]
        mean, std, elo, ehi = _CLASS_DISTRIBUTIONS[label]
        cn0 = rng.normal(mean, std, size=count)
        elevation = np.clip(rng.uniform(elo, ehi, size=count), 0.0, 90.0)
        samples.extend(
            SignalSample(float(c), float(e), label) for c, e in zip(cn0, elevation)
        )
    return Dataset(samples=samples, name=preset)
