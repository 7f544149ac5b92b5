"""Accuracy, confusion matrices, and decision-boundary grids."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .data import ScalerParams
from .svm import SvmModel, predict


@dataclass(eq=False)
class EvalReport:
    accuracy: float
    confusion: np.ndarray
    classes: list
    n_total: int


@dataclass(eq=False)
class BoundaryGrid:
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    resolution: int
    cells: np.ndarray  # cells[i][j] = label at (x centers[j], y centers[i])


def accuracy(predictions, truth) -> float:
    """Fraction of predictions matching the truth labels."""
    predictions = list(predictions)
    truth = list(truth)
    if len(predictions) != len(truth):
        raise ValueError(
            f"{len(predictions)} prediction(s) vs {len(truth)} truth label(s)"
        )
    if not truth:
        raise ValueError("cannot score an empty label set")
    matches = sum(p == t for p, t in zip(predictions, truth))
    return matches / len(truth)


def confusion(predictions, truth, classes) -> np.ndarray:
    """Count matrix with rows = truth class, columns = predicted class."""
    classes = list(classes)
    index = {c: i for i, c in enumerate(classes)}
    matrix = np.zeros((len(classes), len(classes)), dtype=int)
    for p, t in zip(list(predictions), list(truth), strict=True):
        if t not in index:
            raise ValueError(f"truth label {t!r} not in class list")
        if p not in index:
            raise ValueError(f"predicted label {p!r} not in class list")
        matrix[index[t], index[p]] += 1
    return matrix


def make_report(predictions, truth, classes) -> EvalReport:
    matrix = confusion(predictions, truth, classes)
    return EvalReport(
        accuracy=accuracy(predictions, truth),
        confusion=matrix,
        classes=list(classes),
        n_total=int(matrix.sum()),
    )


def grid_centers(lo: float, hi: float, resolution: int) -> np.ndarray:
    """Centers of ``resolution`` uniform cells covering [lo, hi]."""
    step = (hi - lo) / resolution
    return lo + (np.arange(resolution) + 0.5) * step


def boundary_grid(model: SvmModel, scaler: ScalerParams, resolution: int) -> BoundaryGrid:
    """Predict every cell center of a resolution x resolution lattice over
    the scaled feature square [target_lo, target_hi]^2."""
    if model.training_features.shape[1] != 2:
        raise ValueError(
            f"boundary grids need a 2-feature model, got "
            f"{model.training_features.shape[1]} feature(s)"
        )
    if resolution < 1:
        raise ValueError(f"resolution must be >= 1, got {resolution}")
    lo, hi = scaler.target_lo, scaler.target_hi
    centers = grid_centers(lo, hi, resolution)
    points = np.column_stack(
        [np.tile(centers, resolution), np.repeat(centers, resolution)]
    )
    labels = predict(model, points)
    cells = np.array(labels, dtype=object).reshape(resolution, resolution)
    return BoundaryGrid(
        x_range=(lo, hi), y_range=(lo, hi), resolution=resolution, cells=cells
    )


def save_grid_csv(grid: BoundaryGrid, path) -> None:
    """Row-major cell centers with header x,y,label."""
    xs = [float(v) for v in grid_centers(grid.x_range[0], grid.x_range[1], grid.resolution)]
    ys = [float(v) for v in grid_centers(grid.y_range[0], grid.y_range[1], grid.resolution)]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,y,label\n")
        for i, y in enumerate(ys):
            for j, x in enumerate(xs):
                fh.write(f"{x!r},{y!r},{grid.cells[i, j]}\n")


def report_to_dict(report: EvalReport, config_echo: dict | None = None,
                   convergence_warnings: list | None = None) -> dict:
    doc = {
        "accuracy": float(report.accuracy),
        "classes": list(report.classes),
        "confusion": report.confusion.tolist(),
        "n_total": int(report.n_total),
    }
    if config_echo is not None:
        doc["config"] = config_echo
    if convergence_warnings is not None:
        doc["convergence_warnings"] = list(convergence_warnings)
    return doc


def save_report(report: EvalReport, path, config_echo: dict | None = None,
                convergence_warnings: list | None = None) -> None:
    """Deterministic JSON (sorted keys, no timestamps) so identical runs
    produce byte-identical files."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(
            report_to_dict(report, config_echo, convergence_warnings),
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")


def save_confusion_csv(report: EvalReport, path) -> None:
    """Confusion counts with truth classes as rows, predictions as columns."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("truth\\prediction," + ",".join(str(c) for c in report.classes) + "\n")
        for i, c in enumerate(report.classes):
            row = ",".join(str(int(v)) for v in report.confusion[i])
            fh.write(f"{c},{row}\n")
