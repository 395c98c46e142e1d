"""Toy dataset generators, delimited-file loading, and seeded splits."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InputError, ParameterError, SizeError


@dataclass(frozen=True)
class Dataset:
    points: np.ndarray
    labels: np.ndarray | None
    name: str

    def __post_init__(self):
        if not np.isfinite(self.points).all():
            raise InputError(f"dataset {self.name!r} contains non-finite coordinates")
        if self.labels is not None and len(self.labels) != len(self.points):
            raise SizeError(
                f"{len(self.labels)} labels for {len(self.points)} points in {self.name!r}"
            )

    @property
    def n(self) -> int:
        return self.points.shape[0]


def make_circles(n: int, noise: float, radius_ratio: float = 0.5, seed: int = 0) -> Dataset:
    """Two concentric circles: ceil(n/2) points at radius 1 (label 0) and
    floor(n/2) at radius_ratio (label 1), evenly spaced, plus isotropic
    Gaussian noise of the given standard deviation."""
    if n < 2:
        raise SizeError(f"need n >= 2, got {n}")
    if not 0.0 < radius_ratio < 1.0:
        raise ParameterError(f"radius_ratio must be in (0, 1), got {radius_ratio}")
    if noise < 0:
        raise ParameterError(f"noise must be nonnegative, got {noise}")
    n_out = (n + 1) // 2
    n_in = n // 2
    t_out = np.linspace(0.0, 2.0 * math.pi, n_out, endpoint=False)
    t_in = np.linspace(0.0, 2.0 * math.pi, n_in, endpoint=False)
    points = np.vstack(
        [
            np.column_stack([np.cos(t_out), np.sin(t_out)]),
            radius_ratio * np.column_stack([np.cos(t_in), np.sin(t_in)]),
        ]
    )
    if noise > 0:
        points = points + np.random.default_rng(seed).normal(scale=noise, size=points.shape)
    labels = np.concatenate([np.zeros(n_out, dtype=int), np.ones(n_in, dtype=int)])
    return Dataset(points=points, labels=labels, name="circles")


def make_moons(n: int, noise: float, seed: int = 0) -> Dataset:
    """Two interleaving half-circle arcs with Gaussian noise, labeled by arc."""
    if n < 2:
        raise SizeError(f"need n >= 2, got {n}")
    if noise < 0:
        raise ParameterError(f"noise must be nonnegative, got {noise}")
    n_out = (n + 1) // 2
    n_in = n // 2
    t_out = np.linspace(0.0, math.pi, n_out)
    t_in = np.linspace(0.0, math.pi, n_in)
    points = np.vstack(
        [
            np.column_stack([np.cos(t_out), np.sin(t_out)]),
            np.column_stack([1.0 - np.cos(t_in), 1.0 - np.sin(t_in) - 0.5]),
        ]
    )
    if noise > 0:
        points = points + np.random.default_rng(seed).normal(scale=noise, size=points.shape)
    labels = np.concatenate([np.zeros(n_out, dtype=int), np.ones(n_in, dtype=int)])
    return Dataset(points=points, labels=labels, name="moons")


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def load_delimited(
    path,
    label_column: int | None = None,
    delimiter: str = ",",
    standardize: bool = False,
    name: str | None = None,
) -> Dataset:
    """Load a delimited numeric file, optionally taking one column as labels.

    A header row is auto-detected (non-numeric feature field in the first
    row). Labels may be arbitrary tokens; they are mapped to 0..K-1 in order
    of first appearance. With standardize=True every feature column is
    z-scored with the standard deviation floored at 1e-12.
    """
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh, delimiter=delimiter) if row]
    if not rows:
        raise InputError(f"{path}: empty file")
    width = len(rows[0])
    if label_column is not None and not -width <= label_column < width:
        raise ParameterError(f"label column {label_column} out of range for width {width}")
    label_idx = label_column % width if label_column is not None else None

    start = 0
    feature_fields = [f for j, f in enumerate(rows[0]) if j != label_idx]
    if any(not _is_number(f) for f in feature_fields):
        start = 1
        if len(rows) == 1:
            raise InputError(f"{path}: no data rows after header")

    points = []
    raw_labels = []
    for i, row in enumerate(rows[start:], start=start + 1):
        if len(row) != width:
            raise InputError(f"{path}: row {i} has {len(row)} fields, expected {width}")
        feats = []
        for j, field in enumerate(row):
            if j == label_idx:
                raw_labels.append(field.strip())
                continue
            try:
                feats.append(float(field))
            except ValueError:
                raise InputError(
                    f"{path}: row {i}, column {j + 1}: non-numeric feature {field!r}"
                ) from None
        points.append(feats)
    points = np.asarray(points, dtype=float)

    labels = None
    if label_idx is not None:
        seen: dict[str, int] = {}
        labels = np.array([seen.setdefault(tok, len(seen)) for tok in raw_labels], dtype=int)

    if standardize:
        std = points.std(axis=0)
        points = (points - points.mean(axis=0)) / np.maximum(std, 1e-12)

    return Dataset(points=points, labels=labels, name=name or str(path))


def save_delimited(dataset: Dataset, path, delimiter: str = ",") -> None:
    """Write points (and labels as a last column) losslessly via repr floats."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter)
        for i, row in enumerate(dataset.points):
            fields = [repr(float(v)) for v in row]
            if dataset.labels is not None:
                fields.append(str(int(dataset.labels[i])))
            writer.writerow(fields)


def train_test_split(data: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Seeded uniform split; train gets ceil((1 - test_fraction) * n) points."""
    if not 0.0 < test_fraction < 1.0:
        raise ParameterError(f"test_fraction must be in (0, 1), got {test_fraction}")
    if data.n < 2:
        raise SizeError(f"need at least 2 points to split, got {data.n}")
    perm = np.random.default_rng(seed).permutation(data.n)
    n_train = math.ceil((1.0 - test_fraction) * data.n)
    idx_train, idx_test = perm[:n_train], perm[n_train:]

    def take(idx, suffix):
        return Dataset(
            points=data.points[idx],
            labels=None if data.labels is None else data.labels[idx],
            name=f"{data.name}-{suffix}",
        )

    return take(idx_train, "train"), take(idx_test, "test")
