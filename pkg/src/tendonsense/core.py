"""Domain types shared by the whole pipeline, plus dataset assembly and slicing.

Row order is meaningful and preserved everywhere; all randomness downstream
comes from explicit seeds, never from iteration order. Labels compare by name;
the ordinal is a derived convenience fixed by the task's canonical class list.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyInputError,
    InconsistentFeaturesError,
    IndexOutOfRangeError,
    UnknownLabelError,
)

TEXTURE = "texture"
STIFFNESS = "stiffness"
TASKS = (TEXTURE, STIFFNESS)
MODES = ("FC", "AC")


@dataclass(frozen=True, order=True)
class ClassLabel:
    """One class of a discrimination task (texture plate or stiffness level)."""

    ordinal: int
    name: str

    def __str__(self) -> str:
        return self.name


def _make_labels(names: Sequence[str]) -> tuple[ClassLabel, ...]:
    return tuple(ClassLabel(i, n) for i, n in enumerate(names))


TEXTURE_LABELS = _make_labels(["F", "R1", "R2", "R3", "T1", "T2", "C1", "C2"])
STIFFNESS_LABELS = _make_labels(
    ["PLA", "RUBBER_SOLID", "RUBBER_SHELL", "SPONGE", "NONE"]
)


def task_labels(task: str) -> tuple[ClassLabel, ...]:
    """Canonical class list for a task, in ordinal order."""
    if task == TEXTURE:
        return TEXTURE_LABELS
    if task == STIFFNESS:
        return STIFFNESS_LABELS
    raise ValueError(f"unknown task {task!r}, expected one of {TASKS}")


def label_for(task: str, name: str) -> ClassLabel:
    """Look up a canonical label by name within one task."""
    for lab in task_labels(task):
        if lab.name == name:
            return lab
    raise UnknownLabelError(f"{name!r} is not a {task} class")


@dataclass(frozen=True, eq=False)
class StrainTrace:
    """One palpation trial: a uniformly sampled tendon-strain time series."""

    samples: np.ndarray
    sample_rate_hz: float = 60.0
    trial_kind: str = TEXTURE
    contact_mode: str = "FC"
    label: ClassLabel | None = None
    trial_id: str = ""
    seed: int | None = None

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise EmptyInputError("trace needs a nonempty 1-D sample sequence")
        if not np.all(np.isfinite(arr)):
            raise ValueError("trace samples must be finite")
        if not self.sample_rate_hz > 0:
            raise ValueError("sample_rate_hz must be positive")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return self.samples.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, StrainTrace):
            return NotImplemented
        return (
            np.array_equal(self.samples, other.samples)
            and self.sample_rate_hz == other.sample_rate_hz
            and self.trial_kind == other.trial_kind
            and self.contact_mode == other.contact_mode
            and self.label == other.label
            and self.trial_id == other.trial_id
            and self.seed == other.seed
        )

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz


@dataclass(frozen=True)
class FeatureVector:
    """Ordered numeric features with parallel names."""

    values: tuple[float, ...]
    names: tuple[str, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        names = tuple(str(n) for n in self.names)
        if len(values) != len(names):
            raise InconsistentFeaturesError(
                f"{len(values)} values but {len(names)} names"
            )
        if not all(np.isfinite(values)):
            raise ValueError("feature values must be finite")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "names", names)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Dataset:
    """Feature matrix with labels and provenance, rows in a fixed order."""

    rows: tuple[tuple[FeatureVector, ClassLabel], ...]
    feature_names: tuple[str, ...]
    task: str
    mode: str
    _matrix: np.ndarray = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.rows:
            mat = np.array([fv.values for fv, _ in self.rows], dtype=np.float64)
        else:
            mat = np.zeros((0, len(self.feature_names)))
        mat.flags.writeable = False
        object.__setattr__(self, "_matrix", mat)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def matrix(self) -> np.ndarray:
        """Row-major (n_rows, n_features) view of the feature values."""
        return self._matrix

    @property
    def labels(self) -> tuple[ClassLabel, ...]:
        return tuple(lab for _, lab in self.rows)

    def present_labels(self) -> tuple[ClassLabel, ...]:
        """Distinct labels, ordered by ordinal."""
        return tuple(sorted(set(self.labels)))

    def class_counts(self) -> dict[ClassLabel, int]:
        counts: dict[ClassLabel, int] = {}
        for _, lab in self.rows:
            counts[lab] = counts.get(lab, 0) + 1
        return counts


def build_dataset(
    rows: Iterable[tuple[FeatureVector, ClassLabel]], task: str, mode: str
) -> Dataset:
    """Assemble rows into a Dataset, checking that all share one name ordering."""
    rows = tuple(rows)
    if not rows:
        raise EmptyInputError("cannot build a dataset from zero rows")
    names = rows[0][0].names
    for i, (fv, _) in enumerate(rows):
        if fv.names != names:
            raise InconsistentFeaturesError(
                f"row {i} feature names differ from row 0"
            )
    return Dataset(rows=rows, feature_names=names, task=task, mode=mode)


def split_by_indices(ds: Dataset, test_idx: Iterable[int]) -> tuple[Dataset, Dataset]:
    """Partition rows into (train, test) by row index, preserving order.

    test_idx may be empty, in which case the test set has no rows and its
    Dataset is built with the parent's feature names.
    """
    test_set = set(int(i) for i in test_idx)
    n = len(ds.rows)
    for i in test_set:
        if i < 0 or i >= n:
            raise IndexOutOfRangeError(f"row index {i} outside [0, {n})")
    train_rows = tuple(r for i, r in enumerate(ds.rows) if i not in test_set)
    test_rows = tuple(r for i, r in enumerate(ds.rows) if i in test_set)
    train = Dataset(train_rows, ds.feature_names, ds.task, ds.mode)
    test = Dataset(test_rows, ds.feature_names, ds.task, ds.mode)
    return train, test


def values_for(ds: Dataset, feature_index: int, label: ClassLabel) -> np.ndarray:
    """Values of one feature over exactly the rows with `label`, in row order."""
    if feature_index < 0 or feature_index >= len(ds.feature_names):
        raise IndexOutOfRangeError(
            f"feature index {feature_index} outside [0, {len(ds.feature_names)})"
        )
    mask = [lab.name == label.name for _, lab in ds.rows]
    if not any(mask):
        raise UnknownLabelError(f"label {label.name!r} not present in dataset")
    return ds.matrix[mask, feature_index]
