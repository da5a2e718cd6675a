"""Repeated stratified k-fold cross-validation and accuracy reporting.

Fold plans shuffle each class's row indices with a seeded generator and deal
them round-robin, so folds partition the dataset exactly and per-class counts
differ by at most one. Run r of a repeated validation uses seed + r: the ten
runs differ but the whole report is reproducible. Standardization is fit on
each fold's training rows only; no validation row ever influences its own
fold's scaler or model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    ClassLabel,
    Dataset,
    split_by_indices,
)
from .errors import LengthMismatchError, TooFewPerClassError
from .features import extract_dataset
from .learn import ClassifierSpec, standardize_apply, standardize_fit
from .simulator import SimConfig, generate_corpus


@dataclass(frozen=True)
class FoldPlan:
    """A stratified exact partition of row indices into k folds."""

    k: int
    folds: tuple[tuple[int, ...], ...]
    seed: int


def make_folds(ds: Dataset, k: int = 6, seed: int = 0) -> FoldPlan:
    """Shuffle each class's indices and deal them round-robin into k folds."""
    counts = ds.class_counts()
    for lab, count in counts.items():
        if count < k:
            raise TooFewPerClassError(
                f"class {lab.name} has {count} rows, fewer than k={k}"
            )
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    for lab in ds.present_labels():
        idx = [i for i, (_, row_lab) in enumerate(ds.rows) if row_lab.name == lab.name]
        perm = rng.permutation(len(idx))
        for pos, j in enumerate(perm):
            folds[pos % k].append(idx[j])
    return FoldPlan(
        k=k,
        folds=tuple(tuple(sorted(f)) for f in folds),
        seed=seed,
    )


def accuracy(predictions, truths) -> float:
    predictions = list(predictions)
    truths = list(truths)
    if len(predictions) != len(truths) or not predictions:
        raise LengthMismatchError(
            f"{len(predictions)} predictions vs {len(truths)} truths"
        )
    hits = sum(1 for p, t in zip(predictions, truths) if p.name == t.name)
    return hits / len(truths)


def confusion(predictions, truths, labels) -> tuple[tuple[int, ...], ...]:
    """Counts[i][j] = rows of true class i predicted as class j."""
    predictions = list(predictions)
    truths = list(truths)
    if len(predictions) != len(truths):
        raise LengthMismatchError(
            f"{len(predictions)} predictions vs {len(truths)} truths"
        )
    index = {lab.name: i for i, lab in enumerate(labels)}
    mat = [[0] * len(labels) for _ in labels]
    for p, t in zip(predictions, truths):
        mat[index[t.name]][index[p.name]] += 1
    return tuple(tuple(row) for row in mat)


@dataclass(frozen=True)
class CvReport:
    """Outcome of one repeated k-fold validation of one model."""

    model_name: str
    k: int
    runs: int
    seed: int
    labels: tuple[ClassLabel, ...]
    run_accuracies: tuple[float, ...]
    fold_accuracies: tuple[tuple[float, ...], ...]
    mean_accuracy: float
    confusion: tuple[tuple[int, ...], ...]  # summed over all validation folds


def cross_validate(
    ds: Dataset, spec: ClassifierSpec, k: int = 6, runs: int = 10, seed: int = 0
) -> CvReport:
    """Repeated stratified k-fold validation of one classifier spec."""
    labels = ds.present_labels()
    total = [[0] * len(labels) for _ in labels]
    run_accs: list[float] = []
    fold_accs: list[tuple[float, ...]] = []
    for r in range(runs):
        plan = make_folds(ds, k=k, seed=seed + r)
        per_fold: list[float] = []
        for fold in plan.folds:
            train, test = split_by_indices(ds, fold)
            scaler = standardize_fit(train)
            train_z = standardize_apply(scaler, train)
            test_z = standardize_apply(scaler, test)
            model = spec.fit(train_z)
            preds = [model.predict(fv.values) for fv, _ in test_z.rows]
            truths = [lab for _, lab in test_z.rows]
            per_fold.append(accuracy(preds, truths))
            for i, row in enumerate(confusion(preds, truths, labels)):
                for j, v in enumerate(row):
                    total[i][j] += v
        run_accs.append(sum(per_fold) / len(per_fold))
        fold_accs.append(tuple(per_fold))
    return CvReport(
        model_name=spec.name,
        k=k,
        runs=runs,
        seed=seed,
        labels=labels,
        run_accuracies=tuple(run_accs),
        fold_accuracies=tuple(fold_accs),
        mean_accuracy=sum(run_accs) / len(run_accs),
        confusion=tuple(tuple(row) for row in total),
    )


@dataclass(frozen=True)
class CorpusConfig:
    """Knobs for one full simulate-extract-validate experiment."""

    trials_per_class: int = 60
    sim: SimConfig = SimConfig()
    seed: int = 7
    k: int = 6
    runs: int = 10


@dataclass(frozen=True)
class GroupResult:
    task: str
    mode: str
    reports: tuple[CvReport, ...]


@dataclass(frozen=True)
class ExperimentReport:
    """All (task, mode) groups crossed with all requested models."""

    groups: tuple[GroupResult, ...]

    def mean_accuracy(self, task: str, mode: str, model_name: str) -> float:
        for group in self.groups:
            if group.task == task and group.mode == mode:
                for report in group.reports:
                    if report.model_name == model_name:
                        return report.mean_accuracy
        raise KeyError(f"no report for ({task}, {mode}, {model_name})")

    def summary_rows(self) -> list[tuple[str, str, str, float]]:
        return [
            (g.task, g.mode, rep.model_name, rep.mean_accuracy)
            for g in self.groups
            for rep in g.reports
        ]


def run_experiment(cfg: CorpusConfig, specs: list[ClassifierSpec]) -> ExperimentReport:
    """Simulate, extract and cross-validate every (task, mode) x model cell."""
    groups = []
    for task in ("texture", "stiffness"):
        for mode in ("FC", "AC"):
            traces = generate_corpus(task, mode, cfg.trials_per_class, cfg.sim, cfg.seed)
            ds = extract_dataset(traces)
            reports = tuple(
                cross_validate(ds, spec, k=cfg.k, runs=cfg.runs, seed=cfg.seed)
                for spec in specs
            )
            groups.append(GroupResult(task=task, mode=mode, reports=reports))
    return ExperimentReport(groups=tuple(groups))
