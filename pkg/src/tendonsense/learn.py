"""The four classifiers behind one fit/predict contract, plus standardization.

All training is deterministic: KNN stores rows, the decision tree scans
features and thresholds in a fixed order, and the SVM's pairwise dual solver
sweeps candidate points in row order with no random second-choice. Every tie
rule (nearest-neighbor distance ties, vote ties, equal-impurity splits) is
resolved explicitly so repeated runs are bit-identical.

Feature standardization is fit on training rows only; the cross-validation
harness applies it inside the fold loop to keep validation rows out of the
scaler.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import ClassLabel, Dataset, FeatureVector
from .errors import (
    DimensionMismatchError,
    EmptyInputError,
    NonFiniteError,
    SingleClassError,
)

LINEAR = "linear"
RBF = "rbf"

KKT_TOL = 1e-3
STEP_EPS = 1e-3
STD_FLOOR = 1e-12

MODEL_NAMES = ("knn", "svm-linear", "svm-rbf", "dtree")


# ---------------------------------------------------------------------------
# standardization

@dataclass(frozen=True)
class Standardizer:
    """Per-feature z-score parameters fitted on training rows only."""

    means: tuple[float, ...]
    stds: tuple[float, ...]

    def transform(self, x: np.ndarray) -> np.ndarray:
        return (x - np.asarray(self.means)) / np.asarray(self.stds)


def standardize_fit(train: Dataset) -> Standardizer:
    if len(train) == 0:
        raise EmptyInputError("cannot fit a standardizer on zero rows")
    x = train.matrix
    means = x.mean(axis=0)
    stds = np.maximum(x.std(axis=0), STD_FLOOR)
    return Standardizer(means=tuple(means.tolist()), stds=tuple(stds.tolist()))


def standardize_apply(s: Standardizer, ds: Dataset) -> Dataset:
    if len(s.means) != len(ds.feature_names):
        raise DimensionMismatchError(
            f"standardizer has {len(s.means)} features, dataset {len(ds.feature_names)}"
        )
    if len(ds) == 0:
        return ds
    z = s.transform(ds.matrix)
    rows = tuple(
        (FeatureVector(values=tuple(row.tolist()), names=ds.feature_names), lab)
        for row, (_, lab) in zip(z, ds.rows)
    )
    return Dataset(rows, ds.feature_names, ds.task, ds.mode)


def _query_vector(x, dim: int) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64).reshape(-1)
    if arr.size != dim:
        raise DimensionMismatchError(f"query has {arr.size} features, model expects {dim}")
    return arr


# ---------------------------------------------------------------------------
# k-nearest neighbors

@dataclass(frozen=True, eq=False)
class KnnModel:
    """Memorized training rows with majority voting over the k nearest."""

    x: np.ndarray
    labels: tuple[ClassLabel, ...]
    k: int = 3

    def predict(self, query) -> ClassLabel:
        return knn_predict(self, query)


def knn_train(train: Dataset, k: int = 3) -> KnnModel:
    if len(train) == 0:
        raise EmptyInputError("KNN needs at least one training row")
    if not 1 <= k <= len(train):
        raise ValueError(f"k={k} outside [1, {len(train)}]")
    return KnnModel(x=train.matrix, labels=train.labels, k=k)


def knn_predict(model: KnnModel, query) -> ClassLabel:
    """Majority label among the k nearest rows by Euclidean distance.

    Equal distances rank by lower training-row index (stable sort); a vote
    tie goes to whichever tied class owns the best-ranked neighbor.
    """
    q = _query_vector(query, model.x.shape[1])
    d2 = ((model.x - q) ** 2).sum(axis=1)
    order = np.argsort(d2, kind="stable")[: model.k]
    votes: dict[str, int] = {}
    for i in order:
        name = model.labels[i].name
        votes[name] = votes.get(name, 0) + 1
    top = max(votes.values())
    tied = {name for name, v in votes.items() if v == top}
    if len(tied) > 1:
        for i in order:
            if model.labels[i].name in tied:
                return model.labels[i]
    for i in order:
        if model.labels[i].name in tied:
            return model.labels[i]
    raise AssertionError("unreachable: some neighbor must carry the top vote")


# ---------------------------------------------------------------------------
# support vector machine (one-vs-one, SMO-style dual solver)

@dataclass(frozen=True, eq=False)
class PairSvm:
    """Soft-margin binary SVM for one class pair; +1 is the lower ordinal."""

    label_pos: ClassLabel
    label_neg: ClassLabel
    support_indices: tuple[int, ...]  # row indices into the training dataset
    support_x: np.ndarray
    support_coef: np.ndarray  # alpha_i * y_i for support rows
    bias: float
    kernel: str
    gamma: float
    alphas: np.ndarray  # full dual vector over the pair's rows, for audits
    y: np.ndarray

    def decision(self, query: np.ndarray) -> float:
        k = _kernel_vector(self.kernel, self.gamma, self.support_x, query)
        return float(self.support_coef @ k + self.bias)


@dataclass(frozen=True, eq=False)
class SvmModel:
    """One-vs-one multiclass SVM: one PairSvm per unordered class pair."""

    kernel: str
    c: float
    labels: tuple[ClassLabel, ...]
    pairs: tuple[PairSvm, ...]
    n_features: int

    def predict(self, query) -> ClassLabel:
        return svm_predict(self, query)


def _kernel_matrix(kernel: str, gamma: float, x: np.ndarray) -> np.ndarray:
    if kernel == LINEAR:
        return x @ x.T
    sq = (x * x).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    return np.exp(-gamma * np.maximum(d2, 0.0))


def _kernel_vector(kernel: str, gamma: float, x: np.ndarray, q: np.ndarray) -> np.ndarray:
    if kernel == LINEAR:
        return x @ q
    d2 = ((x - q) ** 2).sum(axis=1)
    return np.exp(-gamma * d2)


def _auto_gamma(x: np.ndarray) -> float:
    mean_var = float(x.var(axis=0).mean())
    return 1.0 / (x.shape[1] * max(mean_var, STD_FLOOR))


class _SmoSolver:
    """Sequential pairwise optimization of the soft-margin dual.

    Each iteration updates one violating pair chosen by the second-order
    rule: the first point maximizes the ascent score s_i = y_i - f_hat(x_i)
    over the "up" set (alpha may grow), the partner maximizes the guaranteed
    objective gain gap^2/curvature over the "down" set (alpha may shrink).
    Ties break on the lowest index, so training is deterministic given row
    order. Converged when the up/down violation gap falls below the KKT
    tolerance, with a hard cap of 10n updates.
    """

    def __init__(self, k: np.ndarray, y: np.ndarray, c: float):
        self.k = k
        self.y = y.astype(np.float64)
        self.c = c
        self.n = y.size
        self.alpha = np.zeros(self.n)
        self.b = 0.0
        # score_i = y_i - f_hat(x_i); bias-free, so pair updates never need b
        self.scores = self.y.copy()
        self.diag = np.ascontiguousarray(np.diagonal(k)).astype(np.float64)

    def _masks(self) -> tuple[np.ndarray, np.ndarray]:
        pos, neg = self.y > 0, self.y < 0
        free_up = self.alpha < self.c
        free_down = self.alpha > 0.0
        up = (pos & free_up) | (neg & free_down)
        down = (neg & free_up) | (pos & free_down)
        return up, down

    def solve(self) -> None:
        for _ in range(10 * self.n):
            up, down = self._masks()
            if not up.any() or not down.any():
                break
            up_scores = np.where(up, self.scores, -np.inf)
            i = int(np.argmax(up_scores))
            s_i = self.scores[i]
            down_scores = np.where(down, self.scores, np.inf)
            if s_i - float(np.min(down_scores)) <= KKT_TOL:
                break
            gaps = s_i - self.scores
            eligible = down & (gaps > 0.0)
            curvature = np.maximum(self.diag[i] + self.diag - 2.0 * self.k[i], 1e-12)
            gains = np.where(eligible, gaps * gaps / curvature, -np.inf)
            j = int(np.argmax(gains))
            if not self._step(i, j):
                # boxed direction; fall back to partners in gain order
                order = np.argsort(-gains, kind="stable")
                moved = False
                for j2 in order:
                    if j2 == j or not eligible[j2]:
                        continue
                    if self._step(i, int(j2)):
                        moved = True
                        break
                if not moved:
                    break
        self._set_bias()

    def _set_bias(self) -> None:
        free = (self.alpha > 0.0) & (self.alpha < self.c)
        if free.any():
            self.b = float(self.scores[free].mean())
            return
        up, down = self._masks()
        lo = float(np.max(self.scores[up])) if up.any() else 0.0
        hi = float(np.min(self.scores[down])) if down.any() else 0.0
        self.b = 0.5 * (lo + hi)

    def _step(self, i1: int, i2: int) -> bool:
        if i1 == i2:
            return False
        a1 = float(self.alpha[i1])
        a2 = float(self.alpha[i2])
        y1 = float(self.y[i1])
        y2 = float(self.y[i2])
        # errors relative to the bias-free decision; differences match the
        # biased errors exactly
        e1 = -float(self.scores[i1])
        e2 = -float(self.scores[i2])
        s = y1 * y2
        if s > 0:
            low, high = max(0.0, a1 + a2 - self.c), min(self.c, a1 + a2)
        else:
            low, high = max(0.0, a2 - a1), min(self.c, self.c + a2 - a1)
        if low == high:
            return False
        k11 = float(self.k[i1, i1])
        k12 = float(self.k[i1, i2])
        k22 = float(self.k[i2, i2])
        eta = k11 + k22 - 2.0 * k12
        if eta > 0:
            a2_new = a2 + y2 * (e1 - e2) / eta
            a2_new = min(high, max(low, a2_new))
        else:
            # flat direction: evaluate the dual objective at both box ends
            f1 = y1 * e1 - a1 * k11 - s * a2 * k12
            f2 = y2 * e2 - s * a1 * k12 - a2 * k22
            l1 = a1 + s * (a2 - low)
            h1 = a1 + s * (a2 - high)
            obj_low = (
                l1 * f1 + low * f2 + 0.5 * l1 * l1 * k11
                + 0.5 * low * low * k22 + s * low * l1 * k12
            )
            obj_high = (
                h1 * f1 + high * f2 + 0.5 * h1 * h1 * k11
                + 0.5 * high * high * k22 + s * high * h1 * k12
            )
            if obj_low < obj_high - STEP_EPS:
                a2_new = low
            elif obj_low > obj_high + STEP_EPS:
                a2_new = high
            else:
                a2_new = a2
        if a2_new == a2:
            return False
        a1_new = a1 + s * (a2 - a2_new)
        d1 = y1 * (a1_new - a1)
        d2 = y2 * (a2_new - a2)
        self.scores -= d1 * self.k[i1] + d2 * self.k[i2]
        self.alpha[i1] = a1_new
        self.alpha[i2] = a2_new
        return True


def svm_train(
    train: Dataset, kernel: str = LINEAR, c: float = 1.0, gamma: float | None = None
) -> SvmModel:
    """Train a one-vs-one SVM; gamma=None auto-scales per pair as
    1 / (n_features * mean feature variance of the pair's rows)."""
    if kernel not in (LINEAR, RBF):
        raise ValueError(f"kernel must be {LINEAR!r} or {RBF!r}")
    if not np.all(np.isfinite(train.matrix)):
        raise NonFiniteError("training matrix contains NaN or infinity")
    labels = train.present_labels()
    if len(labels) < 2:
        raise SingleClassError("SVM training needs at least two classes")
    x_all = train.matrix
    names = [lab.name for lab in train.labels]
    pairs = []
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            pos, neg = labels[i], labels[j]
            idx = np.array(
                [r for r, name in enumerate(names) if name in (pos.name, neg.name)]
            )
            x = x_all[idx]
            y = np.where(np.array([names[r] for r in idx]) == pos.name, 1.0, -1.0)
            g = gamma if gamma is not None else (_auto_gamma(x) if kernel == RBF else 0.0)
            solver = _SmoSolver(_kernel_matrix(kernel, g, x), y, c)
            solver.solve()
            support = np.nonzero(solver.alpha > 0.0)[0]
            pairs.append(
                PairSvm(
                    label_pos=pos,
                    label_neg=neg,
                    support_indices=tuple(int(idx[s]) for s in support),
                    support_x=x[support],
                    support_coef=solver.alpha[support] * y[support],
                    bias=solver.b,
                    kernel=kernel,
                    gamma=g,
                    alphas=solver.alpha,
                    y=y,
                )
            )
    return SvmModel(
        kernel=kernel,
        c=c,
        labels=labels,
        pairs=tuple(pairs),
        n_features=x_all.shape[1],
    )


def svm_predict(model: SvmModel, query) -> ClassLabel:
    """One-vs-one vote; ties break on summed |decision| over won duels, then
    on class ordinal."""
    q = _query_vector(query, model.n_features)
    votes: dict[str, int] = {lab.name: 0 for lab in model.labels}
    strength: dict[str, float] = {lab.name: 0.0 for lab in model.labels}
    for pair in model.pairs:
        f = pair.decision(q)
        winner = pair.label_pos if f >= 0.0 else pair.label_neg
        votes[winner.name] += 1
        strength[winner.name] += abs(f)
    top = max(votes.values())
    tied = [lab for lab in model.labels if votes[lab.name] == top]
    if len(tied) == 1:
        return tied[0]
    best = max(strength[lab.name] for lab in tied)
    for lab in tied:  # model.labels is ordinal-ordered, so first hit wins ties
        if strength[lab.name] == best:
            return lab
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# CART decision tree

@dataclass(frozen=True)
class TreeLeaf:
    label: ClassLabel


@dataclass(frozen=True)
class TreeNode:
    feature_index: int
    threshold: float
    left: "TreeNode | TreeLeaf"
    right: "TreeNode | TreeLeaf"


@dataclass(frozen=True, eq=False)
class TreeModel:
    """CART classifier: Gini splits at midpoints of consecutive distinct values."""

    root: TreeNode | TreeLeaf
    n_features: int

    def predict(self, query) -> ClassLabel:
        return tree_predict(self, query)


def _majority_label(ordinals: np.ndarray, by_ordinal: dict[int, ClassLabel]) -> ClassLabel:
    counts = np.bincount(ordinals)
    return by_ordinal[int(np.argmax(counts))]  # argmax takes the lowest ordinal on ties


def _best_split(x: np.ndarray, onehot: np.ndarray) -> tuple[float, int, float] | None:
    """Lowest-weighted-Gini (feature, threshold); ties go to the lowest
    feature index, then the lowest threshold."""
    n = x.shape[0]
    best = None
    for f in range(x.shape[1]):
        col = x[:, f]
        order = np.argsort(col, kind="stable")
        xs = col[order]
        cuts = np.nonzero(xs[1:] > xs[:-1])[0]
        if cuts.size == 0:
            continue
        cum = onehot[order].cumsum(axis=0)
        left = cum[cuts]
        total = cum[-1]
        right = total - left
        n_left = (cuts + 1).astype(np.float64)
        n_right = n - n_left
        score = (left * left).sum(axis=1) / n_left + (right * right).sum(axis=1) / n_right
        impurity = 1.0 - score / n
        i = int(np.argmin(impurity))  # candidates ascend, so first min = lowest threshold
        if best is None or impurity[i] < best[0]:
            cut = int(cuts[i])
            best = (float(impurity[i]), f, float(0.5 * (xs[cut] + xs[cut + 1])))
    return best


def _grow(
    x: np.ndarray, ordinals: np.ndarray, onehot: np.ndarray,
    by_ordinal: dict[int, ClassLabel],
) -> TreeNode | TreeLeaf:
    if len(ordinals) < 2 or np.all(ordinals == ordinals[0]):
        return TreeLeaf(_majority_label(ordinals, by_ordinal))
    split = _best_split(x, onehot)
    if split is None:
        return TreeLeaf(_majority_label(ordinals, by_ordinal))
    _, f, threshold = split
    mask = x[:, f] <= threshold
    return TreeNode(
        feature_index=f,
        threshold=threshold,
        left=_grow(x[mask], ordinals[mask], onehot[mask], by_ordinal),
        right=_grow(x[~mask], ordinals[~mask], onehot[~mask], by_ordinal),
    )


def tree_train(train: Dataset) -> TreeModel:
    if len(train) == 0:
        raise EmptyInputError("tree training needs at least one row")
    labels = train.labels
    by_ordinal = {lab.ordinal: lab for lab in labels}
    ordinals = np.array([lab.ordinal for lab in labels])
    n_classes = int(ordinals.max()) + 1
    onehot = np.zeros((len(labels), n_classes))
    onehot[np.arange(len(labels)), ordinals] = 1.0
    root = _grow(train.matrix, ordinals, onehot, by_ordinal)
    return TreeModel(root=root, n_features=train.matrix.shape[1])


def tree_predict(model: TreeModel, query) -> ClassLabel:
    q = _query_vector(query, model.n_features)
    node = model.root
    while isinstance(node, TreeNode):
        node = node.left if q[node.feature_index] <= node.threshold else node.right
    return node.label


# ---------------------------------------------------------------------------
# uniform harness contract

@dataclass(frozen=True)
class ClassifierSpec:
    """Named recipe the evaluation harness can fit on any training fold."""

    name: str
    params: tuple[tuple[str, float], ...] = ()

    def fit(self, train: Dataset):
        kwargs = dict(self.params)
        if self.name == "knn":
            return knn_train(train, k=int(kwargs.get("k", 3)))
        if self.name == "svm-linear":
            return svm_train(train, LINEAR, c=kwargs.get("c", 1.0),
                             gamma=kwargs.get("gamma"))
        if self.name == "svm-rbf":
            return svm_train(train, RBF, c=kwargs.get("c", 1.0),
                             gamma=kwargs.get("gamma"))
        if self.name == "dtree":
            return tree_train(train)
        raise ValueError(f"unknown model {self.name!r}; known: {MODEL_NAMES}")


def classifier_spec(name: str, **params) -> ClassifierSpec:
    if name not in MODEL_NAMES:
        raise ValueError(f"unknown model {name!r}; known: {MODEL_NAMES}")
    return ClassifierSpec(name=name, params=tuple(sorted(params.items())))
