import numpy as np
import pytest

from tendonsense import (
    ClassLabel,
    FeatureVector,
    build_dataset,
    label_for,
    split_by_indices,
    task_labels,
    values_for,
)
from tendonsense.errors import (
    EmptyInputError,
    InconsistentFeaturesError,
    IndexOutOfRangeError,
    UnknownLabelError,
)

F = label_for("texture", "F")
R1 = label_for("texture", "R1")


def fv(*values, names=None):
    names = names or tuple(f"f{i}" for i in range(len(values)))
    return FeatureVector(values=tuple(values), names=tuple(names))


def small_dataset():
    rows = [
        (fv(0.0, 1.0), F),
        (fv(2.0, 3.0), F),
        (fv(4.0, 5.0), R1),
        (fv(6.0, 7.0), R1),
        (fv(8.0, 9.0), F),
        (fv(10.0, 11.0), R1),
    ]
    return build_dataset(rows, task="texture", mode="FC")


class TestLabels:
    def test_canonical_sets(self):
        assert [l.name for l in task_labels("texture")] == [
            "F", "R1", "R2", "R3", "T1", "T2", "C1", "C2"]
        assert [l.name for l in task_labels("stiffness")] == [
            "PLA", "RUBBER_SOLID", "RUBBER_SHELL", "SPONGE", "NONE"]

    def test_ordinals_are_dense(self):
        for task, k in (("texture", 8), ("stiffness", 5)):
            assert [l.ordinal for l in task_labels(task)] == list(range(k))

    def test_unknown_label(self):
        with pytest.raises(UnknownLabelError):
            label_for("texture", "PLA")


class TestBuildDataset:
    def test_direct_assembly(self):
        rows = [(fv(i, 91.0) , lab) for i, lab in enumerate([F, F, R1])]
        ds = build_dataset(rows, task="texture", mode="FC")
        assert len(ds) == 3
        assert len(ds.present_labels()) == 2
        assert ds.feature_names == ("f0", "f1")

    def test_mismatched_names(self):
        rows = [(fv(1.0), F), (fv(2.0, names=("other",)), F)]
        with pytest.raises(InconsistentFeaturesError):
            build_dataset(rows, task="texture", mode="FC")

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            build_dataset([], task="texture", mode="FC")

    def test_full_corpus_counts(self, texture_fc_ds):
        assert len(texture_fc_ds) == 480
        counts = texture_fc_ds.class_counts()
        assert len(counts) == 8
        assert all(c == 60 for c in counts.values())

    def test_rebuild_is_identity(self):
        ds = small_dataset()
        again = build_dataset(ds.rows, task=ds.task, mode=ds.mode)
        assert again == ds


class TestSplitByIndices:
    def test_basic_split(self):
        ds = small_dataset()
        train, test = split_by_indices(ds, {0, 1})
        assert [r[0].values[0] for r in train.rows] == [4.0, 6.0, 8.0, 10.0]
        assert [r[0].values[0] for r in test.rows] == [0.0, 2.0]

    def test_empty_test(self):
        ds = small_dataset()
        train, test = split_by_indices(ds, set())
        assert len(test) == 0
        assert train == ds

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRangeError):
            split_by_indices(small_dataset(), {6})

    def test_partition_property(self):
        ds = small_dataset()
        for idx in ({0}, {1, 3, 5}, {0, 1, 2, 3, 4, 5}):
            train, test = split_by_indices(ds, idx)
            assert len(train) + len(test) == len(ds)
            merged = sorted(
                (tuple(r[0].values) for r in train.rows + test.rows))
            assert merged == sorted(tuple(r[0].values) for r in ds.rows)

    def test_fold_sized_split(self, texture_fc_ds):
        train, test = split_by_indices(texture_fc_ds, set(range(0, 480, 6)))
        assert (len(train), len(test)) == (400, 80)


class TestValuesFor:
    def test_per_class_counts(self, texture_fc_ds):
        vals = values_for(texture_fc_ds, 11, F)
        assert len(vals) == 60

    def test_absent_label(self):
        ds = small_dataset()
        with pytest.raises(UnknownLabelError):
            values_for(ds, 0, label_for("texture", "C2"))

    def test_feature_index_out_of_range(self):
        with pytest.raises(IndexOutOfRangeError):
            values_for(small_dataset(), 2, F)

    def test_zero_feature(self):
        rows = [(fv(0.0), F), (fv(0.0), R1)]
        ds = build_dataset(rows, task="texture", mode="FC")
        assert list(values_for(ds, 0, F)) == [0.0]

    def test_counts_sum_to_rows(self):
        ds = small_dataset()
        for i in range(len(ds.feature_names)):
            total = sum(len(values_for(ds, i, lab)) for lab in ds.present_labels())
            assert total == len(ds)

    def test_row_order_preserved(self):
        ds = small_dataset()
        assert list(values_for(ds, 0, R1)) == [4.0, 6.0, 10.0]


class TestTypes:
    def test_feature_vector_length_mismatch(self):
        with pytest.raises(InconsistentFeaturesError):
            FeatureVector(values=(1.0, 2.0), names=("a",))

    def test_feature_vector_rejects_nan(self):
        with pytest.raises(ValueError):
            FeatureVector(values=(float("nan"),), names=("a",))

    def test_labels_sort_by_ordinal(self):
        labs = sorted([ClassLabel(3, "z"), ClassLabel(0, "a"), ClassLabel(1, "m")])
        assert [l.ordinal for l in labs] == [0, 1, 3]
