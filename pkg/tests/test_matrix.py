import numpy as np
import pytest

from softeval import (
    AlignmentError,
    ClassSubset,
    SoftLabelMatrix,
    ValidationError,
    align,
    resolve_classes,
)


def matrix(ids, classes, values):
    return SoftLabelMatrix(tuple(ids), tuple(classes), np.asarray(values, dtype=np.float64))


class TestSoftLabelMatrix:
    def test_basic_construction(self):
        m = matrix(["i1", "i2"], ["a", "b"], [[0.1, 0.9], [0.5, 0.0]])
        assert m.n_items == 2
        assert m.n_classes == 2
        assert m.item_ids == ("i1", "i2")
        assert m.class_names == ("a", "b")

    def test_values_are_read_only(self):
        m = matrix(["i"], ["a"], [[0.5]])
        with pytest.raises(ValueError):
            m.values[0, 0] = 0.9

    def test_constructor_copies_input(self):
        values = np.array([[0.5]])
        m = SoftLabelMatrix(("i",), ("a",), values)
        values[0, 0] = 0.9
        assert m.values[0, 0] == 0.5

    def test_duplicate_item_id_rejected(self):
        with pytest.raises(ValidationError, match="duplicate item id"):
            matrix(["i", "i"], ["a"], [[0.1], [0.2]])

    def test_duplicate_class_rejected(self):
        with pytest.raises(ValidationError, match="duplicate class name"):
            matrix(["i"], ["a", "a"], [[0.1, 0.2]])

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValidationError, match="shape"):
            matrix(["i1", "i2"], ["a"], [[0.1]])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValidationError):
            matrix(["i"], ["a"], [[1.1]])
        with pytest.raises(ValidationError):
            matrix(["i"], ["a"], [[-0.1]])

    def test_non_finite_rejected(self):
        with pytest.raises(ValidationError):
            matrix(["i"], ["a"], [[np.nan]])

    def test_column_lookup(self):
        m = matrix(["i1", "i2"], ["a", "b"], [[0.1, 0.9], [0.5, 0.0]])
        np.testing.assert_array_equal(m.column("b"), [0.9, 0.0])
        with pytest.raises(AlignmentError):
            m.column("zzz")

    def test_subset_reorders(self):
        m = matrix(["i"], ["a", "b", "c"], [[0.1, 0.2, 0.3]])
        s = m.subset(["c", "a"])
        assert s.class_names == ("c", "a")
        np.testing.assert_array_equal(s.values, [[0.3, 0.1]])
        with pytest.raises(AlignmentError):
            m.subset(["a", "missing"])

    def test_binarized_is_strict(self):
        m = matrix(["i"], ["a", "b", "c"], [[0.8, 0.5, 0.2]])
        np.testing.assert_array_equal(m.binarized(0.5).values, [[1.0, 0.0, 0.0]])

    def test_equality_by_content(self):
        a = matrix(["i"], ["a"], [[0.5]])
        b = matrix(["i"], ["a"], [[0.5]])
        c = matrix(["i"], ["a"], [[0.6]])
        assert a == b
        assert a != c
        assert a != matrix(["j"], ["a"], [[0.5]])

    def test_zero_item_matrix_allowed(self):
        m = SoftLabelMatrix((), ("a",), np.empty((0, 1)))
        assert m.n_items == 0


class TestClassSubset:
    def test_of_defaults_to_parent(self):
        m = matrix(["i"], ["a", "b"], [[0.1, 0.2]])
        assert ClassSubset.of(m).selected == ("a", "b")

    def test_of_validates_membership(self):
        m = matrix(["i"], ["a"], [[0.1]])
        with pytest.raises(AlignmentError):
            ClassSubset.of(m, ["b"])

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            ClassSubset(())

    def test_duplicate_rejected(self):
        with pytest.raises(ValidationError):
            ClassSubset(("a", "a"))

    def test_iteration_and_len(self):
        s = ClassSubset(("x", "y"))
        assert list(s) == ["x", "y"]
        assert len(s) == 2


class TestResolveClasses:
    def test_defaults_to_reference_order(self):
        pred = matrix(["i"], ["b", "a"], [[0.1, 0.2]])
        ref = matrix(["i"], ["a", "b"], [[0.2, 0.1]])
        assert resolve_classes(pred, ref) == ("a", "b")

    def test_subset_must_cover_both(self):
        pred = matrix(["i"], ["a"], [[0.1]])
        ref = matrix(["i"], ["a", "b"], [[0.1, 0.2]])
        with pytest.raises(AlignmentError, match="missing from prediction"):
            resolve_classes(pred, ref, ["b"])


class TestAlign:
    def test_rows_reordered_to_reference(self):
        pred = matrix(["s2", "s1"], ["a"], [[0.2], [0.1]])
        ref = matrix(["s1", "s2"], ["a"], [[0.1], [0.2]])
        p, r = align(pred, ref)
        assert p.item_ids == ("s1", "s2")
        np.testing.assert_array_equal(p.values, [[0.1], [0.2]])
        assert r == ref

    def test_symmetric_difference_reported(self):
        pred = matrix(["s1", "s3"], ["a"], [[0.1], [0.3]])
        ref = matrix(["s1", "s2"], ["a"], [[0.1], [0.2]])
        with pytest.raises(AlignmentError) as exc:
            align(pred, ref)
        assert "s2" in str(exc.value)
        assert "s3" in str(exc.value)

    def test_class_sets_must_agree_without_subset(self):
        pred = matrix(["s1"], ["a", "extra"], [[0.1, 0.2]])
        ref = matrix(["s1"], ["a"], [[0.1]])
        with pytest.raises(AlignmentError, match="class sets differ"):
            align(pred, ref)

    def test_subset_permits_class_mismatch(self):
        pred = matrix(["s1"], ["a", "extra"], [[0.1, 0.2]])
        ref = matrix(["s1"], ["a", "other"], [[0.1, 0.9]])
        p, r = align(pred, ref, classes=["a"])
        assert p.class_names == r.class_names == ("a",)

    def test_idempotent_on_aligned_inputs(self):
        rng = np.random.default_rng(97)
        ids = tuple(f"i{j}" for j in range(8))
        pred = SoftLabelMatrix(ids, ("a", "b"), rng.random((8, 2)))
        ref = SoftLabelMatrix(ids, ("a", "b"), rng.random((8, 2)))
        p1, r1 = align(pred, ref)
        p2, r2 = align(p1, r1)
        assert p1 == p2 and r1 == r2

    def test_column_subset_follows_request_order(self):
        pred = matrix(["s1"], ["b", "a"], [[0.2, 0.1]])
        ref = matrix(["s1"], ["a", "b"], [[0.1, 0.2]])
        p, r = align(pred, ref, classes=["b", "a"])
        assert p.class_names == ("b", "a")
        np.testing.assert_array_equal(p.values, [[0.2, 0.1]])
        np.testing.assert_array_equal(r.values, [[0.2, 0.1]])
