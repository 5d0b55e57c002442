"""Equal-width binning, small-bin merging, and balanced accuracy."""

import numpy as np
import pytest

from curlearn import (
    ArgumentError,
    UndefinedTrendError,
    accuracy_trend_slope,
    assign_bins,
    bin_edges,
    binned_balanced_accuracy,
    write_bin_report_csv,
)


class TestBinEdges:
    def test_equal_width(self):
        edges = bin_edges([0.0, 10.0], m=5)
        np.testing.assert_allclose(edges, [0, 2, 4, 6, 8, 10])

    def test_constant_data_collapses_to_one_bin(self):
        edges = bin_edges([3.0, 3.0, 3.0], m=10)
        np.testing.assert_array_equal(edges, [3.0, 3.0])

    def test_validation(self):
        with pytest.raises(ArgumentError):
            bin_edges([], m=3)
        with pytest.raises(ArgumentError):
            bin_edges([1.0], m=0)


class TestAssignBins:
    def test_rightmost_bin_is_closed(self):
        edges = bin_edges([0.0, 4.0], m=4)
        idx = assign_bins([0.0, 0.999, 1.0, 3.999, 4.0], edges)
        np.testing.assert_array_equal(idx, [0, 0, 1, 3, 3])

    def test_matches_brute_force(self):
        rng = np.random.default_rng(44)
        for _ in range(30):
            vals = rng.uniform(-5, 5, size=60)
            edges = bin_edges(vals, m=7)
            idx = assign_bins(vals, edges)
            for v, b in zip(vals, idx):
                lo, hi = edges[b], edges[b + 1]
                last = b == len(edges) - 2
                assert lo <= v < hi or (last and v == hi)

    def test_constant_data_goes_to_the_single_bin(self):
        edges = bin_edges([2.0, 2.0], m=6)
        np.testing.assert_array_equal(assign_bins([2.0, 2.0], edges), [0, 0])


class TestBinnedBalancedAccuracy:
    def test_skewed_two_bin_example(self):
        """90 easy correct, 10 hard wrong: plain 0.9 but balanced 0.5."""
        difficulty = np.concatenate([np.zeros(90), np.ones(10)])
        labels = np.zeros(100, dtype=int)
        predictions = np.concatenate([np.zeros(90, dtype=int), np.ones(10, dtype=int)])
        report = binned_balanced_accuracy(predictions, labels, difficulty, m=2)
        assert report.n_bins == 2
        assert report.plain_accuracy == 0.9
        assert report.balanced_accuracy == 0.5
        np.testing.assert_array_equal(report.counts, [90, 10])
        np.testing.assert_allclose(report.accuracies, [1.0, 0.0])

    def test_single_bin_reduces_to_plain_accuracy(self):
        rng = np.random.default_rng(10)
        for _ in range(25):
            n = int(rng.integers(5, 40))
            preds = rng.integers(0, 3, size=n)
            labels = rng.integers(0, 3, size=n)
            diff = rng.standard_normal(n)
            report = binned_balanced_accuracy(preds, labels, diff, m=1)
            np.testing.assert_allclose(report.balanced_accuracy, report.plain_accuracy)
            assert report.trend_slope is None

    def test_small_bins_merge_into_larger_neighbour(self):
        # counts per bin before merging: [6, 2, 8] with min_count 5
        difficulty = np.concatenate([np.full(6, 0.1), np.full(2, 0.5), np.full(8, 0.9)])
        labels = np.zeros(16, dtype=int)
        preds = np.zeros(16, dtype=int)
        report = binned_balanced_accuracy(
            preds, labels, difficulty, m=3, min_count=5
        )
        np.testing.assert_array_equal(report.counts, [6, 10])

    def test_merging_preserves_totals(self):
        rng = np.random.default_rng(77)
        for _ in range(40):
            n = int(rng.integers(8, 120))
            diff = rng.standard_normal(n)
            labels = rng.integers(0, 2, size=n)
            preds = rng.integers(0, 2, size=n)
            report = binned_balanced_accuracy(preds, labels, diff, m=9, min_count=5)
            assert int(report.counts.sum()) == n
            small = report.counts < 5
            assert report.n_bins == 1 or not small.any()
            # weighted recombination of bin accuracies gives plain accuracy
            np.testing.assert_allclose(
                float(np.dot(report.counts, report.accuracies)) / n,
                report.plain_accuracy,
                atol=1e-12,
            )

    def test_trend_slope_hand_example(self):
        # accuracies [1.0, 0.5] across two bins: slope -0.5
        difficulty = np.concatenate([np.zeros(6), np.ones(6)])
        labels = np.zeros(12, dtype=int)
        preds = np.concatenate([np.zeros(6, dtype=int), [0, 0, 0, 1, 1, 1]])
        report = binned_balanced_accuracy(preds, labels, difficulty, m=2)
        np.testing.assert_allclose(report.trend_slope, -0.5)
        np.testing.assert_allclose(accuracy_trend_slope(report), -0.5)

    def test_trend_undefined_for_single_bin(self):
        report = binned_balanced_accuracy([0], [0], [1.0], m=1)
        with pytest.raises(UndefinedTrendError):
            accuracy_trend_slope(report)

    def test_shape_validation(self):
        with pytest.raises(ArgumentError):
            binned_balanced_accuracy([0, 1], [0], [0.5], m=2)
        with pytest.raises(ArgumentError):
            binned_balanced_accuracy([], [], [], m=2)


class TestBinReportCsv:
    def test_rows_and_summary_comment(self, tmp_path):
        difficulty = np.concatenate([np.zeros(5), np.ones(5)])
        labels = np.zeros(10, dtype=int)
        preds = labels.copy()
        report = binned_balanced_accuracy(preds, labels, difficulty, m=2)
        path = tmp_path / "bins.csv"
        write_bin_report_csv(report, str(path))
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "bin_lo,bin_hi,count,accuracy"
        assert len(lines) == 4
        assert lines[-1].startswith("# n=10 ")
        assert "balanced_accuracy=1.0" in lines[-1]

    def test_cells_are_plain_parseable_floats(self, tmp_path):
        difficulty = np.linspace(0.0, 1.0, 12)
        labels = np.arange(12) % 2
        preds = np.zeros(12, dtype=int)
        report = binned_balanced_accuracy(preds, labels, difficulty, m=3)
        path = tmp_path / "bins.csv"
        write_bin_report_csv(report, str(path))
        text = path.read_text()
        assert "np.float64" not in text
        for line in text.strip().splitlines()[1:]:
            if line.startswith("#"):
                continue
            lo, hi, cnt, acc = line.split(",")
            float(lo), float(hi), int(cnt), float(acc)
