"""Difficulty aggregation from index columns and from loss traces."""

import numpy as np
import pytest

from curlearn import (
    ArgumentError,
    CoverageError,
    DegenerateInputError,
    DifficultyScore,
    ImportanceVector,
    IndexMatrix,
    aggregate_max,
    aggregate_weighted,
    load_difficulty_csv,
    loss_difficulty,
    write_difficulty_csv,
)


def matrix(values, zero_variance=None):
    values = np.asarray(values, dtype=np.float64)
    n, k = values.shape
    return IndexMatrix(
        sample_ids=[f"s{i}" for i in range(n)],
        index_names=[f"c{j}" for j in range(k)],
        values=values,
        standardized=True,
        zero_variance=zero_variance,
    )


def iv(rho):
    return ImportanceVector(rho=np.asarray(rho, dtype=np.float64), method="correlation")


class TestAggregateMax:
    def test_signed_argmax_picks_largest_weight(self):
        m = matrix([[1.0, 10.0], [2.0, 20.0]])
        score = aggregate_max(m, iv([0.9, -0.95]))
        # signed comparison: 0.9 > -0.95, column 0 wins despite the magnitude
        np.testing.assert_allclose(score.values, [1.0, 2.0])
        assert score.source == "ling_max"

    def test_magnitude_mode(self):
        m = matrix([[1.0, 10.0], [2.0, 20.0]])
        score = aggregate_max(m, iv([0.9, -0.95]), use_magnitude=True)
        np.testing.assert_allclose(score.values, [10.0, 20.0])

    def test_tie_breaks_to_lowest_column(self):
        m = matrix([[1.0, 2.0, 3.0]])
        score = aggregate_max(m, iv([0.5, 0.5, 0.5]))
        np.testing.assert_allclose(score.values, [1.0])

    def test_flagged_columns_never_win(self):
        m = matrix([[1.0, 2.0]], zero_variance=[True, False])
        score = aggregate_max(m, iv([0.99, 0.01]))
        np.testing.assert_allclose(score.values, [2.0])

    def test_all_columns_flagged_is_degenerate(self):
        m = matrix([[1.0, 2.0]], zero_variance=[True, True])
        with pytest.raises(DegenerateInputError):
            aggregate_max(m, iv([0.5, 0.5]))

    def test_length_mismatch(self):
        with pytest.raises(ArgumentError):
            aggregate_max(matrix([[1.0]]), iv([0.5, 0.5]))


class TestAggregateWeighted:
    def test_hand_example(self):
        """[1, 2] . [0.6, 0.8] over norm 1.0 = 2.2 per construction."""
        m = matrix([[1.0, 2.0], [0.0, 1.0]])
        score = aggregate_weighted(m, iv([0.6, 0.8]))
        np.testing.assert_allclose(score.values, [2.2, 0.8])
        assert score.source == "ling_weighted"

    def test_norm_invariance_under_scaling(self):
        """Scaling rho leaves the combined score unchanged."""
        rng = np.random.default_rng(4)
        m = matrix(rng.standard_normal((6, 3)))
        rho = rng.standard_normal(3)
        a = aggregate_weighted(m, iv(rho)).values
        b = aggregate_weighted(m, iv(rho * 7.5)).values
        np.testing.assert_allclose(a, b, atol=1e-12)

    def test_all_zero_weights_give_zero_difficulty(self):
        m = matrix([[5.0, -3.0]])
        score = aggregate_weighted(m, iv([0.0, 0.0]))
        np.testing.assert_array_equal(score.values, 0.0)


class TestLossDifficulty:
    def test_means_per_sample(self):
        traces = {"a": [1.0, 3.0], "b": [2.0]}
        score = loss_difficulty(traces, order=["b", "a"])
        np.testing.assert_allclose(score.values, [2.0, 2.0])
        assert score.sample_ids == ("b", "a")
        assert score.source == "loss"

    def test_missing_or_empty_trace_raises(self):
        with pytest.raises(CoverageError):
            loss_difficulty({"a": [1.0]}, order=["a", "b"])
        with pytest.raises(CoverageError):
            loss_difficulty({"a": []})


class TestDifficultyScore:
    def test_rejects_non_finite(self):
        with pytest.raises(ArgumentError):
            DifficultyScore(values=np.array([np.nan]), source="loss")

    def test_rejects_unknown_source(self):
        with pytest.raises(ArgumentError):
            DifficultyScore(values=np.array([1.0]), source="vibes")

    def test_id_length_checked(self):
        with pytest.raises(ArgumentError):
            DifficultyScore(
                values=np.array([1.0, 2.0]), source="loss", sample_ids=("a",)
            )


class TestDifficultyCsv:
    def test_round_trip_is_exact(self, tmp_path):
        rng = np.random.default_rng(6)
        score = DifficultyScore(
            values=rng.standard_normal(9),
            source="loss",
            sample_ids=tuple(f"s{i}" for i in range(9)),
        )
        path = str(tmp_path / "diff.csv")
        write_difficulty_csv(score, path)
        back = load_difficulty_csv(path)
        np.testing.assert_array_equal(back.values, score.values)
        assert back.sample_ids == score.sample_ids

    def test_write_requires_ids(self, tmp_path):
        score = DifficultyScore(values=np.array([1.0]), source="loss")
        with pytest.raises(ArgumentError):
            write_difficulty_csv(score, str(tmp_path / "x.csv"))
