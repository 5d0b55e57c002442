"""Trend-based index ranking and correlation clustering."""

import numpy as np
import pytest

from curlearn import (
    ArgumentError,
    CurriculumConfig,
    IndexMatrix,
    TrainConfig,
    complete_linkage_clusters,
    correlation_distance,
    correlation_matrix,
    filter_by_trend,
    pearson,
    select_representatives,
    train,
)
from synthdata import PLANTED, planted_task


def brute_force_complete_linkage(D, threshold):
    """Reference agglomeration with explicit pair scanning."""
    k = D.shape[0]
    clusters = [[i] for i in range(k)]
    while len(clusters) > 1:
        best = None
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                d = max(D[i, j] for i in clusters[a] for j in clusters[b])
                cand = (d, min(clusters[a] + clusters[b]), a, b)
                if best is None or cand[:2] < best[:2]:
                    best = cand
        if best is None or best[0] > threshold:
            break
        _, _, a, b = best
        clusters[a] = sorted(clusters[a] + clusters[b])
        del clusters[b]
        clusters.sort(key=min)
    labels = np.empty(k, dtype=np.int64)
    for lab, members in enumerate(sorted(clusters, key=min)):
        labels[members] = lab
    return labels


def random_distance(rng, k):
    A = rng.uniform(0.0, 1.0, size=(k, k))
    D = (A + A.T) / 2.0
    np.fill_diagonal(D, 0.0)
    return D


class TestCorrelationMatrix:
    def test_matches_pairwise_pearson(self):
        rng = np.random.default_rng(15)
        vals = rng.standard_normal((30, 4))
        m = IndexMatrix([f"s{i}" for i in range(30)], list("abcd"), vals)
        R = correlation_matrix(m)
        for i in range(4):
            for j in range(4):
                expect = 1.0 if i == j else pearson(vals[:, i], vals[:, j])
                np.testing.assert_allclose(R[i, j], expect, atol=1e-12)

    def test_exactly_symmetric_with_unit_diagonal(self):
        rng = np.random.default_rng(16)
        vals = rng.standard_normal((50, 6)) * rng.uniform(0.1, 9, size=6)
        m = IndexMatrix([f"s{i}" for i in range(50)], [f"c{j}" for j in range(6)], vals)
        R = correlation_matrix(m)
        np.testing.assert_array_equal(R, R.T)
        np.testing.assert_array_equal(np.diag(R), 1.0)

    def test_constant_column_convention(self):
        vals = np.column_stack([np.ones(10), np.arange(10.0)])
        m = IndexMatrix([f"s{i}" for i in range(10)], ["const", "ramp"], vals)
        R = correlation_matrix(m)
        assert R[0, 1] == 0.0 and R[1, 0] == 0.0
        assert R[0, 0] == 1.0

    def test_distance_is_one_minus_absolute(self):
        R = np.array([[1.0, -0.8], [-0.8, 1.0]])
        D = correlation_distance(R)
        np.testing.assert_allclose(D, [[0.0, 0.2], [0.2, 0.0]], atol=1e-12)


class TestCompleteLinkage:
    def test_chain_does_not_collapse(self):
        """A chain 0-1-2 with a far endpoint pair splits under complete linkage."""
        D = np.array(
            [
                [0.0, 0.2, 0.5],
                [0.2, 0.0, 0.2],
                [0.5, 0.2, 0.0],
            ]
        )
        labels = complete_linkage_clusters(D, threshold=0.3)
        # 0 and 1 merge first; adding 2 would put 0-2 at 0.5 over the threshold
        assert labels[0] == labels[1] != labels[2]

    def test_threshold_zero_keeps_singletons(self):
        rng = np.random.default_rng(2)
        D = random_distance(rng, 8)
        labels = complete_linkage_clusters(D, threshold=0.0)
        assert sorted(labels.tolist()) == list(range(8))

    def test_huge_threshold_gives_one_cluster(self):
        rng = np.random.default_rng(3)
        D = random_distance(rng, 7)
        labels = complete_linkage_clusters(D, threshold=10.0)
        assert set(labels.tolist()) == {0}

    def test_within_cluster_distances_respect_threshold(self):
        rng = np.random.default_rng(29)
        for _ in range(60):
            k = int(rng.integers(2, 14))
            D = random_distance(rng, k)
            threshold = float(rng.uniform(0.1, 0.9))
            labels = complete_linkage_clusters(D, threshold)
            for lab in set(labels.tolist()):
                members = np.flatnonzero(labels == lab)
                for i in members:
                    for j in members:
                        assert D[i, j] <= threshold + 1e-12

    def test_matches_brute_force_reference(self):
        rng = np.random.default_rng(31)
        for _ in range(40):
            k = int(rng.integers(2, 10))
            D = random_distance(rng, k)
            threshold = float(rng.uniform(0.2, 0.8))
            got = complete_linkage_clusters(D, threshold)
            want = brute_force_complete_linkage(D, threshold)
            np.testing.assert_array_equal(got, want)

    def test_labels_ordered_by_smallest_member(self):
        D = np.array(
            [
                [0.0, 0.9, 0.1],
                [0.9, 0.0, 0.9],
                [0.1, 0.9, 0.0],
            ]
        )
        labels = complete_linkage_clusters(D, threshold=0.2)
        np.testing.assert_array_equal(labels, [0, 1, 0])

    def test_input_validation(self):
        with pytest.raises(ArgumentError):
            complete_linkage_clusters(np.zeros((2, 3)), 0.5)
        bad = np.array([[0.0, 1.0], [0.5, 0.0]])
        with pytest.raises(ArgumentError):
            complete_linkage_clusters(bad, 0.5)
        with pytest.raises(ArgumentError):
            complete_linkage_clusters(np.zeros((2, 2)), -1.0)


class TestSelectRepresentatives:
    def test_rank_hint_wins(self):
        labels = np.array([0, 0, 1])
        R = np.eye(3)
        reps = select_representatives(
            labels, R, ["a", "b", "c"], rank_hint={"a": 0.1, "b": 0.9, "c": 0.2}
        )
        assert reps == ["b", "c"]

    def test_medoid_without_hint(self):
        # b correlates strongly with both a and c; a-c weak
        R = np.array(
            [
                [1.0, 0.9, 0.2],
                [0.9, 1.0, 0.8],
                [0.2, 0.8, 1.0],
            ]
        )
        labels = np.zeros(3, dtype=int)
        reps = select_representatives(labels, R, ["a", "b", "c"])
        assert reps == ["b"]

    def test_tie_goes_to_earlier_column(self):
        R = np.array([[1.0, 0.5], [0.5, 1.0]])
        reps = select_representatives(np.array([0, 0]), R, ["x", "y"])
        assert reps == ["x"]


@pytest.fixture(scope="module")
def baseline():
    ds, mat = planted_task(0, n_train=300, n_val=200, n=700)
    cfg = TrainConfig(
        epochs=4,
        batch_size=32,
        learning_rate=0.1,
        feature_dim=32,
        concat_indices=True,
        seed=0,
        importance_method="correlation",
        aggregation="max",
        curriculum=CurriculumConfig(kind="none"),
    )
    return ds, mat, train(ds, mat, cfg)


class TestFilterByTrend:
    def test_keeps_ceil_of_fraction(self, baseline):
        ds, mat, rec = baseline
        res = filter_by_trend(ds, mat, rec, m=8, keep_fraction=0.3)
        assert len(res.kept_names) == 6  # ceil(0.3 * 20)
        assert res.kept_names == res.ranked_names[:6]
        assert len(res.ranked_names) == 20

    def test_slopes_sorted_by_magnitude(self, baseline):
        ds, mat, rec = baseline
        res = filter_by_trend(ds, mat, rec, m=8)
        mags = [abs(s) for s in res.slopes]
        assert all(a >= b - 1e-15 for a, b in zip(mags, mags[1:]))

    def test_requires_plain_baseline(self, baseline):
        ds, mat, rec = baseline
        cfg = TrainConfig(
            epochs=1,
            batch_size=32,
            learning_rate=0.1,
            feature_dim=32,
            concat_indices=True,
            seed=0,
            curriculum=CurriculumConfig(kind="gaussian"),
        )
        bad = train(ds, mat, cfg)
        with pytest.raises(ArgumentError, match="none"):
            filter_by_trend(ds, mat, bad)

    def test_keep_fraction_validated(self, baseline):
        ds, mat, rec = baseline
        with pytest.raises(ArgumentError):
            filter_by_trend(ds, mat, rec, keep_fraction=0.0)
