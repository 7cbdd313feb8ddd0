"""
已见异常调参单元测试
"""

import numpy as np
import pytest

from drama.base.error_collector import error_collector
from drama.base.error_exceptions import (
    DataError,
    NotEnoughOutliersError,
    NumericalError,
    UsageError,
)
from drama.service.baselines.baseline_configs import LofConfig
from drama.service.data.data_model import Dataset, LabelVector
from drama.service.detector import tuning
from drama.service.detector.grid import grid
from drama.service.detector.pipeline import run_candidate
from drama.service.detector.tuning import (
    partial_labels,
    score_grid,
    seen_outliers,
    select_with_seen,
    tune_with_seen_anomalies,
)


@pytest.fixture
def small_grid():
    return grid(["pca"], ["l1", "l2", "canberra"], [0, 1, 2], [True, False])


@pytest.mark.unit
class TestSeenOutliers:
    def test_nested_prefixes(self, labeled_dataset):
        labels = labeled_dataset.labels
        largest = seen_outliers(labels, 6, seed=3)
        for n in range(1, 6):
            assert seen_outliers(labels, n, seed=3).tolist() == largest[:n].tolist()
        assert set(largest.tolist()) == set(range(60, 66))

    def test_seed_changes_draw(self, labeled_dataset):
        draws = {tuple(seen_outliers(labeled_dataset.labels, 3, s)) for s in range(10)}
        assert len(draws) > 1

    def test_not_enough(self, labeled_dataset):
        with pytest.raises(NotEnoughOutliersError):
            seen_outliers(labeled_dataset.labels, 7, seed=0)

    def test_n_seen_must_be_positive(self, labeled_dataset):
        with pytest.raises(UsageError):
            seen_outliers(labeled_dataset.labels, 0, seed=0)

    def test_partial_labels(self):
        labels = LabelVector(np.array([False, True, False, True, True]))
        rows, sub = partial_labels(labels, np.array([3]))
        assert rows.tolist() == [0, 2, 3]
        assert sub.is_outlier.tolist() == [False, False, True]


@pytest.mark.unit
class TestTuning:
    def test_best_is_argmax_partial_auc(self, labeled_dataset, small_grid):
        result = tune_with_seen_anomalies(labeled_dataset, 2, small_grid, seed=1)
        assert len(result.table) == len(small_grid)
        assert [row.config_id for row in result.table] == [
            c.config_id for c in small_grid
        ]
        partial = [row.partial_auc for row in result.table]
        assert result.table.index(result.best_row) == int(np.argmax(partial))
        assert result.best_row.partial_auc == max(partial)
        assert result.n_seen == 2 and result.seed == 1
        assert result.seen_indices.shape == (2,)

    def test_score_grid_once_for_all_n_seen(self, labeled_dataset, small_grid):
        scores = score_grid(labeled_dataset, small_grid)
        assert scores.n_failed == 0
        assert np.all((scores.full_auc >= 0) & (scores.full_auc <= 1))
        results = [select_with_seen(scores, n, seed=0) for n in (1, 3, 6)]
        for result in results:
            np.testing.assert_array_equal(
                [row.full_auc for row in result.table], scores.full_auc
            )
        # 全部离群点已见时部分标注即完整标注
        assert [row.partial_auc for row in results[-1].table] == pytest.approx(
            list(scores.full_auc)
        )

    def test_ties_go_to_first_in_grid_order(self, labeled_dataset):
        candidates = [LofConfig(5), LofConfig(5), LofConfig(10)]
        scores = score_grid(labeled_dataset, candidates)
        result = select_with_seen(scores, 2, seed=0)
        assert result.best is not candidates[1]
        if result.table[0].partial_auc >= result.table[2].partial_auc:
            assert result.best is candidates[0]

    def test_rws_criterion(self, labeled_dataset, small_grid):
        scores = score_grid(labeled_dataset, small_grid)
        result = select_with_seen(scores, 3, seed=0, criterion="RWS")
        partial = [row.partial_rws for row in result.table]
        assert result.best_row.partial_rws == max(partial)
        with pytest.raises(UsageError):
            select_with_seen(scores, 3, seed=0, criterion="f1")

    def test_numerical_failures_become_nan(self, labeled_dataset, small_grid, mocker):
        failing = small_grid[0].config_id

        def flaky(data, candidate, cache=None):
            if candidate.config_id == failing:
                raise NumericalError("模拟失败")
            return run_candidate(data, candidate, cache)

        mocker.patch.object(tuning, "run_candidate", side_effect=flaky)
        result = tune_with_seen_anomalies(labeled_dataset, 2, small_grid, seed=0)

        assert np.isnan(result.table[0].partial_auc)
        assert np.isnan(result.table[0].full_auc)
        assert result.best is not small_grid[0]
        assert error_collector.get_error_summary()["total_errors"] == 1

    def test_all_cells_failing(self, labeled_dataset, small_grid, mocker):
        mocker.patch.object(
            tuning, "run_candidate", side_effect=NumericalError("模拟失败")
        )
        with pytest.raises(NumericalError):
            tune_with_seen_anomalies(labeled_dataset, 1, small_grid, seed=0)

    def test_data_errors_propagate(self, labeled_dataset, small_grid, mocker):
        mocker.patch.object(tuning, "run_candidate", side_effect=DataError("坏数据"))
        with pytest.raises(DataError):
            score_grid(labeled_dataset, small_grid)

    def test_n_seen_checked_before_scoring(self, labeled_dataset, small_grid, mocker):
        spy = mocker.spy(tuning, "score_grid")
        with pytest.raises(NotEnoughOutliersError):
            tune_with_seen_anomalies(labeled_dataset, 10, small_grid, seed=0)
        assert spy.call_count == 0

    def test_unlabeled_dataset(self, labeled_dataset, small_grid):
        unlabeled = Dataset(labeled_dataset.data, None, "bare")
        with pytest.raises(UsageError):
            tune_with_seen_anomalies(unlabeled, 1, small_grid, seed=0)

    def test_empty_grid(self, labeled_dataset):
        with pytest.raises(UsageError):
            score_grid(labeled_dataset, [])

    def test_parallel_matches_serial(self, labeled_dataset, small_grid):
        serial = score_grid(labeled_dataset, small_grid, workers=1)
        parallel = score_grid(labeled_dataset, small_grid, workers=4)
        np.testing.assert_array_equal(serial.full_auc, parallel.full_auc)
        np.testing.assert_array_equal(serial.full_rws, parallel.full_rws)
