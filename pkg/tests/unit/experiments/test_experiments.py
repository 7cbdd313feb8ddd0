"""
实验编排与汇总单元测试
"""

import logging
import math
import shutil
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from drama.base.error_exceptions import (
    DramaIOError,
    NotEnoughOutliersError,
    UsageError,
)
from drama.service.baselines.baseline_configs import LofConfig
from drama.service.data.data_model import DataMatrix, Dataset, LabelVector
from drama.service.detector.run_config import RunConfig
from drama.service.detector.tuning import TableRow
from drama.service.experiments import curves
from drama.service.experiments.curves import (
    CurvePoint,
    _seeds,
    aggregate,
    challenge_run,
    effective_n_seen,
    evaluate_dataset,
    run_challenge_curve,
)
from drama.service.experiments.odds_suite import (
    best_auc_winners,
    discover_datasets,
    load_labeled_dataset,
    run_odds_suite,
)
from drama.service.experiments.reporting import (
    axis_summary,
    figure_name,
    flatten_tables,
    format_points,
    write_axis_summary,
    write_curve_csv,
    write_suite_csv,
)
from drama.service.io.dataset_io import write_dataset
from drama.service.io.results_io import ResultRow
from drama.service.simgen.challenges import generate


def _row(dataset="toy", algorithm="drama", seed=0, n_seen=1, auc=0.9, rws=0.5):
    return ResultRow(
        dataset=dataset,
        algorithm=algorithm,
        config=f"{algorithm}:x",
        seed=seed,
        n_seen=n_seen,
        auc=auc,
        rws=rws,
    )


@pytest.fixture
def tiny_generate(mocker):
    """把挑战数据缩小到 40 + 8 行、20 维"""

    def shrink(spec):
        return generate(replace(spec, n_f=20, n_inliers=40, n_anomalies=8))

    return mocker.patch.object(curves, "generate", side_effect=shrink)


@pytest.mark.unit
class TestNSeen:
    def test_clipped_and_deduplicated(self):
        assert effective_n_seen([1, 2, 5, 10, 20, 50], 6) == [1, 2, 5, 6]
        assert effective_n_seen([10, 20], 4) == [4]
        assert effective_n_seen([3, 1], 5) == [3, 1]

    @pytest.mark.parametrize("values", [[], [0, 1], [-2]])
    def test_invalid(self, values):
        with pytest.raises(UsageError):
            effective_n_seen(values, 5)

    def test_no_outliers(self):
        with pytest.raises(NotEnoughOutliersError):
            effective_n_seen([1], 0)

    def test_desk_seed_limit(self, caplog):
        caplog.set_level(logging.WARNING)
        assert _seeds(range(8), "desk") == [0, 1, 2, 3, 4]
        assert any("desk" in r.message for r in caplog.records)
        assert _seeds(range(8), "paper") == list(range(8))
        with pytest.raises(UsageError):
            _seeds([], "desk")


@pytest.mark.unit
class TestAggregate:
    def test_single_seed_mean_equals_best(self):
        points = aggregate([_row(auc=0.7, rws=0.4)])
        assert points == [CurvePoint("drama", 1, 0.7, 0.7, 0.4, 0.4, 1)]

    def test_mean_and_best(self):
        rows = [
            _row(seed=0, auc=0.6, rws=0.2),
            _row(seed=1, auc=0.8, rws=0.6),
            _row(algorithm="lof", seed=0, auc=0.5),
            _row(seed=0, n_seen=2, auc=0.9),
        ]
        points = aggregate(rows)
        assert [(p.algorithm, p.n_seen) for p in points] == [
            ("drama", 1),
            ("lof", 1),
            ("drama", 2),
        ]
        first = points[0]
        assert first.mean_auc == pytest.approx(0.7)
        assert first.best_auc == 0.8
        assert first.mean_rws == pytest.approx(0.4)
        assert first.n_runs == 2
        assert all(p.mean_auc <= p.best_auc for p in points)

    def test_identical_values_mean_not_above_best(self):
        value = 0.1 + 0.2
        points = aggregate([_row(seed=s, auc=value) for s in range(3)])
        assert points[0].mean_auc <= points[0].best_auc


@pytest.mark.unit
class TestEvaluateDataset:
    def test_rows_and_tables(self, labeled_dataset, small_app_config):
        run = evaluate_dataset(labeled_dataset, [1, 2, 10], seed=0)
        assert len(run.rows) == 3 * 3
        assert [(r.algorithm, r.n_seen) for r in run.rows[:3]] == [
            ("drama", 1),
            ("drama", 2),
            ("drama", 6),
        ]
        assert all(r.seconds == 0.0 for r in run.rows)
        assert len(run.tables) == 1
        assert len(run.tables[0]) == 18
        assert all(0.0 <= r.auc <= 1.0 for r in run.rows)
        assert {r.config.split(":")[0] for r in run.rows} == {"drama", "lof", "iforest"}

    def test_record_time(self, labeled_dataset, small_app_config):
        run = evaluate_dataset(
            labeled_dataset, [1], seed=0, algorithms=["lof"], record_time=True
        )
        assert len(run.rows) == 1
        assert run.rows[0].seconds >= 0.0
        assert run.tables == []


@pytest.mark.unit
class TestChallengeCurve:
    def test_eighteen_points(self, small_app_config, tiny_generate):
        points = run_challenge_curve("c1a", [1, 2, 3, 5, 6, 8], seeds=[0, 1])
        assert len(points) == 3 * 6
        assert {p.algorithm for p in points} == {"drama", "lof", "iforest"}
        assert all(p.n_runs == 2 for p in points)
        assert all(p.mean_auc <= p.best_auc for p in points)
        assert tiny_generate.call_count == 2

    def test_seed_selects_shape(self, small_app_config, tiny_generate):
        run = challenge_run("c2a", [1], seeds=[13], algorithms=["iforest"])
        assert run.rows[0].dataset == "c2a-k3-seed13"

    def test_paper_scale_warns(self, small_app_config, tiny_generate, caplog):
        caplog.set_level(logging.WARNING)
        challenge_run("c1a", [1], seeds=[0], scale="paper", algorithms=["lof"])
        assert any("paper" in r.message for r in caplog.records)
        spec = tiny_generate.call_args[0][0]
        assert (spec.n_inliers, spec.n_anomalies) == (1000, 50)


def _write_suite_dir(tmp_path, labeled_dataset, rng):
    write_dataset(labeled_dataset, tmp_path / "a_toy.csv")
    values = np.vstack([rng.normal(size=(40, 3)), rng.normal(size=(4, 3)) + 6.0])
    second = Dataset(
        DataMatrix(values), LabelVector(np.r_[np.zeros(40), np.ones(4)].astype(bool))
    )
    write_dataset(second, tmp_path / "b_small.csv")
    write_dataset(Dataset(DataMatrix(values)), tmp_path / "c_bare.csv")
    (tmp_path / "notes.txt").write_text("ignored", encoding="utf-8")
    return tmp_path


@pytest.mark.unit
class TestOddsSuite:
    def test_suite(self, tmp_path, labeled_dataset, rng, small_app_config):
        directory = _write_suite_dir(tmp_path, labeled_dataset, rng)
        result = run_odds_suite(directory, seeds=[0], n_seen_list=[1, 2])

        assert result.skipped == ["c_bare.csv"]
        assert len(result.rows) == 2 * 3 * 2
        assert set(result.winners) == {"a_toy", "b_small"}
        assert sum(result.win_counts.values()) == 2
        assert len(result.tables) == 2
        assert "2 个数据集" in result.summary()

    def test_discover_sorted_csv_only(self, tmp_path, labeled_dataset, rng):
        directory = _write_suite_dir(tmp_path, labeled_dataset, rng)
        names = [p.name for p in discover_datasets(directory)]
        assert names == ["a_toy.csv", "b_small.csv", "c_bare.csv"]

    def test_missing_directory(self, tmp_path):
        with pytest.raises(DramaIOError):
            discover_datasets(tmp_path / "nowhere")
        with pytest.raises(DramaIOError):
            discover_datasets(tmp_path)

    def test_single_class_file_is_skipped(self, tmp_path):
        path = tmp_path / "flat.csv"
        path.write_text("a,label\n1,0\n2,0\n", encoding="utf-8")
        assert load_labeled_dataset(path) is None

    def test_no_usable_dataset(self, tmp_path, small_app_config):
        (tmp_path / "flat.csv").write_text("a,label\n1,0\n2,0\n", encoding="utf-8")
        with pytest.raises(DramaIOError):
            run_odds_suite(tmp_path, seeds=[0], n_seen_list=[1])

    @pytest.mark.parametrize("seeds, n_seen", [([0], []), ([], [1])])
    def test_empty_lists(self, tmp_path, seeds, n_seen):
        with pytest.raises(UsageError):
            run_odds_suite(tmp_path, seeds=seeds, n_seen_list=n_seen)

    def test_winner_ties_go_to_earlier_algorithm(self):
        rows = [
            _row(dataset="d1", algorithm="lof", auc=0.9),
            _row(dataset="d1", algorithm="drama", auc=0.9),
            _row(dataset="d2", algorithm="iforest", auc=0.95),
            _row(dataset="d2", algorithm="drama", auc=0.7),
            _row(dataset="d2", algorithm="drama", seed=1, auc=0.8),
        ]
        assert best_auc_winners(rows) == {"d1": "drama", "d2": "iforest"}


ODDS_DIR = Path(__file__).resolve().parents[2] / "data" / "odds"


def _categorical_stand_in(rng):
    """148 × 18 的类别型数据（取值 1..4），最后 6 行为离群点"""
    values = rng.integers(1, 3, size=(148, 18)).astype(float)
    values[142:] = rng.integers(3, 5, size=(6, 18))
    flags = np.zeros(148, dtype=bool)
    flags[142:] = True
    return Dataset(DataMatrix(values), LabelVector(flags), name="categorical")


@pytest.mark.unit
class TestShippedOddsData:
    def test_wine_shape(self):
        """随仓库提供的 wine：129 × 13，10 个离群点"""
        dataset = load_labeled_dataset(ODDS_DIR / "wine.csv")
        assert dataset is not None
        assert dataset.data.values.shape == (129, 13)
        assert dataset.n_outliers == 10
        assert dataset.labels.outlier_indices().tolist() == list(range(10))

    def test_suite_over_two_datasets(self, tmp_path, rng, small_app_config):
        shutil.copy(ODDS_DIR / "wine.csv", tmp_path / "wine.csv")
        write_dataset(_categorical_stand_in(rng), tmp_path / "categorical.csv")

        result = run_odds_suite(tmp_path, seeds=[0, 1], n_seen_list=[5])
        assert result.skipped == []
        assert len(result.rows) == 2 * 3 * 2
        assert set(result.winners) == {"categorical", "wine"}
        wine_auc = max(r.auc for r in result.rows if r.dataset == "wine")
        assert 0.5 < wine_auc <= 1.0


def _table_row(candidate, full_auc):
    return TableRow(
        config_id=candidate.config_id,
        candidate=candidate,
        partial_auc=full_auc,
        partial_rws=0.0,
        full_auc=full_auc,
        full_rws=0.0,
    )


@pytest.mark.unit
class TestReporting:
    def test_axis_summary(self):
        table = [
            _table_row(RunConfig("pca", "l1"), 0.9),
            _table_row(RunConfig("pca", "l2"), 0.7),
            _table_row(RunConfig("nmf", "l1"), 0.5),
            _table_row(RunConfig("nmf", "l2"), math.nan),
            _table_row(LofConfig(5), 1.0),
        ]
        summary = axis_summary(table)
        assert summary.by_drt["pca"] == (pytest.approx(0.8), 2)
        assert summary.by_drt["nmf"] == (0.5, 1)
        assert summary.by_metric["l1"] == (pytest.approx(0.7), 2)
        assert summary.best_drt() == "pca"
        assert summary.best_metric() == "l1"
        assert len(flatten_tables([table[:2], table[2:]])) == 5

    def test_curve_and_axis_writers(self, tmp_path):
        points = aggregate([_row(auc=0.75), _row(algorithm="lof", auc=0.5)])
        path = write_curve_csv({"c1a": points, "c2a": points[:1]}, tmp_path / "fig4.csv")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "challenge,algorithm,n_seen,mean_auc,best_auc,mean_rws,best_rws,n_runs"
        assert lines[1] == "c1a,drama,1,0.75,0.75,0.5,0.5,1"
        assert len(lines) == 4

        summary = axis_summary([_table_row(RunConfig("ica", "chebyshev"), 0.6)])
        axis_lines = write_axis_summary(summary, tmp_path / "axis.csv").read_text(
            encoding="utf-8"
        ).splitlines()
        assert axis_lines == [
            "axis,name,mean_auc,n_cells",
            "drt,ica,0.6,1",
            "metric,chebyshev,0.6,1",
        ]

    def test_suite_writer_aggregates_per_dataset(self, tmp_path):
        rows = [
            _row(dataset="d1", seed=0, auc=0.6),
            _row(dataset="d1", seed=1, auc=0.8),
            _row(dataset="d2", seed=0, auc=0.9),
        ]
        lines = write_suite_csv(rows, tmp_path / "fig6.csv").read_text(
            encoding="utf-8"
        ).splitlines()
        assert lines[0].startswith("dataset,algorithm,n_seen")
        fields = lines[1].split(",")
        assert fields[:3] == ["d1", "drama", "1"]
        assert float(fields[3]) == pytest.approx(0.7)
        assert fields[4] == "0.8" and fields[-1] == "2"
        assert lines[2].startswith("d2,drama,1,0.9,0.9")

    def test_figure_name_and_format(self):
        assert figure_name("c1b") == "fig4.csv"
        assert figure_name("c2a") == "fig5.csv"
        text = format_points([CurvePoint("lof", 2, 0.5, 0.75, 0.25, 0.5, 3)])
        assert text.splitlines()[1] == "lof,2,0.5,0.75,0.25,0.5"
