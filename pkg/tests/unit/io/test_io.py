"""
数据集与结果文件读写单元测试
"""

import numpy as np
import pytest

from drama.base.error_exceptions import (
    BadLabelValueError,
    DataError,
    DramaIOError,
    NonFiniteEntryError,
    NonNumericFeatureError,
    ParseError,
)
from drama.service.baselines.baseline_configs import LofConfig
from drama.service.data.data_model import DataMatrix, Dataset, LabelVector
from drama.service.detector.pipeline import AnomalyRanking
from drama.service.detector.tuning import score_grid, select_with_seen
from drama.service.io.dataset_io import (
    read_dataset,
    read_metadata,
    write_dataset,
    write_metadata,
)
from drama.service.io.file_writer import atomic_write, atomic_write_text
from drama.service.io.results_io import (
    RESULT_COLUMNS,
    ResultRow,
    read_ranking,
    read_results,
    write_ranking,
    write_results,
    write_score_table,
    write_table,
)
from drama.service.simgen.challenges import ChallengeSpec, generate


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


@pytest.mark.unit
class TestReadDataset:
    def test_minimal_file(self, tmp_path):
        path = _write(tmp_path / "tiny.csv", "a,b,label\n1.5,2,0\n-3,4e-3,1\n")
        dataset = read_dataset(path)
        assert dataset.name == "tiny"
        np.testing.assert_array_equal(dataset.data.values, [[1.5, 2.0], [-3.0, 0.004]])
        assert dataset.labels.to_ints().tolist() == [0, 1]

    def test_without_label_column(self, tmp_path):
        path = _write(tmp_path / "bare.csv", "x,y,z\n1,2,3\n4,5,6\n")
        dataset = read_dataset(path, name="custom")
        assert dataset.labels is None
        assert dataset.name == "custom"
        assert dataset.data.n_f == 3

    def test_label_column_anywhere(self, tmp_path):
        path = _write(tmp_path / "mid.csv", "x,label,y\n1,1,2\n3,0,4\n")
        dataset = read_dataset(path)
        np.testing.assert_array_equal(dataset.data.values, [[1.0, 2.0], [3.0, 4.0]])
        assert dataset.labels.to_ints().tolist() == [1, 0]

    def test_ragged_row_reports_line(self, tmp_path):
        path = _write(tmp_path / "ragged.csv", "a,b\n1,2\n3,4,5\n")
        with pytest.raises(ParseError) as excinfo:
            read_dataset(path)
        assert excinfo.value.line == 3

    def test_empty_file(self, tmp_path):
        with pytest.raises(ParseError) as excinfo:
            read_dataset(_write(tmp_path / "empty.csv", ""))
        assert excinfo.value.line == 1

    def test_non_numeric_feature(self, tmp_path):
        path = _write(tmp_path / "text.csv", "a,b\n1,x\n2,y\n")
        with pytest.raises(NonNumericFeatureError) as excinfo:
            read_dataset(path)
        assert excinfo.value.column == "b"

    @pytest.mark.parametrize("bad", ["2", "yes", "0.5"])
    def test_bad_label(self, tmp_path, bad):
        path = _write(tmp_path / "labels.csv", f"a,label\n1,0\n2,{bad}\n")
        with pytest.raises(BadLabelValueError):
            read_dataset(path)

    def test_missing_value(self, tmp_path):
        path = _write(tmp_path / "hole.csv", "a,b\n1,\n2,3\n")
        with pytest.raises(NonFiniteEntryError):
            read_dataset(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DramaIOError):
            read_dataset(tmp_path / "absent.csv")


@pytest.mark.unit
class TestWriteDataset:
    def test_round_trip_is_exact(self, tmp_path, rng):
        values = rng.normal(size=(15, 4)) * 10.0 ** rng.integers(-8, 8, size=(15, 4))
        dataset = Dataset(
            DataMatrix(values), LabelVector(rng.random(15) < 0.3), name="exact"
        )
        path = write_dataset(dataset, tmp_path / "out" / "exact.csv")

        loaded = read_dataset(path)
        np.testing.assert_array_equal(loaded.data.values, values)
        np.testing.assert_array_equal(loaded.labels.is_outlier, dataset.labels.is_outlier)
        assert path.read_text(encoding="utf-8").splitlines()[0] == "f0,f1,f2,f3,label"

    def test_generated_output_is_byte_stable(self, tmp_path):
        spec = ChallengeSpec.preset("c1a", seed=3, n_f=12, n_inliers=5, n_anomalies=2)
        first = write_dataset(generate(spec).dataset, tmp_path / "a.csv").read_bytes()
        second = write_dataset(generate(spec).dataset, tmp_path / "b.csv").read_bytes()
        assert first == second
        assert b"\r\n" not in first

    def test_metadata(self, tmp_path):
        generated = generate(
            ChallengeSpec.preset("c2a", seed=2, n_f=10, n_inliers=1, n_anomalies=2)
        )
        path = write_metadata(generated, tmp_path / "meta.json")
        text = path.read_text(encoding="utf-8")
        assert text.endswith("}\n")
        metadata = read_metadata(path)
        assert metadata["name"] == "c2a-k2-seed2"
        assert metadata["spec"]["seed"] == 2
        assert len(metadata["anomalies"]) == 2

    def test_metadata_errors(self, tmp_path):
        with pytest.raises(DramaIOError):
            read_metadata(tmp_path / "none.json")
        with pytest.raises(ParseError):
            read_metadata(_write(tmp_path / "bad.json", "{\n  oops\n"))


@pytest.mark.unit
class TestFileWriter:
    def test_leaves_no_temp_files(self, tmp_path):
        atomic_write_text(tmp_path / "a.txt", "hello\n")
        assert [p.name for p in tmp_path.iterdir()] == ["a.txt"]

    def test_failed_write_keeps_old_content(self, tmp_path):
        target = atomic_write_text(tmp_path / "a.txt", "old\n")

        def explode(handle):
            handle.write("partial")
            raise OSError("磁盘已满")

        with pytest.raises(DramaIOError):
            atomic_write(target, explode)
        assert target.read_text(encoding="utf-8") == "old\n"
        assert [p.name for p in tmp_path.iterdir()] == ["a.txt"]


def _row(**overrides):
    params = dict(
        dataset="toy",
        algorithm="drama",
        config="drama:drt=pca,metric=l1,ns=1,m=2,decode=on,seed=0",
        seed=0,
        n_seen=5,
        auc=0.8125,
        rws=2 / 3,
        seconds=0.0,
    )
    params.update(overrides)
    return ResultRow(**params)


@pytest.mark.unit
class TestResults:
    def test_empty_results_is_header_only(self, tmp_path):
        path = write_results([], tmp_path / "results.csv")
        assert path.read_text(encoding="utf-8") == ",".join(RESULT_COLUMNS) + "\n"
        assert read_results(path) == []

    def test_single_row_round_trip(self, tmp_path):
        row = _row()
        path = write_results([row], tmp_path / "results.csv")
        assert read_results(path) == [row]

    def test_append(self, tmp_path):
        path = tmp_path / "results.csv"
        write_results([_row(seed=0)], path)
        write_results([_row(seed=1), _row(seed=2, algorithm="lof")], path, append=True)
        assert [r.seed for r in read_results(path)] == [0, 1, 2]
        write_results([_row(seed=9)], path)
        assert [r.seed for r in read_results(path)] == [9]

    def test_append_to_foreign_file(self, tmp_path):
        path = _write(tmp_path / "results.csv", "a,b\n1,2\n")
        with pytest.raises(ParseError):
            write_results([_row()], path, append=True)

    @pytest.mark.parametrize(
        "overrides", [{"auc": 1.2}, {"rws": -0.1}, {"auc": float("nan")}, {"seconds": -1.0}]
    )
    def test_row_validation(self, overrides):
        with pytest.raises(DataError):
            _row(**overrides)


@pytest.mark.unit
class TestRankingAndTables:
    def test_ranking_round_trip(self, tmp_path):
        ranking = AnomalyRanking.from_scores(np.array([0.3, 1.25, 0.3, 7.0]), LofConfig(3))
        path = write_ranking(ranking, tmp_path / "ranking.csv")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "index,score,rank"
        assert lines[1] == "3,7.0,1"

        scores, order = read_ranking(path)
        np.testing.assert_array_equal(scores, ranking.scores)
        np.testing.assert_array_equal(order, ranking.order)

    def test_ranking_must_be_permutation(self, tmp_path):
        path = _write(tmp_path / "ranking.csv", "index,score,rank\n0,1.0,1\n0,0.5,2\n")
        with pytest.raises(ParseError):
            read_ranking(path)

    def test_score_table_marks_best(self, tmp_path, labeled_dataset):
        candidates = [LofConfig(5), LofConfig(10), LofConfig(20)]
        scores = score_grid(labeled_dataset, candidates)
        results = [select_with_seen(scores, 2, seed) for seed in (0, 1)]
        path = write_score_table(results, tmp_path / "table.csv")

        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "seed,n_seen,config,partial_auc,partial_rws,full_auc,full_rws,best"
        assert len(lines) == 1 + 2 * 3
        best_flags = [line.rsplit(",", 1)[1] for line in lines[1:]]
        assert best_flags.count("1") == 2

    def test_write_table_rejects_unknown_columns(self, tmp_path):
        path = write_table([{"a": 1, "b": float("nan")}], ["a", "b"], tmp_path / "t.csv")
        assert path.read_text(encoding="utf-8") == "a,b\n1,nan\n"
        with pytest.raises(ValueError):
            write_table([{"c": 1}], ["a"], tmp_path / "u.csv")
