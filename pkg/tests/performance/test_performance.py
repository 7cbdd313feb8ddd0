#!/usr/bin/env python3
"""
DRAMA 性能与规模化验收测试

覆盖内容:
- 度量、打分等基础算子的耗时上限
- desk 规模模拟挑战上 DRAMA 对 LOF / iForest 的优势
- 真实数据上的竞争力：wine 随仓库提供，lympho 文件缺失时相应用例跳过
- 调参结果随已见异常数的变化趋势

运行方式:
pytest tests/performance -m slow
"""

import time
from pathlib import Path

import numpy as np
import pytest

from drama.service.data.data_model import LabelVector
from drama.service.experiments.curves import evaluate_dataset, run_challenge_curve
from drama.service.experiments.odds_suite import load_labeled_dataset
from drama.service.metrics.distances import mahalanobis, minkowski
from drama.service.scoring.scoring import auc

ODDS_DIR = Path(__file__).resolve().parent.parent / "data" / "odds"
SEEDS = range(5)


@pytest.fixture
def parallel_config(mock_config_loading):
    """默认网格，线程数取 CPU 核数"""
    config = mock_config_loading.return_value
    config.global_config.runner.workers = None
    return config


def _best_means(points, n_seen):
    return {p.algorithm: p.mean_auc for p in points if p.n_seen == n_seen}


def _timed(func):
    start = time.perf_counter()
    result = func()
    return result, time.perf_counter() - start


@pytest.mark.slow
class TestOperatorRuntime:
    def test_mahalanobis_identity_matches_l2(self, rng):
        def run():
            pairs = rng.normal(size=(100, 2, 8))
            identity = np.eye(8)
            for u, v in pairs:
                assert mahalanobis(u, v, identity) == pytest.approx(
                    minkowski(u, v, 2), abs=1e-12
                )

        _, elapsed = _timed(run)
        assert elapsed < 1.0

    def test_auc_pair_counting(self, rng):
        def run():
            for _ in range(100):
                n = int(rng.integers(2, 51))
                flags = rng.random(n) < 0.3
                flags[0], flags[1] = True, False
                scores = rng.integers(0, 10, size=n).astype(float)
                pos, neg = scores[flags], scores[~flags]
                wins = (pos[:, None] > neg[None, :]).sum()
                ties = (pos[:, None] == neg[None, :]).sum()
                expected = (wins + 0.5 * ties) / (pos.size * neg.size)
                assert auc(scores, LabelVector(flags)) == pytest.approx(expected, abs=1e-12)

        _, elapsed = _timed(run)
        assert elapsed < 5.0


@pytest.mark.slow
class TestChallengeDominance:
    @pytest.mark.parametrize("challenge", ["c1a", "c1b", "c2b"])
    def test_drama_not_worse_than_baselines(self, parallel_config, challenge):
        points = run_challenge_curve(challenge, [5], SEEDS)
        means = _best_means(points, 5)
        assert means["drama"] >= max(means["lof"], means["iforest"]) - 0.02

    def test_c2a_close_to_better_baseline(self, parallel_config):
        points = run_challenge_curve("c2a", [5], SEEDS)
        means = _best_means(points, 5)
        assert means["drama"] >= max(means["lof"], means["iforest"]) - 0.05

    def test_tuning_improves_with_more_seen(self, parallel_config):
        n_seen = [1, 2, 5, 10]
        points = run_challenge_curve("c2a", n_seen, SEEDS, algorithms=["drama"])
        means = [_best_means(points, n)["drama"] for n in n_seen]
        # 允许 5 个种子平均带来的少量抖动
        for before, after in zip(means, means[1:]):
            assert after >= before - 0.02
        assert means[-1] >= means[0]


def _odds(name):
    path = ODDS_DIR / f"{name}.csv"
    if not path.exists():
        pytest.skip(f"缺少真实数据文件 {path}")
    return load_labeled_dataset(path)


def _available_odds():
    return [
        load_labeled_dataset(ODDS_DIR / f"{name}.csv")
        for name in ("lympho", "wine")
        if (ODDS_DIR / f"{name}.csv").exists()
    ]


@pytest.mark.slow
class TestRealData:
    @pytest.mark.parametrize(
        "name, shape, n_outliers", [("lympho", (148, 18), 6), ("wine", (129, 13), 10)]
    )
    def test_shapes(self, name, shape, n_outliers):
        dataset = _odds(name)
        assert dataset.data.values.shape == shape
        assert dataset.n_outliers == n_outliers

    def test_drama_competitive_with_lof(self, parallel_config):
        """随仓库提供的 wine 总会参与；lympho 存在时一并比较"""
        datasets = _available_odds()
        assert datasets, "tests/data/odds 中至少应有 wine.csv"
        drama_wins = []
        for dataset in datasets:
            best = {"drama": 0.0, "lof": 0.0}
            for seed in range(10):
                run = evaluate_dataset(dataset, [5], seed, algorithms=["drama", "lof"])
                for row in run.rows:
                    best[row.algorithm] = max(best[row.algorithm], row.auc)
            drama_wins.append(best["drama"] >= best["lof"])
        assert any(drama_wins)
