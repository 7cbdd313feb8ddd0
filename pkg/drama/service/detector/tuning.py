"""
已见异常超参选择

1. score_grid：在完整数据集上为每个候选配置打分（与 n_seen 无关，只算一次）；
2. select_with_seen：带种子抽取 n_seen 个离群点，评估标签 = 全部 inlier + 已见离群点，
   取部分标注 AUC（或 RWS）最大的配置，平局按网格顺序。

同一种子下已见集合取自同一随机排列的前缀，因此不同 n_seen 的已见集合嵌套。
"""

import logging
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from drama.base.error_category import ErrorCategory
from drama.base.error_collector import error_collector
from drama.base.error_exceptions import (
    DegenerateLabelsError,
    DramaError,
    NotEnoughOutliersError,
    NumericalError,
    UsageError,
)
from drama.base.logger import get_structured_logger
from drama.service.data.data_model import Dataset, LabelVector
from drama.service.detector.pipeline import (
    AnomalyRanking,
    ReductionCache,
    run_candidate,
)
from drama.service.detector.run_config import Candidate
from drama.service.detector.worker_pool import run_ordered
from drama.service.scoring.scoring import auc, ranking_order, rws

logger = logging.getLogger(__name__)
structured_logger = get_structured_logger("tuning")

CRITERIA = ("auc", "rws")


@dataclass(frozen=True)
class GridScores:
    """网格中每个候选在完整数据集上的排序；失败单元为 None"""

    dataset: Dataset
    candidates: List[Candidate]
    rankings: List[Optional[AnomalyRanking]]
    full_auc: np.ndarray
    full_rws: np.ndarray

    @property
    def n_failed(self) -> int:
        return sum(ranking is None for ranking in self.rankings)


@dataclass(frozen=True)
class TableRow:
    """调参表中的一行；失败单元的分数为 NaN"""

    config_id: str
    candidate: Candidate
    partial_auc: float
    partial_rws: float
    full_auc: float
    full_rws: float


@dataclass(frozen=True)
class TuningResult:
    """最佳配置与完整分数表"""

    best: Candidate
    table: List[TableRow]
    n_seen: int
    seed: int
    criterion: str = "auc"
    seen_indices: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=int))

    @property
    def best_row(self) -> TableRow:
        return next(row for row in self.table if row.candidate is self.best)


def _score_cell(
    data, candidate: Candidate, cache: ReductionCache, dataset_name: str
) -> Optional[AnomalyRanking]:
    try:
        return run_candidate(data, candidate, cache)
    except DramaError as e:
        if not ErrorCategory.should_skip_cell(e):
            raise
        error_collector.record_error(e, f"grid:{candidate.config_id}")
        structured_logger.log_run_result(
            dataset=dataset_name,
            algorithm=candidate.algorithm,
            config_id=candidate.config_id,
            auc=None,
            rws=None,
            success=False,
            extra_data={"error": str(e)},
        )
        return None


def _full_metrics(ranking: Optional[AnomalyRanking], labels: Optional[LabelVector]):
    if ranking is None or labels is None:
        return np.nan, np.nan
    if labels.n_outliers == 0 or labels.n_inliers == 0:
        return np.nan, np.nan
    return auc(ranking.scores, labels), rws(ranking.order, labels)


def score_grid(
    dataset: Dataset, candidates: Sequence[Candidate], workers: Optional[int] = None
) -> GridScores:
    """
    转导地为每个候选打分，结果按网格顺序

    数值失败的单元（RecoveryStrategy.SKIP_CELL）记为 None 并写入错误收集器；
    其他错误直接抛出。
    """
    candidates = list(candidates)
    if not candidates:
        raise UsageError("候选配置网格不能为空")

    start_time = time.time()
    cache = ReductionCache(dataset.data)
    jobs = [
        (lambda c=c: _score_cell(dataset.data, c, cache, dataset.name))
        for c in candidates
    ]
    rankings = run_ordered(jobs, workers)

    metrics = [_full_metrics(r, dataset.labels) for r in rankings]
    result = GridScores(
        dataset=dataset,
        candidates=candidates,
        rankings=rankings,
        full_auc=np.array([m[0] for m in metrics], dtype=np.float64),
        full_rws=np.array([m[1] for m in metrics], dtype=np.float64),
    )

    if result.n_failed:
        logger.warning(
            f"{dataset.name}: {result.n_failed}/{len(candidates)} 个网格单元数值失败，已跳过"
        )
    structured_logger.log_performance(
        "score_grid",
        round((time.time() - start_time) * 1000, 2),
        extra_data={
            "dataset": dataset.name,
            "cells": len(candidates),
            "failed": result.n_failed,
            "reductions": len(cache),
        },
    )
    return result


def seen_outliers(labels: LabelVector, n_seen: int, seed: int) -> np.ndarray:
    """
    带种子无放回抽取 n_seen 个离群点下标

    Raises:
        UsageError: n_seen < 1
        NotEnoughOutliersError: 离群点不足
    """
    if n_seen < 1:
        raise UsageError(f"n_seen 必须 >= 1: {n_seen}")
    outliers = labels.outlier_indices()
    if n_seen > outliers.shape[0]:
        raise NotEnoughOutliersError(n_seen, int(outliers.shape[0]))
    rng = np.random.default_rng(seed)
    return rng.permutation(outliers)[:n_seen]


def partial_labels(labels: LabelVector, seen: np.ndarray) -> tuple:
    """返回 (参与评估的行下标, 这些行上的标签)"""
    keep = ~labels.is_outlier
    keep[seen] = True
    rows = np.flatnonzero(keep)
    return rows, LabelVector(labels.is_outlier[rows])


def select_with_seen(
    grid_scores: GridScores,
    n_seen: int,
    seed: int,
    criterion: str = "auc",
) -> TuningResult:
    """在部分标注上选出最佳配置"""
    criterion = str(criterion).lower()
    if criterion not in CRITERIA:
        raise UsageError(f"选择准则无效: {criterion}，可选: {', '.join(CRITERIA)}")
    labels = grid_scores.dataset.labels
    if labels is None:
        raise UsageError(f"数据集 {grid_scores.dataset.name} 没有标签，无法调参")
    if labels.n_inliers == 0:
        raise DegenerateLabelsError(0, labels.n_outliers)

    seen = seen_outliers(labels, n_seen, seed)
    rows, sub_labels = partial_labels(labels, seen)

    table: List[TableRow] = []
    for index, (candidate, ranking) in enumerate(
        zip(grid_scores.candidates, grid_scores.rankings)
    ):
        if ranking is None:
            part_auc = part_rws = np.nan
        else:
            sub_scores = ranking.scores[rows]
            part_auc = auc(sub_scores, sub_labels)
            part_rws = rws(ranking_order(sub_scores), sub_labels)
        table.append(
            TableRow(
                config_id=candidate.config_id,
                candidate=candidate,
                partial_auc=float(part_auc),
                partial_rws=float(part_rws),
                full_auc=float(grid_scores.full_auc[index]),
                full_rws=float(grid_scores.full_rws[index]),
            )
        )

    values = np.array(
        [row.partial_auc if criterion == "auc" else row.partial_rws for row in table]
    )
    if np.all(np.isnan(values)):
        raise NumericalError(
            f"{grid_scores.dataset.name}: 所有网格单元均数值失败",
            {"cells": len(table)},
        )
    best_index = int(np.argmax(np.where(np.isnan(values), -np.inf, values)))
    best = table[best_index]

    structured_logger.log_run_result(
        dataset=grid_scores.dataset.name,
        algorithm=best.candidate.algorithm,
        config_id=best.config_id,
        auc=best.full_auc,
        rws=best.full_rws,
        extra_data={
            "n_seen": n_seen,
            "seed": seed,
            "criterion": criterion,
            "partial_auc": best.partial_auc,
        },
    )
    return TuningResult(
        best=best.candidate,
        table=table,
        n_seen=n_seen,
        seed=seed,
        criterion=criterion,
        seen_indices=seen,
    )


def tune_with_seen_anomalies(
    dataset: Dataset,
    n_seen: int,
    grid: Sequence[Candidate],
    seed: int,
    criterion: str = "auc",
    workers: Optional[int] = None,
) -> TuningResult:
    """
    抽取已见异常、评估整个网格并返回最佳配置与分数表

    Raises:
        NotEnoughOutliersError: 数据集离群点少于 n_seen
    """
    if dataset.labels is None:
        raise UsageError(f"数据集 {dataset.name} 没有标签，无法调参")
    # 打分前校验 n_seen
    seen_outliers(dataset.labels, n_seen, seed)
    return select_with_seen(
        score_grid(dataset, grid, workers), n_seen, seed, criterion=criterion
    )
