"""
真实数据套件：目录下全部带标签 CSV × 算法 × 种子
"""

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from drama.base.error_exceptions import (
    DataError,
    DegenerateLabelsError,
    DramaIOError,
    UsageError,
)
from drama.base.error_handler import with_error_handling
from drama.base.logger import get_structured_logger
from drama.service.data.data_model import Dataset
from drama.service.detector.grid import ALGORITHMS
from drama.service.detector.tuning import TableRow
from drama.service.experiments.curves import ExperimentRun, evaluate_dataset
from drama.service.io.dataset_io import read_dataset
from drama.service.io.results_io import ResultRow

logger = logging.getLogger(__name__)
structured_logger = get_structured_logger("experiments")


@dataclass(frozen=True)
class SuiteResult:
    """结果行、每个数据集按最佳 AUC 的胜者、胜场数与被跳过的文件"""

    rows: List[ResultRow]
    winners: Dict[str, str]
    win_counts: Dict[str, int]
    skipped: List[str] = field(default_factory=list)
    tables: List[List[TableRow]] = field(default_factory=list)

    def summary(self) -> str:
        counts = ", ".join(f"{algo} {n}" for algo, n in self.win_counts.items())
        return f"{len(self.winners)} 个数据集的胜场: {counts}"


def discover_datasets(dataset_dir: Union[str, Path]) -> List[Path]:
    """目录下的 CSV 文件，按文件名排序"""
    directory = Path(dataset_dir)
    if not directory.is_dir():
        raise DramaIOError(f"数据目录不存在: {directory}", str(directory))
    paths = sorted(directory.glob("*.csv"))
    if not paths:
        raise DramaIOError(f"目录中没有 CSV 数据集: {directory}", str(directory))
    return paths


@with_error_handling(exceptions=DataError, default_return=None, log_level="warning")
def load_labeled_dataset(path: Union[str, Path]) -> Optional[Dataset]:
    """读取并要求同时含 inlier 与 outlier；数据错误时记录并返回 None"""
    dataset = read_dataset(path)
    if dataset.labels is None:
        raise DegenerateLabelsError(dataset.data.n_d, 0)
    if dataset.labels.n_outliers == 0 or dataset.labels.n_inliers == 0:
        raise DegenerateLabelsError(dataset.labels.n_inliers, dataset.labels.n_outliers)
    return dataset


def best_auc_winners(
    rows: Sequence[ResultRow], algorithms: Sequence[str] = ALGORITHMS
) -> Dict[str, str]:
    """每个数据集上最佳 AUC 最高的算法；并列取 algorithms 中靠前者"""
    best: Dict[str, Dict[str, float]] = {}
    for row in rows:
        per_dataset = best.setdefault(row.dataset, {})
        per_dataset[row.algorithm] = max(per_dataset.get(row.algorithm, -1.0), row.auc)

    winners = {}
    for dataset, scores in best.items():
        ranked = [a for a in algorithms if a in scores]
        winners[dataset] = max(ranked, key=lambda a: (scores[a], -ranked.index(a)))
    return winners


def run_odds_suite(
    dataset_dir: Union[str, Path],
    seeds: Sequence[int],
    n_seen_list: Sequence[int],
    algorithms: Sequence[str] = ALGORITHMS,
    workers: Optional[int] = None,
    record_time: Optional[bool] = None,
) -> SuiteResult:
    """
    对目录下每个带标签数据集、每个种子运行全部算法

    Raises:
        UsageError: n_seen 列表或种子列表为空
        DramaIOError: 目录不存在、没有 CSV 或没有可用数据集
    """
    n_seen_list = [int(n) for n in n_seen_list]
    if not n_seen_list:
        raise UsageError("n_seen 列表不能为空")
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise UsageError("种子列表不能为空")

    start_time = time.time()
    run = ExperimentRun()
    skipped: List[str] = []
    for path in discover_datasets(dataset_dir):
        dataset = load_labeled_dataset(path)
        if dataset is None:
            skipped.append(path.name)
            continue
        for seed in seeds:
            run = run.merge(
                evaluate_dataset(
                    dataset, n_seen_list, seed, algorithms, workers, record_time
                )
            )
    if not run.rows:
        raise DramaIOError(f"{dataset_dir} 中没有可用的带标签数据集", str(dataset_dir))

    winners = best_auc_winners(run.rows, algorithms)
    win_counts = {a: sum(w == a for w in winners.values()) for a in algorithms}
    result = SuiteResult(
        rows=run.rows,
        winners=winners,
        win_counts=win_counts,
        skipped=skipped,
        tables=run.tables,
    )
    if skipped:
        logger.warning(f"跳过 {len(skipped)} 个数据集: {', '.join(skipped)}")
    logger.info(result.summary())
    structured_logger.log_performance(
        "odds_suite",
        round((time.time() - start_time) * 1000, 2),
        extra_data={"datasets": len(winners), "rows": len(run.rows)},
    )
    return result
