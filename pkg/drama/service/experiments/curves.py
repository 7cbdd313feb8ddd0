"""
模拟挑战的性能曲线

每个种子生成一份数据（形状/异常类 = seed mod 10），三种算法各自在完整数据集上
为网格打分一次，再对每个 n_seen 做已见异常选择，记录所选配置的全标注 AUC / RWS。
曲线点为同一 (算法, n_seen) 下跨种子的均值与最大值。
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from drama.base.error_exceptions import NotEnoughOutliersError, UsageError
from drama.base.logger import get_structured_logger
from drama.config import get_experiment_config
from drama.service.data.data_model import Dataset
from drama.service.detector.grid import ALGORITHMS, algorithm_grid
from drama.service.detector.tuning import TableRow, score_grid, select_with_seen
from drama.service.io.results_io import ResultRow
from drama.service.simgen.challenges import ChallengeSpec, generate

logger = logging.getLogger(__name__)
structured_logger = get_structured_logger("experiments")

DESK_MAX_SEEDS = 5


@dataclass(frozen=True)
class CurvePoint:
    """曲线上的一点：某算法在某 n_seen 下跨种子的均值与最佳"""

    algorithm: str
    n_seen: int
    mean_auc: float
    best_auc: float
    mean_rws: float
    best_rws: float
    n_runs: int = 1


@dataclass(frozen=True)
class ExperimentRun:
    """结果行，以及 DRAMA 网格的调参表（每个数据集与种子一份，供按轴汇总）"""

    rows: List[ResultRow] = field(default_factory=list)
    tables: List[List[TableRow]] = field(default_factory=list)

    def merge(self, other: "ExperimentRun") -> "ExperimentRun":
        return ExperimentRun(self.rows + other.rows, self.tables + other.tables)


def _record_time(record_time: Optional[bool]) -> bool:
    if record_time is None:
        return get_experiment_config().record_time
    return bool(record_time)


def effective_n_seen(n_seen_list: Iterable[int], n_outliers: int) -> List[int]:
    """截断到可用离群点数并按首次出现去重"""
    values = [int(n) for n in n_seen_list]
    if not values:
        raise UsageError("n_seen 列表不能为空")
    if any(n < 1 for n in values):
        raise UsageError(f"n_seen 必须 >= 1: {values}")
    if n_outliers < 1:
        raise NotEnoughOutliersError(1, n_outliers)
    clipped: List[int] = []
    for n in values:
        n = min(n, n_outliers)
        if n not in clipped:
            clipped.append(n)
    if clipped != values:
        logger.info(f"n_seen 按可用离群点 {n_outliers} 截断为 {clipped}")
    return clipped


def evaluate_dataset(
    dataset: Dataset,
    n_seen_list: Sequence[int],
    seed: int,
    algorithms: Sequence[str] = ALGORITHMS,
    workers: Optional[int] = None,
    record_time: Optional[bool] = None,
) -> ExperimentRun:
    """一个数据集、一个种子：每种算法打分一次，逐个 n_seen 选择"""
    n_seen_values = effective_n_seen(n_seen_list, dataset.n_outliers)
    timed = _record_time(record_time)
    rows: List[ResultRow] = []
    tables: List[List[TableRow]] = []

    for algorithm in algorithms:
        start_time = time.time()
        grid_scores = score_grid(
            dataset, algorithm_grid(algorithm, dataset.data.n_d, seed), workers
        )
        grid_seconds = time.time() - start_time
        for index, n_seen in enumerate(n_seen_values):
            result = select_with_seen(grid_scores, n_seen, seed)
            best = result.best_row
            if algorithm == "drama" and index == 0:
                tables.append(result.table)
            rows.append(
                ResultRow(
                    dataset=dataset.name,
                    algorithm=algorithm,
                    config=best.config_id,
                    seed=seed,
                    n_seen=n_seen,
                    auc=best.full_auc,
                    rws=best.full_rws,
                    seconds=round(grid_seconds, 6) if timed else 0.0,
                )
            )
    return ExperimentRun(rows=rows, tables=tables)


def aggregate(rows: Iterable[ResultRow]) -> List[CurvePoint]:
    """按 (算法, n_seen) 聚合，顺序为首次出现顺序"""
    groups: Dict[Tuple[str, int], List[ResultRow]] = {}
    for row in rows:
        groups.setdefault((row.algorithm, row.n_seen), []).append(row)

    points = []
    for (algorithm, n_seen), members in groups.items():
        aucs = [row.auc for row in members]
        rwss = [row.rws for row in members]
        best_auc, best_rws = max(aucs), max(rwss)
        points.append(
            CurvePoint(
                algorithm=algorithm,
                n_seen=n_seen,
                mean_auc=min(math.fsum(aucs) / len(aucs), best_auc),
                best_auc=best_auc,
                mean_rws=min(math.fsum(rwss) / len(rwss), best_rws),
                best_rws=best_rws,
                n_runs=len(members),
            )
        )
    return points


def _seeds(seeds: Sequence[int], scale: str) -> List[int]:
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise UsageError("种子列表不能为空")
    if scale == "desk" and len(seeds) > DESK_MAX_SEEDS:
        logger.warning(
            f"desk 规模最多使用 {DESK_MAX_SEEDS} 个种子，忽略 {seeds[DESK_MAX_SEEDS:]}"
        )
        seeds = seeds[:DESK_MAX_SEEDS]
    return seeds


def challenge_run(
    challenge: str,
    n_seen_list: Sequence[int],
    seeds: Sequence[int],
    scale: str = "desk",
    algorithms: Sequence[str] = ALGORITHMS,
    workers: Optional[int] = None,
    record_time: Optional[bool] = None,
) -> ExperimentRun:
    """逐种子生成挑战数据并评估，返回全部结果行"""
    if scale == "paper":
        logger.warning(
            f"{challenge} 使用 paper 规模：样本数为 desk 的 5 倍以上，"
            f"完整网格可能运行数小时"
        )
    start_time = time.time()
    run = ExperimentRun()
    for seed in _seeds(seeds, scale):
        dataset = generate(ChallengeSpec.preset(challenge, seed, scale)).dataset
        logger.info(f"{challenge} 种子 {seed}: 评估 {dataset.name}")
        run = run.merge(
            evaluate_dataset(
                dataset, n_seen_list, seed, algorithms, workers, record_time
            )
        )
    structured_logger.log_performance(
        "challenge_run",
        round((time.time() - start_time) * 1000, 2),
        extra_data={"challenge": challenge, "scale": scale, "rows": len(run.rows)},
    )
    return run


def run_challenge_curve(
    challenge: str,
    n_seen_list: Sequence[int],
    seeds: Sequence[int],
    scale: str = "desk",
    algorithms: Sequence[str] = ALGORITHMS,
    workers: Optional[int] = None,
) -> List[CurvePoint]:
    """挑战的 (算法, n_seen) 曲线点"""
    run = challenge_run(challenge, n_seen_list, seeds, scale, algorithms, workers)
    return aggregate(run.rows)
