"""
汇总与作图数据

- axis_summary：平均而言哪种 DRT / 度量最好（按轴取全标注 AUC 的均值）；
- fig4.csv（C-I）、fig5.csv（C-II）、fig6.csv（真实数据）：可直接作图的曲线表。
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from drama.service.detector.run_config import RunConfig
from drama.service.detector.tuning import TableRow
from drama.service.experiments.curves import CurvePoint, aggregate
from drama.service.io.results_io import ResultRow, write_table

logger = logging.getLogger(__name__)

CURVE_COLUMNS = (
    "challenge",
    "algorithm",
    "n_seen",
    "mean_auc",
    "best_auc",
    "mean_rws",
    "best_rws",
    "n_runs",
)
SUITE_COLUMNS = (
    "dataset",
    "algorithm",
    "n_seen",
    "mean_auc",
    "best_auc",
    "mean_rws",
    "best_rws",
    "n_runs",
)
AXIS_COLUMNS = ("axis", "name", "mean_auc", "n_cells")


@dataclass(frozen=True)
class AxisSummary:
    """按轴汇总：名称 -> (平均全标注 AUC, 参与平均的网格单元数)"""

    by_drt: Dict[str, Tuple[float, int]]
    by_metric: Dict[str, Tuple[float, int]]

    def best_drt(self) -> str:
        return max(self.by_drt, key=lambda name: self.by_drt[name][0])

    def best_metric(self) -> str:
        return max(self.by_metric, key=lambda name: self.by_metric[name][0])


def _mean_by(groups: Dict[str, List[float]]) -> Dict[str, Tuple[float, int]]:
    return {
        name: (math.fsum(values) / len(values), len(values))
        for name, values in groups.items()
        if values
    }


def axis_summary(table: Iterable[TableRow]) -> AxisSummary:
    """只统计 DRAMA 配置且全标注 AUC 有限的单元；名称按首次出现顺序"""
    by_drt: Dict[str, List[float]] = {}
    by_metric: Dict[str, List[float]] = {}
    for row in table:
        if not isinstance(row.candidate, RunConfig) or math.isnan(row.full_auc):
            continue
        by_drt.setdefault(row.candidate.drt.value, []).append(row.full_auc)
        by_metric.setdefault(row.candidate.metric.value, []).append(row.full_auc)
    return AxisSummary(by_drt=_mean_by(by_drt), by_metric=_mean_by(by_metric))


def flatten_tables(tables: Iterable[Sequence[TableRow]]) -> List[TableRow]:
    return [row for table in tables for row in table]


def _point_record(point: CurvePoint) -> dict:
    return {
        "algorithm": point.algorithm,
        "n_seen": point.n_seen,
        "mean_auc": point.mean_auc,
        "best_auc": point.best_auc,
        "mean_rws": point.mean_rws,
        "best_rws": point.best_rws,
        "n_runs": point.n_runs,
    }


def figure_name(challenge: str) -> str:
    """C-I 对应 fig4.csv，C-II 对应 fig5.csv"""
    return "fig4.csv" if challenge.startswith("c1") else "fig5.csv"


def write_curve_csv(
    curves: Dict[str, Sequence[CurvePoint]], path: Union[str, Path]
) -> Path:
    """curves: 挑战名 -> 曲线点"""
    records = [
        {"challenge": challenge, **_point_record(point)}
        for challenge, points in curves.items()
        for point in points
    ]
    return write_table(records, CURVE_COLUMNS, path)


def write_suite_csv(rows: Sequence[ResultRow], path: Union[str, Path]) -> Path:
    """真实数据曲线：每个数据集单独聚合"""
    datasets: Dict[str, List[ResultRow]] = {}
    for row in rows:
        datasets.setdefault(row.dataset, []).append(row)
    records = [
        {"dataset": dataset, **_point_record(point)}
        for dataset, members in datasets.items()
        for point in aggregate(members)
    ]
    return write_table(records, SUITE_COLUMNS, path)


def write_axis_summary(summary: AxisSummary, path: Union[str, Path]) -> Path:
    records = [
        {"axis": axis, "name": name, "mean_auc": mean, "n_cells": count}
        for axis, groups in (("drt", summary.by_drt), ("metric", summary.by_metric))
        for name, (mean, count) in groups.items()
    ]
    return write_table(records, AXIS_COLUMNS, path)


def format_points(points: Sequence[CurvePoint]) -> str:
    """终端输出用的简表"""
    lines = ["algorithm,n_seen,mean_auc,best_auc,mean_rws,best_rws"]
    for point in points:
        lines.append(
            f"{point.algorithm},{point.n_seen},{point.mean_auc!r},{point.best_auc!r},"
            f"{point.mean_rws!r},{point.best_rws!r}"
        )
    return "\n".join(lines)
