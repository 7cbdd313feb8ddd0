"""
结果、排序与调参表的持久化

所有写出经 file_writer 原子写入；浮点按最短往返表示，NaN 写作 nan。
"""

import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from drama.base.error_exceptions import DataError, DramaIOError, ParseError
from drama.service.detector.pipeline import AnomalyRanking
from drama.service.detector.tuning import TuningResult
from drama.service.io.file_writer import WRITE_LOCK, atomic_write

logger = logging.getLogger(__name__)

RESULT_COLUMNS = (
    "dataset",
    "algorithm",
    "config",
    "seed",
    "n_seen",
    "auc",
    "rws",
    "seconds",
)
RANKING_COLUMNS = ("index", "score", "rank")
SCORE_TABLE_COLUMNS = (
    "seed",
    "n_seen",
    "config",
    "partial_auc",
    "partial_rws",
    "full_auc",
    "full_rws",
    "best",
)


@dataclass(frozen=True)
class ResultRow:
    """一次（数据集, 算法, 种子, n_seen）运行的结果行；config 为配置 id"""

    dataset: str
    algorithm: str
    config: str
    seed: int
    n_seen: int
    auc: float
    rws: float
    seconds: float = 0.0

    def __post_init__(self):
        for name in ("auc", "rws"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and 0.0 <= value <= 1.0):
                raise DataError(
                    f"{name} 必须在 [0, 1] 内: {value}",
                    {"dataset": self.dataset, "config": self.config},
                )
        if not self.seconds >= 0.0:
            raise DataError(f"耗时不能为负: {self.seconds}", {"config": self.config})


def _to_csv(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    return atomic_write(
        path,
        lambda handle: frame.to_csv(
            handle, index=False, lineterminator="\n", na_rep="nan"
        ),
    )


def _read_frame(path: Union[str, Path], columns: Sequence[str]) -> pd.DataFrame:
    path = Path(path)
    try:
        frame = pd.read_csv(path, float_precision="round_trip", keep_default_na=False)
    except FileNotFoundError:
        raise DramaIOError(f"文件不存在: {path}", str(path))
    except pd.errors.EmptyDataError:
        raise ParseError(f"{path} 为空文件", line=1)
    except pd.errors.ParserError as e:
        raise ParseError(str(e).strip())
    if tuple(frame.columns) != tuple(columns):
        raise ParseError(
            f"{path} 表头应为 {','.join(columns)}，"
            f"实际为 {','.join(map(str, frame.columns))}",
            line=1,
        )
    return frame


def results_frame(rows: Iterable[ResultRow]) -> pd.DataFrame:
    records = [asdict(row) for row in rows]
    return pd.DataFrame(records, columns=list(RESULT_COLUMNS))


def read_results(path: Union[str, Path]) -> List[ResultRow]:
    frame = _read_frame(path, RESULT_COLUMNS)
    try:
        return [
            ResultRow(
                dataset=str(record["dataset"]),
                algorithm=str(record["algorithm"]),
                config=str(record["config"]),
                seed=int(record["seed"]),
                n_seen=int(record["n_seen"]),
                auc=float(record["auc"]),
                rws=float(record["rws"]),
                seconds=float(record["seconds"]),
            )
            for record in frame.to_dict(orient="records")
        ]
    except (TypeError, ValueError) as e:
        raise ParseError(f"结果行无法解析: {e}")


def write_results(
    rows: Sequence[ResultRow], path: Union[str, Path], append: bool = False
) -> Path:
    """
    写出结果表；append=True 且文件已存在时保留原有行并追加

    Raises:
        DramaIOError: 写入失败
        ParseError: 追加时原文件表头不符
    """
    path = Path(path)
    with WRITE_LOCK:
        existing: List[ResultRow] = []
        if append and path.exists():
            existing = read_results(path)
        all_rows = existing + list(rows)
        _to_csv(results_frame(all_rows), path)
    logger.info(f"写出 {len(all_rows)} 行结果到 {path}")
    return path


def write_ranking(ranking: AnomalyRanking, path: Union[str, Path]) -> Path:
    """按名次从最异常到最正常写出 index,score,rank"""
    order = np.asarray(ranking.order)
    frame = pd.DataFrame(
        {
            "index": order,
            "score": np.asarray(ranking.scores)[order],
            "rank": np.arange(1, order.shape[0] + 1),
        },
        columns=list(RANKING_COLUMNS),
    )
    return _to_csv(frame, path)


def read_ranking(path: Union[str, Path]) -> Tuple[np.ndarray, np.ndarray]:
    """
    读取排序文件，返回 (按样本下标排列的分数, 由 rank 列给出的排列)

    Raises:
        ParseError: index 不是 0..n−1 的排列或 rank 不是 1..n
    """
    frame = _read_frame(path, RANKING_COLUMNS)
    try:
        index = frame["index"].to_numpy(dtype=np.int64)
        rank = frame["rank"].to_numpy(dtype=np.int64)
        score = frame["score"].to_numpy(dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise ParseError(f"排序文件含非数值: {e}")

    n = index.shape[0]
    if not np.array_equal(np.sort(index), np.arange(n)):
        raise ParseError(f"{path} 的 index 列不是 0..{n - 1} 的排列")
    if not np.array_equal(np.sort(rank), np.arange(1, n + 1)):
        raise ParseError(f"{path} 的 rank 列不是 1..{n} 的排列")

    scores = np.empty(n, dtype=np.float64)
    scores[index] = score
    order = index[np.argsort(rank, kind="stable")]
    return scores, order


def write_score_table(results: Sequence[TuningResult], path: Union[str, Path]) -> Path:
    """调参表：每个 (种子, 配置) 一行，best 列标记被选中的配置"""
    records = []
    for result in results:
        for row in result.table:
            records.append(
                {
                    "seed": result.seed,
                    "n_seen": result.n_seen,
                    "config": row.config_id,
                    "partial_auc": row.partial_auc,
                    "partial_rws": row.partial_rws,
                    "full_auc": row.full_auc,
                    "full_rws": row.full_rws,
                    "best": int(row.candidate is result.best),
                }
            )
    frame = pd.DataFrame(records, columns=list(SCORE_TABLE_COLUMNS))
    return _to_csv(frame, path)


def write_table(
    records: List[dict], columns: Sequence[str], path: Union[str, Path]
) -> Path:
    """作图用的通用表格写出"""
    unknown = {key for record in records for key in record} - set(columns)
    if unknown:
        raise ValueError(f"未声明的列: {sorted(unknown)}")
    return _to_csv(pd.DataFrame(records, columns=list(columns)), path)

