"""
数据集 CSV 读写

格式：UTF-8、逗号分隔、首行为表头；名为 `label` 的列（0 = inlier，1 = outlier）可选，
其余列均为特征。浮点数按最短往返表示写出，读取时使用 round_trip 解析。
"""

import json
import logging
import re
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from drama.base.error_exceptions import (
    DramaIOError,
    NonNumericFeatureError,
    ParseError,
)
from drama.service.data.data_model import Dataset, LabelVector, validate_matrix
from drama.service.io.file_writer import atomic_write, atomic_write_text
from drama.service.simgen.challenges import GeneratedDataset

logger = logging.getLogger(__name__)

LABEL_COLUMN = "label"
_LINE_PATTERN = re.compile(r"line (\d+)")


def _parse_line(message: str) -> Optional[int]:
    match = _LINE_PATTERN.search(message)
    return int(match.group(1)) if match else None


def read_dataset(path: Union[str, Path], name: Optional[str] = None) -> Dataset:
    """
    读取 CSV 数据集

    Raises:
        DramaIOError: 文件不存在或不可读
        ParseError: CSV 结构错误（含行号）
        NonNumericFeatureError: 特征列含非数值
        BadLabelValueError: label 取值不是 0/1
        NonFiniteEntryError / EmptyMatrixError: 矩阵校验失败
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except FileNotFoundError:
        raise DramaIOError(f"数据文件不存在: {path}", str(path))
    except pd.errors.EmptyDataError:
        raise ParseError(f"{path} 为空文件", line=1)
    except pd.errors.ParserError as e:
        raise ParseError(str(e).strip(), line=_parse_line(str(e)))
    except (OSError, UnicodeDecodeError) as e:
        raise DramaIOError(f"读取数据文件失败: {e}", str(path))

    labels = None
    if LABEL_COLUMN in frame.columns:
        labels = LabelVector.from_ints(frame[LABEL_COLUMN].tolist())
        frame = frame.drop(columns=[LABEL_COLUMN])

    for column in frame.columns:
        if not pd.api.types.is_numeric_dtype(frame[column]):
            raise NonNumericFeatureError(str(column))

    data = validate_matrix(frame.to_numpy(dtype=np.float64))
    dataset = Dataset(data=data, labels=labels, name=name or path.stem)
    logger.info(
        f"读取数据集 {dataset.name}: {data.n_d}×{data.n_f}，"
        f"离群点 {dataset.n_outliers if labels is not None else '未标注'}"
    )
    return dataset


def dataset_frame(dataset: Dataset) -> pd.DataFrame:
    columns = [f"f{i}" for i in range(dataset.data.n_f)]
    frame = pd.DataFrame(np.asarray(dataset.data.values), columns=columns)
    if dataset.labels is not None:
        frame[LABEL_COLUMN] = dataset.labels.to_ints()
    return frame


def write_dataset(dataset: Dataset, path: Union[str, Path]) -> Path:
    """写出特征列 f0..f{n_f−1}，有标签时追加 label 列"""
    frame = dataset_frame(dataset)
    return atomic_write(
        path, lambda handle: frame.to_csv(handle, index=False, lineterminator="\n")
    )


def write_metadata(generated: GeneratedDataset, path: Union[str, Path]) -> Path:
    """JSON 侧车文件：种子、生成参数与每个异常的 (a, w, t₀, 缩放)"""
    text = json.dumps(
        generated.to_metadata(), ensure_ascii=False, indent=2, sort_keys=True
    )
    return atomic_write_text(path, text + "\n")


def read_metadata(path: Union[str, Path]) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise DramaIOError(f"元数据文件不存在: {path}", str(path))
    except json.JSONDecodeError as e:
        raise ParseError(f"元数据 JSON 无效: {e.msg}", line=e.lineno)
