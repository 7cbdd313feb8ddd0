"""
数据容器与标签模型

所有矩阵统一为 float64，构造后只读。
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from drama.base.error_exceptions import (
    BadLabelValueError,
    EmptyMatrixError,
    LengthMismatchError,
    NonFiniteEntryError,
    ShapeMismatchError,
)

logger = logging.getLogger(__name__)


def _frozen(values: np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class DataMatrix:
    """n_d × n_f 有限实数矩阵"""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))

    @property
    def n_d(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_f(self) -> int:
        return int(self.values.shape[1])

    @property
    def shape(self):
        return self.values.shape

    def rows(self, indices: Sequence[int]) -> "DataMatrix":
        return DataMatrix(self.values[np.asarray(indices, dtype=int)])


@dataclass(frozen=True)
class LatentMatrix:
    """n_d × m 隐空间编码，第 i 行对应源矩阵第 i 行"""

    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 2:
            raise ShapeMismatchError(
                "隐空间矩阵必须是二维", expected=2, actual=values.ndim
            )
        object.__setattr__(self, "values", values)

    @property
    def n_d(self) -> int:
        return int(self.values.shape[0])

    @property
    def m(self) -> int:
        return int(self.values.shape[1])


class Label(Enum):
    """样本标签"""

    INLIER = 0
    OUTLIER = 1


@dataclass(frozen=True)
class LabelVector:
    """inlier/outlier 标签向量，内部以布尔数组表示 outlier"""

    is_outlier: np.ndarray

    def __post_init__(self):
        flags = np.array(self.is_outlier, dtype=bool, copy=True)
        flags.setflags(write=False)
        object.__setattr__(self, "is_outlier", flags)

    @classmethod
    def from_labels(cls, labels: Iterable[Label]) -> "LabelVector":
        return cls(np.array([label is Label.OUTLIER for label in labels], dtype=bool))

    @classmethod
    def from_ints(cls, values: Iterable) -> "LabelVector":
        """0 = inlier，1 = outlier；其它取值抛出 BadLabelValueError"""
        flags = []
        for row, value in enumerate(values):
            try:
                number = float(value)
            except (TypeError, ValueError):
                raise BadLabelValueError(value, row)
            if number not in (0.0, 1.0):
                raise BadLabelValueError(value, row)
            flags.append(number == 1.0)
        return cls(np.array(flags, dtype=bool))

    def to_ints(self) -> np.ndarray:
        return self.is_outlier.astype(np.int64)

    def __len__(self) -> int:
        return int(self.is_outlier.shape[0])

    def __getitem__(self, index: int) -> Label:
        return Label.OUTLIER if self.is_outlier[index] else Label.INLIER

    @property
    def n_outliers(self) -> int:
        return int(self.is_outlier.sum())

    @property
    def n_inliers(self) -> int:
        return len(self) - self.n_outliers

    def outlier_indices(self) -> np.ndarray:
        return np.flatnonzero(self.is_outlier)

    def inlier_indices(self) -> np.ndarray:
        return np.flatnonzero(~self.is_outlier)


@dataclass(frozen=True)
class Dataset:
    """数据矩阵 + 可选标签 + 名称"""

    data: DataMatrix
    labels: Optional[LabelVector] = None
    name: str = "dataset"

    def __post_init__(self):
        if self.labels is not None and len(self.labels) != self.data.n_d:
            raise LengthMismatchError(len(self.labels), self.data.n_d)

    @property
    def n_outliers(self) -> int:
        return 0 if self.labels is None else self.labels.n_outliers

    def outlier_indices(self) -> np.ndarray:
        if self.labels is None:
            return np.empty(0, dtype=np.int64)
        return self.labels.outlier_indices()


@dataclass(frozen=True)
class StandardizeRecord:
    """逐列均值与尺度，零方差列尺度记为 1"""

    mean: np.ndarray
    scale: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "mean", _frozen(self.mean))
        object.__setattr__(self, "scale", _frozen(self.scale))

    def transform(self, data: DataMatrix) -> DataMatrix:
        if data.n_f != self.mean.shape[0]:
            raise ShapeMismatchError(
                "标准化记录与数据列数不一致",
                expected=int(self.mean.shape[0]),
                actual=data.n_f,
            )
        return DataMatrix((data.values - self.mean) / self.scale)

    def inverse_transform(self, data: DataMatrix) -> DataMatrix:
        if data.n_f != self.mean.shape[0]:
            raise ShapeMismatchError(
                "标准化记录与数据列数不一致",
                expected=int(self.mean.shape[0]),
                actual=data.n_f,
            )
        return DataMatrix(data.values * self.scale + self.mean)

    @classmethod
    def identity(cls, n_f: int) -> "StandardizeRecord":
        return cls(np.zeros(n_f), np.ones(n_f))


def validate_matrix(values) -> DataMatrix:
    """
    校验原始二维数组并构造 DataMatrix

    Raises:
        ShapeMismatchError: 非矩形或维数不是 2
        EmptyMatrixError: 行数或列数为 0
        NonFiniteEntryError: 按行优先第一个非有限元素
    """
    try:
        array = np.asarray(values, dtype=np.float64)
    except ValueError as e:
        raise ShapeMismatchError(f"输入不是矩形数值数组: {e}")

    if array.ndim != 2:
        raise ShapeMismatchError("输入必须是二维数组", expected=2, actual=array.ndim)
    if array.shape[0] == 0 or array.shape[1] == 0:
        raise EmptyMatrixError(array.shape)

    bad = ~np.isfinite(array)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise NonFiniteEntryError(int(row), int(col))

    matrix = DataMatrix(array)
    logger.debug(f"数据矩阵校验通过: n_d={matrix.n_d}, n_f={matrix.n_f}")
    return matrix


def standardize(data: DataMatrix) -> tuple[DataMatrix, StandardizeRecord]:
    """逐列中心化并除以总体标准差"""
    values = data.values
    constant = np.ptp(values, axis=0) == 0.0
    mean = np.where(constant, values[0], values.mean(axis=0))
    scale = np.where(constant, 1.0, values.std(axis=0))
    record = StandardizeRecord(mean, scale)
    return record.transform(data), record
