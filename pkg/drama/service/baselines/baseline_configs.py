"""
基线算法配置

config_id 形如 `lof:k=20`、`iforest:trees=100,subsample=256,seed=0`，可由 from_id 解析回配置。
"""

import logging
from dataclasses import dataclass
from typing import ClassVar, Dict, Iterable, List

from drama.base.error_exceptions import UsageError

logger = logging.getLogger(__name__)


def parse_id_fields(config_id: str, prefix: str) -> Dict[str, str]:
    """把 `prefix:a=1,b=2` 拆成字段字典"""
    head, _, body = str(config_id).partition(":")
    if head != prefix:
        raise UsageError(f"配置标识前缀应为 {prefix!r}: {config_id!r}")
    fields: Dict[str, str] = {}
    for item in filter(None, body.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"配置标识字段格式错误: {item!r}")
        fields[key.strip()] = value.strip()
    return fields


def _int_field(fields: Dict[str, str], key: str, config_id: str) -> int:
    try:
        return int(fields[key])
    except (KeyError, ValueError):
        raise UsageError(f"配置标识缺少整数字段 {key}: {config_id!r}")


@dataclass(frozen=True)
class LofConfig:
    """LOF 近邻数"""

    k: int = 20

    algorithm: ClassVar[str] = "lof"

    def __post_init__(self):
        if self.k < 1:
            raise UsageError(f"LOF 近邻数必须 >= 1: k={self.k}")

    @property
    def config_id(self) -> str:
        return f"lof:k={self.k}"

    @classmethod
    def from_id(cls, config_id: str) -> "LofConfig":
        fields = parse_id_fields(config_id, "lof")
        return cls(k=_int_field(fields, "k", config_id))


@dataclass(frozen=True)
class IforestConfig:
    """iForest 树数、子样本大小与种子"""

    n_trees: int = 100
    subsample: int = 256
    seed: int = 0

    algorithm: ClassVar[str] = "iforest"

    def __post_init__(self):
        if self.n_trees < 1:
            raise UsageError(f"iForest 树数必须 >= 1: {self.n_trees}")
        if self.subsample < 1:
            raise UsageError(f"iForest 子样本大小必须 >= 1: {self.subsample}")

    @property
    def config_id(self) -> str:
        return f"iforest:trees={self.n_trees},subsample={self.subsample},seed={self.seed}"

    @classmethod
    def from_id(cls, config_id: str) -> "IforestConfig":
        fields = parse_id_fields(config_id, "iforest")
        return cls(
            n_trees=_int_field(fields, "trees", config_id),
            subsample=_int_field(fields, "subsample", config_id),
            seed=_int_field(fields, "seed", config_id),
        )


def lof_grid(ks: Iterable[int], n_samples: int) -> List[LofConfig]:
    """LOF 候选；k >= n_samples 的取值被丢弃并记警告"""
    ks = list(ks)
    if not ks:
        raise UsageError("LOF 近邻数列表不能为空")
    kept = [LofConfig(k) for k in ks if k < n_samples]
    dropped = [k for k in ks if k >= n_samples]
    if dropped:
        logger.warning(f"样本数 {n_samples} 不足，丢弃 LOF 近邻数 {dropped}")
    if not kept:
        kept = [LofConfig(max(1, n_samples - 1))]
    return kept


def iforest_grid(n_trees: int, subsample: int, seed: int) -> List[IforestConfig]:
    return [IforestConfig(n_trees=n_trees, subsample=subsample, seed=seed)]
