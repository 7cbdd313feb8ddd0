"""
超参网格

顺序固定为 drt → metric → n_s → decode_flag（drt 为最外层）。
"""

import logging
from itertools import product
from typing import Iterable, List, Optional, Sequence, Union

from drama.base.error_exceptions import UsageError
from drama.config import (
    get_baseline_config,
    get_drt_settings,
    get_grid_config,
    get_standardize_flag,
)
from drama.service.baselines.baseline_configs import iforest_grid, lof_grid
from drama.service.detector.run_config import Candidate, RunConfig, parse_flag
from drama.service.drt.drt_kind import DrtKind
from drama.service.drt.drt_model import DrtSettings
from drama.service.metrics.metric_kind import MetricKind

logger = logging.getLogger(__name__)

ALGORITHMS = ("drama", "lof", "iforest")


def _axis(name: str, values: Optional[Iterable]) -> list:
    values = list(values or [])
    if not values:
        raise UsageError(f"网格轴 {name} 不能为空")
    return values


def _kind(enum_type, value):
    if isinstance(value, enum_type):
        return value
    try:
        return enum_type.from_string(value)
    except ValueError as e:
        raise UsageError(str(e))


def grid(
    drts: Sequence[Union[str, DrtKind]],
    metrics: Sequence[Union[str, MetricKind]],
    n_s: Sequence[int],
    decode_flags: Sequence[Union[bool, str]],
    latent_dim: int = 2,
    seed: int = 0,
    settings: Optional[DrtSettings] = None,
) -> List[RunConfig]:
    """笛卡尔积；任一轴为空时抛出 UsageError"""
    drts = [_kind(DrtKind, d) for d in _axis("drt", drts)]
    metrics = [_kind(MetricKind, m) for m in _axis("metric", metrics)]
    depths = [int(n) for n in _axis("n_s", n_s)]
    flags = [parse_flag(f) for f in _axis("decode", decode_flags)]
    settings = settings or DrtSettings()
    return [
        RunConfig(
            drt=drt,
            metric=metric,
            n_s=depth,
            latent_dim=latent_dim,
            decode_flag=flag,
            seed=seed,
            settings=settings,
        )
        for drt, metric, depth, flag in product(drts, metrics, depths, flags)
    ]


def configured_settings() -> DrtSettings:
    """配置文件中的降维训练设置"""
    return DrtSettings.from_config(get_drt_settings(), get_standardize_flag())


def default_grid(seed: int = 0) -> List[RunConfig]:
    """配置文件中的 DRAMA 网格（默认 5 × 10 × 3 × 2 = 300 格）"""
    grid_config = get_grid_config()
    return grid(
        grid_config.drts,
        grid_config.metrics,
        grid_config.n_s,
        grid_config.decode,
        latent_dim=get_drt_settings().latent_dim,
        seed=seed,
        settings=configured_settings(),
    )


def algorithm_grid(algorithm: str, n_samples: int, seed: int = 0) -> List[Candidate]:
    """某一算法的全部候选配置"""
    algorithm = str(algorithm).strip().lower()
    if algorithm == "drama":
        return list(default_grid(seed))
    baselines = get_baseline_config()
    if algorithm == "lof":
        return list(lof_grid(baselines.lof_k, n_samples))
    if algorithm == "iforest":
        return list(
            iforest_grid(baselines.iforest_trees, baselines.iforest_subsample, seed)
        )
    raise UsageError(f"未知的算法: {algorithm}，可选: {', '.join(ALGORITHMS)}")
