"""
配置数据模型定义
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


@dataclass
class LogConfig:
    """日志配置"""

    level: str = "INFO"


@dataclass
class RunnerConfig:
    """网格运行并行度配置"""

    workers: Optional[int] = None  # None 表示使用 CPU 核数


@dataclass
class GlobalConfig:
    """全局配置"""

    log: LogConfig = field(default_factory=LogConfig)
    runner: RunnerConfig = field(default_factory=RunnerConfig)
    standardize: bool = True  # 真实数据特征是否标准化


@dataclass
class DrtConfig:
    """降维训练设置"""

    latent_dim: int = 2
    epochs: int = 200
    learning_rate: float = 0.001
    batch_size: int = 256
    full_batch_limit: int = 1024  # 样本数低于该值时全批量训练
    kl_weight: float = 1.0
    optimizer: str = "gd"  # gd 或 adam
    ica_max_iter: int = 500
    ica_tol: float = 1e-6
    nmf_max_iter: int = 500
    nmf_tol: float = 1e-6


@dataclass
class GridConfig:
    """DRAMA 超参网格"""

    drts: List[str] = field(default_factory=lambda: ["pca", "ica", "nmf", "ae", "vae"])
    metrics: List[str] = field(
        default_factory=lambda: [
            "l1",
            "l2",
            "l4",
            "wl2",
            "wl4",
            "braycurtis",
            "chebyshev",
            "canberra",
            "correlation",
            "mahalanobis",
        ]
    )
    n_s: List[int] = field(default_factory=lambda: [1, 2, 3])
    decode: List[bool] = field(default_factory=lambda: [True, False])


@dataclass
class BaselineConfig:
    """基线算法网格"""

    lof_k: List[int] = field(default_factory=lambda: [10, 20, 35])
    iforest_trees: int = 100
    iforest_subsample: int = 256


@dataclass
class ExperimentConfig:
    """实验复现配置"""

    scale: str = "desk"  # desk 或 paper
    seeds: List[int] = field(default_factory=lambda: [0, 1, 2, 3, 4])
    n_seen: List[int] = field(default_factory=lambda: [1, 2, 5, 10, 20, 50])
    record_time: bool = False


@dataclass
class AppConfig:
    """应用完整配置"""

    global_config: GlobalConfig = field(default_factory=GlobalConfig)
    drt: DrtConfig = field(default_factory=DrtConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    baselines: BaselineConfig = field(default_factory=BaselineConfig)
    experiment: ExperimentConfig = field(default_factory=ExperimentConfig)
    # 扁平键值，镜像命令行参数名
    defaults: Dict[str, Any] = field(default_factory=dict)
