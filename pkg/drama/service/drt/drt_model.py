"""
降维模型与训练设置
"""

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional, Tuple

import numpy as np

from drama.config.config_models import DrtConfig
from drama.service.data.data_model import StandardizeRecord
from drama.service.drt.drt_kind import DrtKind


@dataclass(frozen=True)
class AeConfig:
    """AE/VAE 网络与训练设置"""

    learning_rate: float = 0.001
    epochs: int = 200
    batch_size: int = 256
    full_batch_limit: int = 1024
    kl_weight: float = 1.0
    optimizer: str = "gd"

    @staticmethod
    def widths(n_features: int, latent_dim: int) -> Tuple[int, int, int, int, int]:
        """对称五层宽度 (n_f, n_f//2, m, n_f//2, n_f)，隐藏层至少 1"""
        hidden = max(1, n_features // 2)
        return (n_features, hidden, latent_dim, hidden, n_features)

    def batch_size_for(self, n_samples: int) -> int:
        if n_samples < self.full_batch_limit:
            return n_samples
        return self.batch_size


@dataclass(frozen=True)
class DrtSettings:
    """降维拟合的全部可调设置"""

    standardize: bool = True
    ae: AeConfig = field(default_factory=AeConfig)
    ica_max_iter: int = 500
    ica_tol: float = 1e-6
    nmf_max_iter: int = 500
    nmf_tol: float = 1e-6

    @classmethod
    def from_config(
        cls, config: DrtConfig, standardize: bool = True
    ) -> "DrtSettings":
        return cls(
            standardize=standardize,
            ae=AeConfig(
                learning_rate=config.learning_rate,
                epochs=config.epochs,
                batch_size=config.batch_size,
                full_batch_limit=config.full_batch_limit,
                kl_weight=config.kl_weight,
                optimizer=config.optimizer,
            ),
            ica_max_iter=config.ica_max_iter,
            ica_tol=config.ica_tol,
            nmf_max_iter=config.nmf_max_iter,
            nmf_tol=config.nmf_tol,
        )


@dataclass(frozen=True)
class DrtModel:
    """
    拟合完成的降维模型，参数数组只读

    preprocessing 为标准化记录（未标准化时为恒等记录）；shift 为 NMF 的非负平移量。
    """

    kind: DrtKind
    latent_dim: int
    n_features: int
    params: Mapping[str, np.ndarray]
    preprocessing: StandardizeRecord
    shift: float = 0.0
    loss_trace: np.ndarray = field(default_factory=lambda: np.empty(0))
    seed: int = 0
    iterations: int = 0
    settings: Optional[DrtSettings] = None

    def __post_init__(self):
        frozen = {}
        for name, value in self.params.items():
            array = np.array(value, dtype=np.float64, copy=True)
            array.setflags(write=False)
            frozen[name] = array
        object.__setattr__(self, "params", MappingProxyType(frozen))
        trace = np.array(self.loss_trace, dtype=np.float64, copy=True)
        trace.setflags(write=False)
        object.__setattr__(self, "loss_trace", trace)
