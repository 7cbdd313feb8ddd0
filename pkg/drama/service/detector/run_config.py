"""
DRAMA 单个超参配置

config_id 形如 `drama:drt=pca,metric=l1,ns=1,m=2,decode=on,seed=0`；
降维训练设置（DrtSettings）来自配置文件，不进入标识。
"""

from dataclasses import dataclass, field, replace
from typing import ClassVar, Optional, Tuple, Union

from drama.base.error_exceptions import UsageError
from drama.service.baselines.baseline_configs import (
    IforestConfig,
    LofConfig,
    parse_id_fields,
)
from drama.service.drt.drt_kind import DrtKind
from drama.service.drt.drt_model import DrtSettings
from drama.service.metrics.metric_kind import MetricKind


def parse_flag(value) -> bool:
    """on/off、true/false、1/0"""
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("on", "true", "1", "yes"):
        return True
    if text in ("off", "false", "0", "no"):
        return False
    raise UsageError(f"无法解析的开关取值: {value!r}（应为 on/off）")


def format_flag(value: bool) -> str:
    return "on" if value else "off"


@dataclass(frozen=True)
class RunConfig:
    """DRT × 度量 × n_s × decode 网格中的一格，外加随机种子"""

    drt: DrtKind
    metric: MetricKind
    n_s: int = 1
    latent_dim: int = 2
    decode_flag: bool = True
    seed: int = 0
    settings: DrtSettings = field(default_factory=DrtSettings, compare=False)

    algorithm: ClassVar[str] = "drama"

    def __post_init__(self):
        if isinstance(self.drt, str):
            object.__setattr__(self, "drt", _parse_enum(DrtKind, self.drt))
        if isinstance(self.metric, str):
            object.__setattr__(self, "metric", _parse_enum(MetricKind, self.metric))
        if self.n_s < 0:
            raise UsageError(f"n_s 必须 >= 0: {self.n_s}")
        if self.latent_dim < 1:
            raise UsageError(f"隐空间维度必须 >= 1: {self.latent_dim}")

    @property
    def config_id(self) -> str:
        return (
            f"drama:drt={self.drt.value},metric={self.metric.value},ns={self.n_s},"
            f"m={self.latent_dim},decode={format_flag(self.decode_flag)},seed={self.seed}"
        )

    @property
    def reduction_key(self) -> Tuple:
        """决定降维拟合结果的字段，相同 key 的网格单元可复用编码与合并树"""
        return (self.drt, self.latent_dim, self.seed, self.settings)

    def with_seed(self, seed: int) -> "RunConfig":
        return replace(self, seed=seed)

    @classmethod
    def from_id(
        cls, config_id: str, settings: Optional[DrtSettings] = None
    ) -> "RunConfig":
        fields = parse_id_fields(config_id, "drama")
        try:
            return cls(
                drt=_parse_enum(DrtKind, fields["drt"]),
                metric=_parse_enum(MetricKind, fields["metric"]),
                n_s=int(fields.get("ns", 1)),
                latent_dim=int(fields.get("m", 2)),
                decode_flag=parse_flag(fields.get("decode", "on")),
                seed=int(fields.get("seed", 0)),
                settings=settings or DrtSettings(),
            )
        except KeyError as e:
            raise UsageError(f"配置标识缺少字段 {e}: {config_id!r}")
        except ValueError as e:
            raise UsageError(f"配置标识字段无效: {config_id!r} ({e})")


def _parse_enum(enum_type, name):
    try:
        return enum_type.from_string(name)
    except ValueError as e:
        raise UsageError(str(e))


Candidate = Union[RunConfig, LofConfig, IforestConfig]


def candidate_from_id(
    config_id: str, settings: Optional[DrtSettings] = None
) -> Candidate:
    """按前缀解析任意算法的配置标识"""
    prefix = str(config_id).partition(":")[0]
    if prefix == "drama":
        return RunConfig.from_id(config_id, settings)
    if prefix == "lof":
        return LofConfig.from_id(config_id)
    if prefix == "iforest":
        return IforestConfig.from_id(config_id)
    raise UsageError(f"未知的算法前缀: {config_id!r}")
