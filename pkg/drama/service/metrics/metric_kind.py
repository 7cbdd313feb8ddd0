"""
距离度量种类
"""

from enum import Enum


class MetricKind(Enum):
    """十种距离度量，取值为命令行/配置中的小写名称"""

    L1 = "l1"
    L2 = "l2"
    L4 = "l4"
    WL2 = "wl2"
    WL4 = "wl4"
    BRAY_CURTIS = "braycurtis"
    CHEBYSHEV = "chebyshev"
    CANBERRA = "canberra"
    CORRELATION = "correlation"
    MAHALANOBIS = "mahalanobis"

    @classmethod
    def from_string(cls, name: str) -> "MetricKind":
        key = str(name).strip().lower()
        if key == "cityblock":
            return cls.L1
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(
            f"未知的距离度量: {name}，可选: {', '.join(k.value for k in cls)}"
        )

    @property
    def needs_sigma(self) -> bool:
        return self in (MetricKind.WL2, MetricKind.WL4)

    @property
    def needs_covariance(self) -> bool:
        return self is MetricKind.MAHALANOBIS

    def __str__(self) -> str:
        return self.value
