"""
降维方法种类
"""

from enum import Enum


class DrtKind(Enum):
    """五种内置降维方法"""

    PCA = "pca"
    ICA = "ica"
    NMF = "nmf"
    AE = "ae"
    VAE = "vae"

    @classmethod
    def from_string(cls, name: str) -> "DrtKind":
        key = str(name).strip().lower()
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(
            f"未知的降维方法: {name}，可选: {', '.join(k.value for k in cls)}"
        )

    @property
    def is_network(self) -> bool:
        return self in (DrtKind.AE, DrtKind.VAE)

    def __str__(self) -> str:
        return self.value
