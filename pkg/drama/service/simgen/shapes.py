"""
模拟挑战使用的 10 个基函数，定义域 [0, 1]
"""

from typing import Callable, Tuple

import numpy as np


def _constant(t: np.ndarray) -> np.ndarray:
    return np.zeros_like(t)


def _ramp(t: np.ndarray) -> np.ndarray:
    return t.copy()


def _sine(t: np.ndarray) -> np.ndarray:
    return np.sin(2.0 * np.pi * t)


def _fast_sine(t: np.ndarray) -> np.ndarray:
    return np.sin(6.0 * np.pi * t)


def _bump(t: np.ndarray) -> np.ndarray:
    return np.exp(-((t - 0.5) ** 2) / (2.0 * 0.15**2))


def _step(t: np.ndarray) -> np.ndarray:
    return (t >= 0.5).astype(np.float64)


def _sawtooth(t: np.ndarray) -> np.ndarray:
    return np.mod(3.0 * t, 1.0)


def _damped(t: np.ndarray) -> np.ndarray:
    return np.exp(-3.0 * t) * np.sin(8.0 * np.pi * t)


def _parabola(t: np.ndarray) -> np.ndarray:
    return 4.0 * (t - 0.5) ** 2


def _sigmoid(t: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-12.0 * (t - 0.5)))


class ShapeLibrary:
    """按编号 0..9 访问的基函数库"""

    SHAPES: Tuple[Tuple[str, Callable[[np.ndarray], np.ndarray]], ...] = (
        ("constant", _constant),
        ("ramp", _ramp),
        ("sine", _sine),
        ("fast_sine", _fast_sine),
        ("bump", _bump),
        ("step", _step),
        ("sawtooth", _sawtooth),
        ("damped", _damped),
        ("parabola", _parabola),
        ("sigmoid", _sigmoid),
    )

    @classmethod
    def size(cls) -> int:
        return len(cls.SHAPES)

    @classmethod
    def name(cls, k: int) -> str:
        return cls.SHAPES[cls._check(k)][0]

    @classmethod
    def evaluate(cls, k: int, t: np.ndarray) -> np.ndarray:
        return cls.SHAPES[cls._check(k)][1](np.asarray(t, dtype=np.float64))

    @classmethod
    def _check(cls, k: int) -> int:
        if not 0 <= int(k) < len(cls.SHAPES):
            raise ValueError(f"形状编号必须在 [0, {len(cls.SHAPES)}) 内: {k}")
        return int(k)


def grid(n_f: int) -> np.ndarray:
    """t_i = i / (n_f − 1)"""
    return np.linspace(0.0, 1.0, n_f)


def sample_base(k: int, n_f: int, x_scale: float, y_scale: float) -> np.ndarray:
    """
    以 t = 0.5 为中心按 x_scale 拉伸时间轴（自变量截断到 [0, 1]），再乘 y_scale；不含噪声
    """
    if x_scale <= 0 or y_scale <= 0:
        raise ValueError(f"缩放因子必须为正: x_scale={x_scale}, y_scale={y_scale}")
    t = grid(n_f)
    stretched = np.clip(0.5 + (t - 0.5) / x_scale, 0.0, 1.0)
    return y_scale * ShapeLibrary.evaluate(k, stretched)


def gaussian_bump(n_f: int, amplitude: float, width: float, center: float) -> np.ndarray:
    """a · exp(−(t − t₀)² / (2w²))"""
    t = grid(n_f)
    return amplitude * np.exp(-((t - center) ** 2) / (2.0 * width**2))
