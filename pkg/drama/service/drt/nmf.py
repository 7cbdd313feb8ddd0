"""
非负矩阵分解（Frobenius 乘法更新）

X ≈ W H，W 为 n_d × m 的系数（即隐空间编码），H 为 m × n_f 的成分矩阵。
数据先平移 shift = min(0, min X) 保证非负，解码时加回。
"""

import logging
from typing import Dict, List, Tuple

import numpy as np

logger = logging.getLogger(__name__)

_EPS = 1e-12


def nmf_shift(values: np.ndarray) -> float:
    """只有存在负值时才平移"""
    return float(min(0.0, values.min()))


def _objective(values: np.ndarray, w: np.ndarray, h: np.ndarray) -> float:
    residual = values - w @ h
    return float(np.mean(residual * residual))


def _converged(previous: float, current: float, tol: float) -> bool:
    return abs(previous - current) <= tol * max(previous, _EPS)


def update_h(values: np.ndarray, w: np.ndarray, h: np.ndarray) -> np.ndarray:
    return h * (w.T @ values) / (w.T @ w @ h + _EPS)


def update_w(values: np.ndarray, w: np.ndarray, h: np.ndarray) -> np.ndarray:
    return w * (values @ h.T) / (w @ (h @ h.T) + _EPS)


def fit_nmf(
    values: np.ndarray,
    latent_dim: int,
    seed: int,
    max_iter: int = 500,
    tol: float = 1e-6,
) -> Tuple[Dict[str, np.ndarray], List[float], int]:
    """
    Args:
        values: 已平移的非负矩阵

    Returns:
        (参数字典 {coefficients, components}, 每次迭代的目标值, 迭代次数)
    """
    n_samples, n_features = values.shape
    rng = np.random.default_rng(seed)
    scale = np.sqrt(max(values.mean(), _EPS) / latent_dim)
    w = scale * rng.random((n_samples, latent_dim))
    h = scale * rng.random((latent_dim, n_features))

    trace = [_objective(values, w, h)]
    iterations = 0
    for iterations in range(1, max_iter + 1):
        h = update_h(values, w, h)
        w = update_w(values, w, h)
        trace.append(_objective(values, w, h))
        if _converged(trace[-2], trace[-1], tol):
            break

    return {"coefficients": w, "components": h}, trace, iterations


def nmf_encode(
    params, values: np.ndarray, max_iter: int = 500, tol: float = 1e-6
) -> np.ndarray:
    """
    成分矩阵固定，对新数据的系数做乘法更新

    每行只依赖自身：初值取该行均值，收敛按行判定，已收敛的行不再更新。
    因此一行的编码与同批的其他行无关，内容相同的行得到相同编码。
    """
    h = params["components"]
    latent_dim = h.shape[0]
    row_means = np.maximum(values.mean(axis=1), _EPS)
    w = np.repeat(np.sqrt(row_means / latent_dim)[:, None], latent_dim, axis=1)

    previous = _row_objective(values, w, h)
    active = np.ones(values.shape[0], dtype=bool)
    for _ in range(max_iter):
        rows = np.flatnonzero(active)
        w[rows] = update_w(values[rows], w[rows], h)
        current = _row_objective(values[rows], w[rows], h)
        done = np.abs(previous[rows] - current) <= tol * np.maximum(previous[rows], _EPS)
        previous[rows] = current
        active[rows[done]] = False
        if not active.any():
            break
    return w


def _row_objective(values: np.ndarray, w: np.ndarray, h: np.ndarray) -> np.ndarray:
    residual = values - w @ h
    return np.mean(residual * residual, axis=1)


def nmf_decode(params, latent: np.ndarray) -> np.ndarray:
    return latent @ params["components"]
