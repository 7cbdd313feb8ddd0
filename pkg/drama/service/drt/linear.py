"""
线性降维：PCA（SVD）与 FastICA

输入均为预处理后的矩阵（通常已标准化）；两者都会再做一次中心化并记录均值，
因此关闭标准化时同样成立。
"""

import logging
from typing import Dict, Tuple

import numpy as np

logger = logging.getLogger(__name__)


def _fix_signs(components: np.ndarray) -> np.ndarray:
    """每个主成分绝对值最大的分量取正"""
    pivots = np.argmax(np.abs(components), axis=1)
    signs = np.sign(components[np.arange(components.shape[0]), pivots])
    signs[signs == 0] = 1.0
    return components * signs[:, None]


def fit_pca(values: np.ndarray, latent_dim: int) -> Dict[str, np.ndarray]:
    """中心化矩阵的 SVD，取前 m 个右奇异向量"""
    mean = values.mean(axis=0)
    _, singular_values, vt = np.linalg.svd(values - mean, full_matrices=False)
    components = _fix_signs(vt[:latent_dim])
    return {
        "mean": mean,
        "components": components,
        "singular_values": singular_values[:latent_dim],
    }


def pca_encode(params, values: np.ndarray) -> np.ndarray:
    return (values - params["mean"]) @ params["components"].T


def pca_decode(params, latent: np.ndarray) -> np.ndarray:
    return latent @ params["components"] + params["mean"]


# =============================================================================
# FastICA
# =============================================================================


def _symmetric_decorrelation(w: np.ndarray) -> np.ndarray:
    """W ← (W Wᵀ)^{-1/2} W"""
    eigenvalues, eigenvectors = np.linalg.eigh(w @ w.T)
    eigenvalues = np.maximum(eigenvalues, np.finfo(np.float64).tiny)
    return (eigenvectors * (1.0 / np.sqrt(eigenvalues))) @ eigenvectors.T @ w


def fit_ica(
    values: np.ndarray,
    latent_dim: int,
    seed: int,
    max_iter: int = 500,
    tol: float = 1e-6,
) -> Tuple[Dict[str, np.ndarray], int]:
    """
    对称 FastICA（logcosh 对比函数）

    Returns:
        (参数字典, 实际迭代次数)；参数含 mean、unmixing（m × n_f）、mixing（n_f × m）
    """
    n_samples = values.shape[0]
    mean = values.mean(axis=0)
    centered = values - mean

    # 白化：投影到前 m 个主方向并缩放为单位协方差
    _, singular_values, vt = np.linalg.svd(centered, full_matrices=False)
    top = singular_values[:latent_dim]
    floor = np.finfo(np.float64).eps * max(float(singular_values[0]), 1.0)
    top = np.maximum(top, floor)
    whitening = (vt[:latent_dim].T / top) * np.sqrt(n_samples)
    whitened = centered @ whitening

    rng = np.random.default_rng(seed)
    w = _symmetric_decorrelation(rng.standard_normal((latent_dim, latent_dim)))

    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        projected = whitened @ w.T
        g = np.tanh(projected)
        g_prime = 1.0 - g * g
        w_new = (g.T @ whitened) / n_samples - g_prime.mean(axis=0)[:, None] * w
        w_new = _symmetric_decorrelation(w_new)
        change = np.max(np.abs(np.abs(np.einsum("ij,ij->i", w_new, w)) - 1.0))
        w = w_new
        if change < tol:
            converged = True
            break

    if not converged:
        logger.warning(f"FastICA 在 {max_iter} 次迭代内未收敛（tol={tol}）")

    unmixing = w @ whitening.T
    return (
        {
            "mean": mean,
            "unmixing": unmixing,
            "mixing": np.linalg.pinv(unmixing),
        },
        iterations,
    )


def ica_encode(params, values: np.ndarray) -> np.ndarray:
    return (values - params["mean"]) @ params["unmixing"].T


def ica_decode(params, latent: np.ndarray) -> np.ndarray:
    return latent @ params["mixing"].T + params["mean"]
