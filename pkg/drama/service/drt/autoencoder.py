"""
全连接自编码器（AE）与变分自编码器（VAE）

纯 numpy 实现，宽度 (n_f, h, m, h, n_f)，隐藏层 ReLU，瓶颈层与输出层线性。
VAE 的瓶颈层拆为均值头与对数方差头，编码时取均值。

参数按固定顺序存放在列表中：
- AE:  W0 b0 | W1 b1 | W2 b2 | W3 b3
- VAE: W0 b0 | Wmu bmu | Wlv blv | W2 b2 | W3 b3
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from drama.base.error_exceptions import FitDivergedError
from drama.service.drt.drt_kind import DrtKind
from drama.service.drt.drt_model import AeConfig

logger = logging.getLogger(__name__)

_AE_NAMES = ("W0", "b0", "W1", "b1", "W2", "b2", "W3", "b3")
_VAE_NAMES = ("W0", "b0", "Wmu", "bmu", "Wlv", "blv", "W2", "b2", "W3", "b3")


def _relu(values: np.ndarray) -> np.ndarray:
    return np.maximum(values, 0.0)


@dataclass
class AeNetwork:
    """训练中的网络，params 可原地更新"""

    kind: DrtKind
    params: List[np.ndarray]

    @property
    def names(self) -> Tuple[str, ...]:
        return _VAE_NAMES if self.kind is DrtKind.VAE else _AE_NAMES

    @property
    def widths(self) -> Tuple[int, int, int, int, int]:
        w0, w_latent = self.params[0], self.params[2]
        w3 = self.params[-2]
        return (w0.shape[0], w0.shape[1], w_latent.shape[1], w3.shape[0], w3.shape[1])

    @property
    def latent_dim(self) -> int:
        return int(self.params[2].shape[1])

    def _decoder(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return self.params[-4], self.params[-3], self.params[-2], self.params[-1]

    def to_arrays(self) -> Dict[str, np.ndarray]:
        return {name: value for name, value in zip(self.names, self.params)}

    @classmethod
    def from_arrays(cls, kind: DrtKind, arrays) -> "AeNetwork":
        names = _VAE_NAMES if kind is DrtKind.VAE else _AE_NAMES
        return cls(kind, [np.array(arrays[name], dtype=np.float64) for name in names])

    def encode(self, values: np.ndarray) -> np.ndarray:
        """输入 → 瓶颈（VAE 取均值头）"""
        w0, b0, w1, b1 = self.params[:4]
        return _relu(values @ w0 + b0) @ w1 + b1

    def decode(self, latent: np.ndarray) -> np.ndarray:
        w2, b2, w3, b3 = self._decoder()
        return _relu(latent @ w2 + b2) @ w3 + b3


def init_network(
    kind: DrtKind, n_features: int, latent_dim: int, seed: int
) -> AeNetwork:
    """权重 U(−1/√fan_in, 1/√fan_in)，偏置为 0"""
    if not kind.is_network:
        raise ValueError(f"{kind.value} 不是网络型降维方法")
    rng = np.random.default_rng(seed)
    _, hidden, m, _, _ = AeConfig.widths(n_features, latent_dim)

    def layer(fan_in: int, fan_out: int) -> List[np.ndarray]:
        bound = 1.0 / np.sqrt(fan_in)
        return [rng.uniform(-bound, bound, (fan_in, fan_out)), np.zeros(fan_out)]

    params = layer(n_features, hidden) + layer(hidden, m)
    if kind is DrtKind.VAE:
        params += layer(hidden, m)
    params += layer(m, hidden) + layer(hidden, n_features)
    return AeNetwork(kind, params)


def _forward_backward(
    network: AeNetwork,
    batch: np.ndarray,
    noise: Optional[np.ndarray],
    kl_weight: float,
    need_grad: bool,
) -> Tuple[float, Optional[List[np.ndarray]]]:
    n_samples, n_features = batch.shape
    w0, b0 = network.params[0], network.params[1]
    w2, b2, w3, b3 = network._decoder()

    pre0 = batch @ w0 + b0
    hidden0 = _relu(pre0)

    vae = network.kind is DrtKind.VAE
    if vae:
        w_mu, b_mu, w_lv, b_lv = network.params[2:6]
        mu = hidden0 @ w_mu + b_mu
        logvar = hidden0 @ w_lv + b_lv
        eps = np.zeros_like(mu) if noise is None else np.asarray(noise, float)
        std = np.exp(0.5 * logvar)
        latent = mu + std * eps
    else:
        w1, b1 = network.params[2], network.params[3]
        latent = hidden0 @ w1 + b1

    pre2 = latent @ w2 + b2
    hidden2 = _relu(pre2)
    output = hidden2 @ w3 + b3

    residual = output - batch
    loss = float(np.mean(residual * residual))
    if vae:
        kl = -0.5 * np.sum(1.0 + logvar - mu * mu - np.exp(logvar), axis=1)
        loss += kl_weight * float(np.mean(kl))

    if not need_grad:
        return loss, None

    d_output = 2.0 * residual / (n_samples * n_features)
    g_w3 = hidden2.T @ d_output
    g_b3 = d_output.sum(axis=0)
    d_pre2 = (d_output @ w3.T) * (pre2 > 0.0)
    g_w2 = latent.T @ d_pre2
    g_b2 = d_pre2.sum(axis=0)
    d_latent = d_pre2 @ w2.T

    if vae:
        d_mu = d_latent + kl_weight * mu / n_samples
        d_logvar = d_latent * eps * 0.5 * std - kl_weight * 0.5 * (
            1.0 - np.exp(logvar)
        ) / n_samples
        g_w_mu = hidden0.T @ d_mu
        g_b_mu = d_mu.sum(axis=0)
        g_w_lv = hidden0.T @ d_logvar
        g_b_lv = d_logvar.sum(axis=0)
        d_hidden0 = d_mu @ w_mu.T + d_logvar @ w_lv.T
    else:
        g_w1 = hidden0.T @ d_latent
        g_b1 = d_latent.sum(axis=0)
        d_hidden0 = d_latent @ w1.T

    d_pre0 = d_hidden0 * (pre0 > 0.0)
    g_w0 = batch.T @ d_pre0
    g_b0 = d_pre0.sum(axis=0)

    if vae:
        grads = [g_w0, g_b0, g_w_mu, g_b_mu, g_w_lv, g_b_lv, g_w2, g_b2, g_w3, g_b3]
    else:
        grads = [g_w0, g_b0, g_w1, g_b1, g_w2, g_b2, g_w3, g_b3]
    return loss, grads


def ae_loss(
    network: AeNetwork,
    batch: np.ndarray,
    noise: Optional[np.ndarray] = None,
    kl_weight: float = 1.0,
) -> float:
    """重建 MSE（VAE 另加 kl_weight × 批均值 KL）"""
    loss, _ = _forward_backward(network, batch, noise, kl_weight, need_grad=False)
    return loss


def ae_gradient(
    network: AeNetwork,
    batch: np.ndarray,
    noise: Optional[np.ndarray] = None,
    kl_weight: float = 1.0,
) -> List[np.ndarray]:
    """
    损失对全部权重与偏置的梯度，顺序与 network.params 一致

    Args:
        noise: VAE 重参数化噪声（batch × m）；None 时取 0，即走均值路径
        kl_weight: VAE 的 KL 权重，AE 忽略
    """
    _, grads = _forward_backward(network, batch, noise, kl_weight, need_grad=True)
    return grads


class _Adam:
    def __init__(self, params: Sequence[np.ndarray], lr: float):
        self.lr = lr
        self.beta1, self.beta2, self.eps = 0.9, 0.999, 1e-8
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, params: List[np.ndarray], grads: List[np.ndarray]):
        self.t += 1
        for i, grad in enumerate(grads):
            self.m[i] = self.beta1 * self.m[i] + (1 - self.beta1) * grad
            self.v[i] = self.beta2 * self.v[i] + (1 - self.beta2) * grad * grad
            m_hat = self.m[i] / (1 - self.beta1**self.t)
            v_hat = self.v[i] / (1 - self.beta2**self.t)
            params[i] -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def train_network(
    network: AeNetwork, values: np.ndarray, config: AeConfig, seed: int
) -> List[float]:
    """
    训练网络，返回每个 epoch 的平均损失

    Raises:
        FitDivergedError: 损失或参数出现非有限值
    """
    rng = np.random.default_rng(seed + 1)
    n_samples = values.shape[0]
    batch_size = config.batch_size_for(n_samples)
    adam = None
    if config.optimizer == "adam":
        adam = _Adam(network.params, config.learning_rate)
    latent_dim = network.latent_dim

    trace: List[float] = []
    for epoch in range(1, config.epochs + 1):
        if batch_size >= n_samples:
            batches = [np.arange(n_samples)]
        else:
            order = rng.permutation(n_samples)
            batches = [
                order[start : start + batch_size]
                for start in range(0, n_samples, batch_size)
            ]

        epoch_loss = 0.0
        for index in batches:
            batch = values[index]
            noise = (
                rng.standard_normal((batch.shape[0], latent_dim))
                if network.kind is DrtKind.VAE
                else None
            )
            loss, grads = _forward_backward(
                network, batch, noise, config.kl_weight, need_grad=True
            )
            if not np.isfinite(loss):
                raise FitDivergedError(network.kind.value, epoch)
            if adam is not None:
                adam.step(network.params, grads)
            else:
                for param, grad in zip(network.params, grads):
                    param -= config.learning_rate * grad
            epoch_loss += loss * batch.shape[0]

        trace.append(epoch_loss / n_samples)
        if not all(np.all(np.isfinite(p)) for p in network.params):
            raise FitDivergedError(network.kind.value, epoch)

    return trace
