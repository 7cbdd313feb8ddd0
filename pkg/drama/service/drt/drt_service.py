"""
降维服务：fit / encode / decode 统一入口

预处理：PCA/ICA/AE/VAE 先标准化（可关闭），NMF 只做非负平移。
"""

import logging
import time
from typing import Optional

import numpy as np

from drama.base.error_exceptions import (
    ConfigurationError,
    FitDivergedError,
    LatentDimTooLargeError,
    ShapeMismatchError,
)
from drama.base.logger import get_structured_logger
from drama.service.data.data_model import (
    DataMatrix,
    LatentMatrix,
    StandardizeRecord,
    standardize,
)
from drama.service.drt import autoencoder, linear, nmf
from drama.service.drt.drt_kind import DrtKind
from drama.service.drt.drt_model import DrtModel, DrtSettings

logger = logging.getLogger(__name__)
structured_logger = get_structured_logger("drt_service")


def latent_dim_limit(kind: DrtKind, n_samples: int, n_features: int) -> int:
    """允许的最大隐空间维度：PCA 可满秩，其余必须严格压缩"""
    if kind is DrtKind.PCA:
        return min(n_samples, n_features)
    return n_features - 1


def _check_latent_dim(kind: DrtKind, latent_dim: int, data: DataMatrix) -> None:
    if latent_dim < 1:
        raise ConfigurationError(
            f"隐空间维度必须 >= 1: {latent_dim}", {"latent_dim": latent_dim}
        )
    limit = latent_dim_limit(kind, data.n_d, data.n_f)
    if latent_dim > limit:
        raise LatentDimTooLargeError(latent_dim, data.n_f, limit)


def fit(
    kind: DrtKind,
    data: DataMatrix,
    latent_dim: int,
    seed: int,
    settings: Optional[DrtSettings] = None,
) -> DrtModel:
    """
    在 data 上拟合降维模型

    Raises:
        LatentDimTooLargeError: m 超出允许范围
        FitDivergedError: 训练损失出现非有限值
    """
    settings = settings or DrtSettings()
    if data.n_d < 2:
        raise ShapeMismatchError(
            "拟合至少需要 2 个样本", expected=">=2", actual=data.n_d
        )
    _check_latent_dim(kind, latent_dim, data)

    start_time = time.time()
    shift = 0.0
    trace: list = []
    iterations = 0

    if kind is DrtKind.NMF:
        record = StandardizeRecord.identity(data.n_f)
        shift = nmf.nmf_shift(data.values)
        params, trace, iterations = nmf.fit_nmf(
            data.values - shift,
            latent_dim,
            seed,
            max_iter=settings.nmf_max_iter,
            tol=settings.nmf_tol,
        )
    else:
        if settings.standardize:
            prepared, record = standardize(data)
        else:
            prepared, record = data, StandardizeRecord.identity(data.n_f)

        if kind is DrtKind.PCA:
            params = linear.fit_pca(prepared.values, latent_dim)
        elif kind is DrtKind.ICA:
            params, iterations = linear.fit_ica(
                prepared.values,
                latent_dim,
                seed,
                max_iter=settings.ica_max_iter,
                tol=settings.ica_tol,
            )
        else:
            network = autoencoder.init_network(kind, data.n_f, latent_dim, seed)
            trace = autoencoder.train_network(
                network, prepared.values, settings.ae, seed
            )
            iterations = len(trace)
            params = network.to_arrays()

    if trace and not np.all(np.isfinite(trace)):
        raise FitDivergedError(kind.value, int(np.argmax(~np.isfinite(trace))))
    for value in params.values():
        if not np.all(np.isfinite(value)):
            raise FitDivergedError(kind.value, iterations)

    model = DrtModel(
        kind=kind,
        latent_dim=latent_dim,
        n_features=data.n_f,
        params=params,
        preprocessing=record,
        shift=shift,
        loss_trace=np.asarray(trace, dtype=np.float64),
        seed=seed,
        iterations=iterations,
        settings=settings,
    )

    structured_logger.log_fit(
        kind=kind.value,
        n_samples=data.n_d,
        n_features=data.n_f,
        iterations=iterations,
        final_loss=float(trace[-1]) if len(trace) else None,
    )
    structured_logger.log_performance(
        f"fit_{kind.value}", round((time.time() - start_time) * 1000, 2)
    )
    return model


def encode(model: DrtModel, data: DataMatrix) -> LatentMatrix:
    """X → z"""
    if data.n_f != model.n_features:
        raise ShapeMismatchError(
            f"编码输入特征数 {data.n_f} 与模型训练特征数 {model.n_features} 不一致",
            expected=model.n_features,
            actual=data.n_f,
        )

    kind = model.kind
    if kind is DrtKind.NMF:
        settings = model.settings or DrtSettings()
        shifted = np.maximum(data.values - model.shift, 0.0)
        latent = nmf.nmf_encode(
            model.params,
            shifted,
            max_iter=settings.nmf_max_iter,
            tol=settings.nmf_tol,
        )
        return LatentMatrix(latent)

    prepared = model.preprocessing.transform(data).values
    if kind is DrtKind.PCA:
        latent = linear.pca_encode(model.params, prepared)
    elif kind is DrtKind.ICA:
        latent = linear.ica_encode(model.params, prepared)
    else:
        network = autoencoder.AeNetwork.from_arrays(kind, model.params)
        latent = network.encode(prepared)
    return LatentMatrix(latent)


def decode(model: DrtModel, latent: LatentMatrix) -> DataMatrix:
    """z → X̂，返回原始特征坐标"""
    if latent.m != model.latent_dim:
        raise ShapeMismatchError(
            f"隐空间维度 {latent.m} 与模型 {model.latent_dim} 不一致",
            expected=model.latent_dim,
            actual=latent.m,
        )

    kind = model.kind
    if kind is DrtKind.NMF:
        return DataMatrix(nmf.nmf_decode(model.params, latent.values) + model.shift)

    if kind is DrtKind.PCA:
        prepared = linear.pca_decode(model.params, latent.values)
    elif kind is DrtKind.ICA:
        prepared = linear.ica_decode(model.params, latent.values)
    else:
        network = autoencoder.AeNetwork.from_arrays(kind, model.params)
        prepared = network.decode(latent.values)
    return model.preprocessing.inverse_transform(DataMatrix(prepared))
