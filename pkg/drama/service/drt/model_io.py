"""
降维模型序列化

文件为 numpy `.npz` 压缩包，键布局：

- `format`       字符串 "drama-drt-v1"
- `kind`         字符串，DrtKind 的小写名称
- `meta`         int64 数组 [latent_dim, n_features, seed, iterations]
- `shift`        float64 标量（NMF 平移量，其余为 0）
- `prep_mean`    标准化均值（长度 n_f）
- `prep_scale`   标准化尺度（长度 n_f）
- `loss_trace`   训练损失轨迹
- `settings`     float64 数组 [standardize, learning_rate, epochs, batch_size,
                 full_batch_limit, kl_weight, ica_max_iter, ica_tol, nmf_max_iter, nmf_tol]
- `optimizer`    字符串 gd | adam
- `param__<名>`  各参数数组，名称与 DrtModel.params 的键一致

读取时禁用 pickle。
"""

import logging
from pathlib import Path
from typing import Union

import numpy as np

from drama.base.error_exceptions import DramaIOError, ParseError
from drama.service.data.data_model import StandardizeRecord
from drama.service.drt.drt_kind import DrtKind
from drama.service.drt.drt_model import AeConfig, DrtModel, DrtSettings

logger = logging.getLogger(__name__)

FORMAT_TAG = "drama-drt-v1"
_PARAM_PREFIX = "param__"


def _pack_settings(settings: DrtSettings) -> np.ndarray:
    ae = settings.ae
    return np.array(
        [
            float(settings.standardize),
            ae.learning_rate,
            ae.epochs,
            ae.batch_size,
            ae.full_batch_limit,
            ae.kl_weight,
            settings.ica_max_iter,
            settings.ica_tol,
            settings.nmf_max_iter,
            settings.nmf_tol,
        ],
        dtype=np.float64,
    )


def _unpack_settings(values: np.ndarray, optimizer: str) -> DrtSettings:
    (
        standardize,
        learning_rate,
        epochs,
        batch_size,
        full_batch_limit,
        kl_weight,
        ica_max_iter,
        ica_tol,
        nmf_max_iter,
        nmf_tol,
    ) = (float(v) for v in values)
    return DrtSettings(
        standardize=bool(standardize),
        ae=AeConfig(
            learning_rate=learning_rate,
            epochs=int(epochs),
            batch_size=int(batch_size),
            full_batch_limit=int(full_batch_limit),
            kl_weight=kl_weight,
            optimizer=optimizer,
        ),
        ica_max_iter=int(ica_max_iter),
        ica_tol=ica_tol,
        nmf_max_iter=int(nmf_max_iter),
        nmf_tol=nmf_tol,
    )


def save_model(model: DrtModel, path: Union[str, Path]) -> None:
    """写出模型；路径不以 .npz 结尾时 numpy 会自动补全"""
    arrays = {
        "format": np.array(FORMAT_TAG),
        "kind": np.array(model.kind.value),
        "meta": np.array(
            [model.latent_dim, model.n_features, model.seed, model.iterations],
            dtype=np.int64,
        ),
        "shift": np.array(model.shift, dtype=np.float64),
        "prep_mean": model.preprocessing.mean,
        "prep_scale": model.preprocessing.scale,
        "loss_trace": model.loss_trace,
    }
    settings = model.settings or DrtSettings()
    arrays["settings"] = _pack_settings(settings)
    arrays["optimizer"] = np.array(settings.ae.optimizer)
    for name, value in model.params.items():
        arrays[f"{_PARAM_PREFIX}{name}"] = value

    try:
        np.savez_compressed(path, **arrays)
    except OSError as e:
        raise DramaIOError(f"写入模型失败: {e}", str(path))
    logger.info(f"降维模型已保存: {path}")


def load_model(path: Union[str, Path]) -> DrtModel:
    """读取 save_model 写出的文件"""
    try:
        with np.load(path, allow_pickle=False) as archive:
            contents = {key: archive[key] for key in archive.files}
    except (OSError, ValueError) as e:
        raise DramaIOError(f"读取模型失败: {e}", str(path))

    tag = str(contents.get("format", ""))
    if tag != FORMAT_TAG:
        raise ParseError(f"模型格式标签不匹配: {tag!r}，期望 {FORMAT_TAG!r}")

    try:
        kind = DrtKind.from_string(str(contents["kind"]))
        latent_dim, n_features, seed, iterations = (
            int(v) for v in contents["meta"]
        )
        params = {
            key[len(_PARAM_PREFIX) :]: value
            for key, value in contents.items()
            if key.startswith(_PARAM_PREFIX)
        }
        return DrtModel(
            kind=kind,
            latent_dim=latent_dim,
            n_features=n_features,
            params=params,
            preprocessing=StandardizeRecord(
                contents["prep_mean"], contents["prep_scale"]
            ),
            shift=float(contents["shift"]),
            loss_trace=contents["loss_trace"],
            seed=seed,
            iterations=iterations,
            settings=_unpack_settings(
                contents["settings"], str(contents["optimizer"])
            ),
        )
    except (KeyError, ValueError) as e:
        raise ParseError(f"模型文件内容不完整: {e}")
