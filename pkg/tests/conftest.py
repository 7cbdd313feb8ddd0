"""
pytest 配置和夹具(fixtures)

提供测试所需的通用夹具和配置
"""

import os
from unittest.mock import patch

import numpy as np
import pytest

from drama.base.error_category import ErrorCategory
from drama.base.error_collector import error_collector
from drama.config.config_models import AppConfig
from drama.service.data.data_model import DataMatrix, Dataset, LabelVector


@pytest.fixture(autouse=True)
def mock_config_loading():
    """自动Mock配置加载，避免读取真实配置文件"""
    with patch("drama.config.config.config_manager.load_config") as mock_load:
        mock_config = AppConfig()
        mock_config.global_config.runner.workers = 1
        mock_load.return_value = mock_config
        yield mock_load


@pytest.fixture
def small_app_config(mock_config_loading):
    """缩小网格与训练轮数，供检测/调参测试使用"""
    config = mock_config_loading.return_value
    config.grid.drts = ["pca"]
    config.grid.metrics = ["l1", "l2", "mahalanobis"]
    config.grid.n_s = [0, 1, 2]
    config.grid.decode = [True, False]
    config.baselines.lof_k = [5, 10]
    config.baselines.iforest_trees = 25
    config.baselines.iforest_subsample = 64
    config.drt.epochs = 20
    config.drt.nmf_max_iter = 100
    config.drt.ica_max_iter = 100
    return config


@pytest.fixture(autouse=True)
def reset_error_state():
    """每个测试前后清空错误收集器与分类映射"""
    error_collector.clear_errors()
    ErrorCategory.reset()
    yield
    error_collector.clear_errors()
    ErrorCategory.reset()


@pytest.fixture(autouse=True)
def test_env():
    """设置测试环境变量"""
    original_env = os.environ.copy()

    os.environ["TESTING"] = "1"
    os.environ["LOG_LEVEL"] = "DEBUG"
    os.environ.pop("DRAMA_WORKERS", None)

    yield

    os.environ.clear()
    os.environ.update(original_env)


@pytest.fixture
def rng():
    """固定种子的随机数生成器"""
    return np.random.default_rng(20240607)


@pytest.fixture
def two_blobs(rng):
    """两团分得很开的二维数据：前 20 行在原点附近，后 20 行在 (10, 10) 附近"""
    first = rng.normal(0.0, 0.3, size=(20, 2))
    second = rng.normal(10.0, 0.3, size=(20, 2))
    return DataMatrix(np.vstack([first, second]))


@pytest.fixture
def labeled_dataset(rng):
    """60 个 5 维 inlier 加 6 个远离的 outlier（排在最后）"""
    inliers = rng.normal(0.0, 1.0, size=(60, 5))
    outliers = rng.normal(0.0, 1.0, size=(6, 5)) + 8.0
    flags = np.r_[np.zeros(60, dtype=bool), np.ones(6, dtype=bool)]
    return Dataset(
        data=DataMatrix(np.vstack([inliers, outliers])),
        labels=LabelVector(flags),
        name="toy",
    )
