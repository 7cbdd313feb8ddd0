"""
DRAMA 配置管理包
"""

from .config import (
    # 数据类
    AppConfig,
    GlobalConfig,
    LogConfig,
    RunnerConfig,
    DrtConfig,
    GridConfig,
    BaselineConfig,
    ExperimentConfig,
    # 配置管理器
    ConfigManager,
    config_manager,
    # 接口函数
    get_runner_config,
    get_drt_settings,
    get_grid_config,
    get_baseline_config,
    get_experiment_config,
    get_cli_defaults,
    get_standardize_flag,
)

# 配置验证
from .validation import (
    ConfigValidator,
    ensure_valid_config,
    validate_config,
)
from .validation_errors import ConfigValidationError

__all__ = [
    # 数据类
    "AppConfig",
    "GlobalConfig",
    "LogConfig",
    "RunnerConfig",
    "DrtConfig",
    "GridConfig",
    "BaselineConfig",
    "ExperimentConfig",
    # 配置管理
    "ConfigManager",
    "config_manager",
    "get_runner_config",
    "get_drt_settings",
    "get_grid_config",
    "get_baseline_config",
    "get_experiment_config",
    "get_cli_defaults",
    "get_standardize_flag",
    # 配置验证
    "ConfigValidator",
    "ConfigValidationError",
    "ensure_valid_config",
    "validate_config",
]
