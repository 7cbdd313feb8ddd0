"""
DRAMA 配置管理模块

支持结构化配置及环境变量覆盖
"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from drama.config.config_models import (
    AppConfig,
    BaselineConfig,
    DrtConfig,
    ExperimentConfig,
    GlobalConfig,
    GridConfig,
    LogConfig,
    RunnerConfig,
)

# 导出所有配置模型
__all__ = [
    "LogConfig",
    "RunnerConfig",
    "GlobalConfig",
    "DrtConfig",
    "GridConfig",
    "BaselineConfig",
    "ExperimentConfig",
    "AppConfig",
    "ConfigManager",
    "config_manager",
    "get_runner_config",
    "get_drt_settings",
    "get_grid_config",
    "get_baseline_config",
    "get_experiment_config",
    "get_cli_defaults",
    "get_standardize_flag",
]


# =============================================================================
# 配置加载和解析
# =============================================================================


class ConfigManager:
    """配置管理器"""

    def __init__(self, config_file: str = "config.yaml"):
        self.config_file = config_file
        self._config: Optional[AppConfig] = None
        self._raw_config: Optional[Dict] = None

    def load_config(self, force_reload: bool = False) -> AppConfig:
        """加载配置文件"""
        if self._config is None or force_reload:
            self._load_from_file()
        return self._config

    def reload_config(self) -> AppConfig:
        """强制重新加载配置文件"""
        return self.load_config(force_reload=True)

    def use_file(self, config_file: str) -> AppConfig:
        """切换配置文件并重新加载（命令行 --config）"""
        self.config_file = config_file
        return self.reload_config()

    def _load_from_file(self):
        """从文件加载配置"""
        try:
            if not Path(self.config_file).exists():
                logging.debug(f"配置文件 {self.config_file} 不存在，使用默认配置")
                self._config = AppConfig()
                self._apply_env_overrides(self._config)
                return

            with open(self.config_file, "r", encoding="utf-8") as f:
                self._raw_config = yaml.safe_load(f) or {}

            self._config = self._parse_structured_config(self._raw_config)
            logging.info(f"成功加载配置文件: {self.config_file}")

        except Exception as e:
            logging.error(f"加载配置文件失败: {e}")
            self._config = AppConfig()
            self._apply_env_overrides(self._config)

    def _parse_structured_config(self, raw_config: Dict) -> AppConfig:
        """解析配置格式"""
        config = AppConfig()

        # 解析全局配置
        if "global" in raw_config:
            global_data = raw_config["global"] or {}

            if "log" in global_data:
                log_data = global_data["log"] or {}
                config.global_config.log = LogConfig(
                    level=str(log_data.get("level", "INFO"))
                )

            if "runner" in global_data:
                runner_data = global_data["runner"] or {}
                config.global_config.runner = RunnerConfig(
                    workers=runner_data.get("workers")
                )

            if "standardize" in global_data:
                config.global_config.standardize = bool(global_data["standardize"])

        # 降维训练设置
        if "drt" in raw_config:
            drt_data = raw_config["drt"] or {}
            defaults = DrtConfig()
            config.drt = DrtConfig(
                latent_dim=int(drt_data.get("latent_dim", defaults.latent_dim)),
                epochs=int(drt_data.get("epochs", defaults.epochs)),
                learning_rate=float(
                    drt_data.get("learning_rate", defaults.learning_rate)
                ),
                batch_size=int(drt_data.get("batch_size", defaults.batch_size)),
                full_batch_limit=int(
                    drt_data.get("full_batch_limit", defaults.full_batch_limit)
                ),
                kl_weight=float(drt_data.get("kl_weight", defaults.kl_weight)),
                optimizer=str(drt_data.get("optimizer", defaults.optimizer)).lower(),
                ica_max_iter=int(drt_data.get("ica_max_iter", defaults.ica_max_iter)),
                ica_tol=float(drt_data.get("ica_tol", defaults.ica_tol)),
                nmf_max_iter=int(drt_data.get("nmf_max_iter", defaults.nmf_max_iter)),
                nmf_tol=float(drt_data.get("nmf_tol", defaults.nmf_tol)),
            )

        # 超参网格
        if "grid" in raw_config:
            grid_data = raw_config["grid"] or {}
            defaults = GridConfig()
            config.grid = GridConfig(
                drts=[str(d).lower() for d in grid_data.get("drts", defaults.drts)],
                metrics=[
                    str(m).lower() for m in grid_data.get("metrics", defaults.metrics)
                ],
                n_s=[int(n) for n in grid_data.get("n_s", defaults.n_s)],
                decode=[
                    self._coerce_flag(v) for v in grid_data.get("decode", defaults.decode)
                ],
            )

        # 基线网格
        if "baselines" in raw_config:
            base_data = raw_config["baselines"] or {}
            defaults = BaselineConfig()
            config.baselines = BaselineConfig(
                lof_k=[int(k) for k in base_data.get("lof_k", defaults.lof_k)],
                iforest_trees=int(
                    base_data.get("iforest_trees", defaults.iforest_trees)
                ),
                iforest_subsample=int(
                    base_data.get("iforest_subsample", defaults.iforest_subsample)
                ),
            )

        # 实验配置
        if "experiment" in raw_config:
            exp_data = raw_config["experiment"] or {}
            defaults = ExperimentConfig()
            config.experiment = ExperimentConfig(
                scale=str(exp_data.get("scale", defaults.scale)).lower(),
                seeds=[int(s) for s in exp_data.get("seeds", defaults.seeds)],
                n_seen=[int(n) for n in exp_data.get("n_seen", defaults.n_seen)],
                record_time=bool(exp_data.get("record_time", defaults.record_time)),
            )

        # 命令行默认值
        if isinstance(raw_config.get("defaults"), dict):
            config.defaults = {
                str(key).replace("-", "_"): value
                for key, value in raw_config["defaults"].items()
            }

        # 应用环境变量覆盖
        self._apply_env_overrides(config)

        return config

    @staticmethod
    def _coerce_flag(value: Any) -> bool:
        """YAML 中的 on/off、true/false 统一为布尔值"""
        if isinstance(value, bool):
            return value
        return str(value).strip().lower() in ("on", "true", "1", "yes")

    def _apply_env_overrides(self, config: AppConfig):
        """应用环境变量覆盖"""
        raw_workers = os.getenv("DRAMA_WORKERS")
        if raw_workers:
            try:
                config.global_config.runner.workers = int(raw_workers)
            except ValueError:
                logging.warning(
                    f"环境变量 DRAMA_WORKERS 无法解析为整数 (got {raw_workers!r})，已忽略"
                )

        # 日志级别覆盖
        if os.getenv("LOG_LEVEL"):
            config.global_config.log.level = os.getenv("LOG_LEVEL").upper()


# =============================================================================
# 全局配置管理器实例
# =============================================================================

# 全局配置管理器实例
config_manager = ConfigManager()


# =============================================================================
# 接口函数
# =============================================================================


def get_runner_config() -> RunnerConfig:
    """获取并行度配置"""
    config = config_manager.load_config()
    return config.global_config.runner


def get_drt_settings() -> DrtConfig:
    """获取降维训练设置"""
    config = config_manager.load_config()
    return config.drt


def get_grid_config() -> GridConfig:
    """获取 DRAMA 超参网格"""
    config = config_manager.load_config()
    return config.grid


def get_baseline_config() -> BaselineConfig:
    """获取基线算法网格"""
    config = config_manager.load_config()
    return config.baselines


def get_experiment_config() -> ExperimentConfig:
    """获取实验复现配置"""
    config = config_manager.load_config()
    return config.experiment


def get_cli_defaults() -> Dict[str, Any]:
    """获取命令行默认值（键名已转换为下划线形式）"""
    config = config_manager.load_config()
    return dict(config.defaults)


def get_standardize_flag() -> bool:
    """真实数据特征是否标准化"""
    config = config_manager.load_config()
    return config.global_config.standardize
