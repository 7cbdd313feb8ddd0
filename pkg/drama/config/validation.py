"""
配置验证模块

验证配置文件的正确性和完整性
"""

import logging
from typing import Any, Dict, List

from drama.config.config_models import (
    AppConfig,
    BaselineConfig,
    DrtConfig,
    ExperimentConfig,
    GridConfig,
)
from drama.config.validation_errors import ConfigValidationError
from drama.service.drt.drt_kind import DrtKind
from drama.service.metrics.metric_kind import MetricKind

_LOG_LEVELS = {"CRITICAL", "ERROR", "WARN", "WARNING", "INFO", "DEBUG", "NOTSET"}
_DEFAULT_KEYS = {
    "drt",
    "metric",
    "ns",
    "decode",
    "seed",
    "latent_dim",
    "n_seen",
    "scale",
}


class ConfigValidator:
    """配置验证器"""

    def __init__(self):
        self.errors: List[str] = []
        self.warnings: List[str] = []

    def validate(self, config: AppConfig) -> bool:
        """验证完整配置"""
        self.errors.clear()
        self.warnings.clear()

        try:
            self._validate_global_config(config)
            self._validate_drt_config(config.drt)
            self._validate_grid_config(config.grid)
            self._validate_baseline_config(config.baselines)
            self._validate_experiment_config(config.experiment)
            self._validate_defaults(config.defaults)

            # 记录验证结果
            if self.errors:
                for error in self.errors:
                    logging.error(f"配置验证错误: {error}")
                return False

            if self.warnings:
                for warning in self.warnings:
                    logging.warning(f"配置验证警告: {warning}")

            logging.info("配置验证通过")
            return True

        except Exception as e:
            logging.error(f"配置验证异常: {e}")
            self.errors.append(f"配置验证异常: {e}")
            return False

    def _validate_global_config(self, config: AppConfig):
        """验证全局配置"""
        level = config.global_config.log.level.upper()
        if level not in _LOG_LEVELS:
            self.errors.append(f"日志级别无效: {config.global_config.log.level}")

        workers = config.global_config.runner.workers
        if workers is not None:
            if not isinstance(workers, int) or workers < 1:
                self.errors.append(f"并行度必须为正整数: workers={workers}")
            elif workers > 64:
                self.warnings.append(f"并行度过高: workers={workers}")

    def _validate_drt_config(self, drt: DrtConfig):
        """验证降维训练设置"""
        if drt.latent_dim < 1:
            self.errors.append(f"隐空间维度必须 >= 1: latent_dim={drt.latent_dim}")
        if drt.epochs < 1:
            self.errors.append(f"训练轮数必须 >= 1: epochs={drt.epochs}")
        if drt.learning_rate <= 0:
            self.errors.append(f"学习率必须 > 0: learning_rate={drt.learning_rate}")
        elif drt.learning_rate > 0.1:
            self.warnings.append(f"学习率偏大，训练可能发散: {drt.learning_rate}")
        if drt.batch_size < 1:
            self.errors.append(f"批大小必须 >= 1: batch_size={drt.batch_size}")
        if drt.full_batch_limit < 0:
            self.errors.append(f"全批量阈值不能为负: {drt.full_batch_limit}")
        if drt.kl_weight < 0:
            self.errors.append(f"KL 权重不能为负: kl_weight={drt.kl_weight}")
        if drt.optimizer not in ("gd", "adam"):
            self.errors.append(f"优化器无效: {drt.optimizer}，必须为'gd'或'adam'")
        for key in ("ica_max_iter", "nmf_max_iter"):
            if getattr(drt, key) < 1:
                self.errors.append(f"{key} 必须 >= 1")
        for key in ("ica_tol", "nmf_tol"):
            if getattr(drt, key) <= 0:
                self.errors.append(f"{key} 必须 > 0")

    def _validate_grid_config(self, grid: GridConfig):
        """验证超参网格"""
        if not grid.drts:
            self.errors.append("网格 drts 不能为空")
        for name in grid.drts:
            if not self._is_drt_name(name):
                self.errors.append(f"未知的降维方法: {name}")

        if not grid.metrics:
            self.errors.append("网格 metrics 不能为空")
        for name in grid.metrics:
            if not self._is_metric_name(name):
                self.errors.append(f"未知的距离度量: {name}")

        if not grid.n_s:
            self.errors.append("网格 n_s 不能为空")
        for n_s in grid.n_s:
            if n_s < 0:
                self.errors.append(f"n_s 必须 >= 0: {n_s}")
            elif n_s > 8:
                self.warnings.append(f"n_s={n_s} 对应 {2 ** n_s} 个原型，运行较慢")

        if not grid.decode:
            self.errors.append("网格 decode 不能为空")

    def _validate_baseline_config(self, baselines: BaselineConfig):
        """验证基线网格"""
        if not baselines.lof_k:
            self.errors.append("LOF 近邻数列表不能为空")
        for k in baselines.lof_k:
            if k < 1:
                self.errors.append(f"LOF 近邻数必须 >= 1: {k}")
        if baselines.iforest_trees < 1:
            self.errors.append(f"iForest 树数必须 >= 1: {baselines.iforest_trees}")
        if baselines.iforest_subsample < 2:
            self.errors.append(
                f"iForest 子样本大小必须 >= 2: {baselines.iforest_subsample}"
            )

    def _validate_experiment_config(self, experiment: ExperimentConfig):
        """验证实验配置"""
        if experiment.scale not in ("desk", "paper"):
            self.errors.append(f"实验规模无效: {experiment.scale}，必须为'desk'或'paper'")
        if not experiment.seeds:
            self.errors.append("实验种子列表不能为空")
        if len(set(experiment.seeds)) != len(experiment.seeds):
            self.warnings.append("实验种子列表存在重复")
        if not experiment.n_seen:
            self.errors.append("n_seen 列表不能为空")
        for n_seen in experiment.n_seen:
            if n_seen < 1:
                self.errors.append(f"n_seen 必须 >= 1: {n_seen}")

    def _validate_defaults(self, defaults: Dict[str, Any]):
        """验证命令行默认值"""
        for key in defaults:
            if key not in _DEFAULT_KEYS:
                self.warnings.append(f"未知的默认参数: {key}，将被忽略")
        if "drt" in defaults and not self._is_drt_name(defaults["drt"]):
            self.errors.append(f"默认降维方法无效: {defaults['drt']}")
        if "metric" in defaults and not self._is_metric_name(defaults["metric"]):
            self.errors.append(f"默认距离度量无效: {defaults['metric']}")

    @staticmethod
    def _is_drt_name(name: Any) -> bool:
        try:
            DrtKind.from_string(str(name))
            return True
        except ValueError:
            return False

    @staticmethod
    def _is_metric_name(name: Any) -> bool:
        try:
            MetricKind.from_string(str(name))
            return True
        except ValueError:
            return False

    def get_validation_summary(self) -> Dict[str, Any]:
        """获取验证摘要"""
        return {
            "valid": len(self.errors) == 0,
            "error_count": len(self.errors),
            "warning_count": len(self.warnings),
            "errors": self.errors.copy(),
            "warnings": self.warnings.copy(),
        }


def validate_config(config: AppConfig) -> bool:
    """验证配置的快捷函数"""
    validator = ConfigValidator()
    return validator.validate(config)


def ensure_valid_config(config: AppConfig) -> None:
    """验证失败时抛出 ConfigValidationError"""
    validator = ConfigValidator()
    if not validator.validate(config):
        raise ConfigValidationError(
            "配置验证失败: " + "; ".join(validator.errors), validator.errors
        )
