"""
单元测试包

目录说明:
- base / config: 异常体系、日志、配置
- data / drt / prototypes / metrics: 流水线各步骤
- detector / scoring / baselines: 检测、调参、评分与基线
- simgen / io / experiments: 数据生成、文件读写、实验复现
"""
