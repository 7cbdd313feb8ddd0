"""
DRAMA 业务层

data → drt → prototypes → metrics → detector 组成主流程，
scoring / simgen / baselines / io / experiments 提供评估、数据与复现实验。
"""
