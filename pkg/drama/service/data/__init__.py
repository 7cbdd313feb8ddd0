"""
数据容器：DataMatrix / LatentMatrix / LabelVector / Dataset
"""
