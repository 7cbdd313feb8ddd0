"""
文件读写：数据集 CSV、结果表、排序文件与元数据
"""
