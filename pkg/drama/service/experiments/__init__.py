"""
实验脚本：模拟挑战曲线、真实数据套件与汇总
"""
