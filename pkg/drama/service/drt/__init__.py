"""
降维方法：PCA / ICA / NMF / AE / VAE
"""
