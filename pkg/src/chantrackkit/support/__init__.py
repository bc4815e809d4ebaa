from .kmeans import SupportSet, kmeans_support

__all__ = ["SupportSet", "kmeans_support"]
