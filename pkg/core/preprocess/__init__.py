from .metrics import Normalizers, enrich, normalizers, pod_capacity, scale_benchmark

__all__ = ["Normalizers", "enrich", "normalizers", "pod_capacity", "scale_benchmark"]
