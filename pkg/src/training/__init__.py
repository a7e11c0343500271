"""Optimization loops and cross-validation."""

from src.training.crossval import FoldResult, cross_validate, mean_metrics, remove_leakage
from src.training.trainer import EpochStats, TrainingReport, train

__all__ = [
    "EpochStats",
    "FoldResult",
    "TrainingReport",
    "cross_validate",
    "mean_metrics",
    "remove_leakage",
    "train",
]
