"""Comprehension and production with a trained model."""

from src.inference.ranking import RankedList, RankingMixin, merge_rankings
from src.inference.tasks import (
    FrameSampleConfig,
    comprehend,
    export_frame_posteriors,
    predict_future_usage,
    produce,
)

__all__ = [
    "FrameSampleConfig",
    "RankedList",
    "RankingMixin",
    "comprehend",
    "export_frame_posteriors",
    "merge_rankings",
    "predict_future_usage",
    "produce",
]
