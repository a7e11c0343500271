"""Historical POS series, change-point detection and temporal splits."""

from src.diachronic.changepoint import ChangePoint, detect_all, detect_change_point, scan_change_point
from src.diachronic.series import (
    PosTimeSeries,
    RatioSeries,
    frequency_filter,
    load_counts,
    normalize_zscore,
    noun_ratio,
    zseries_frame,
)
from src.diachronic.split import WordPartition, split_by_change_point, temporal_precision

__all__ = [
    "ChangePoint",
    "PosTimeSeries",
    "RatioSeries",
    "WordPartition",
    "detect_all",
    "detect_change_point",
    "frequency_filter",
    "load_counts",
    "normalize_zscore",
    "noun_ratio",
    "scan_change_point",
    "split_by_change_point",
    "temporal_precision",
    "zseries_frame",
]
