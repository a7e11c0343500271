"""Metrics, baselines and evaluation protocols."""

from src.evaluation.baselines import FrequencyBaseline, FrequencyUsageBaseline, RandomBaseline
from src.evaluation.metrics import (
    MetricReport,
    RocCurve,
    kl_divergence,
    mean_and_se,
    reports_frame,
    roc_auc,
    topk_accuracy,
    topk_hit,
)
from src.evaluation.protocols import (
    EvaluationBundle,
    ExampleScore,
    decade_precision,
    evaluate_model,
    grouped_report,
    subset_kl_protocol,
)

__all__ = [
    "EvaluationBundle",
    "ExampleScore",
    "FrequencyBaseline",
    "FrequencyUsageBaseline",
    "MetricReport",
    "RandomBaseline",
    "RocCurve",
    "decade_precision",
    "evaluate_model",
    "grouped_report",
    "kl_divergence",
    "mean_and_se",
    "reports_frame",
    "roc_auc",
    "subset_kl_protocol",
    "topk_accuracy",
    "topk_hit",
]
