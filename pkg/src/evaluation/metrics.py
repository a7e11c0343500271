"""Top-k accuracy, ROC curves over k, and KL divergence."""

from dataclasses import asdict, dataclass
from typing import Collection, Dict, Mapping, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src.data.records import AnnotationDistribution
from src.errors import ContractError, NumericalError
from src.inference.ranking import RankedList


@dataclass(frozen=True)
class MetricReport:
    metric: str
    value: float
    standard_error: float
    sample_size: int
    group: str = "all"

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise NumericalError(f"metric {self.metric} is not finite")
        if self.sample_size <= 0:
            raise ContractError(f"metric {self.metric} has no samples")

    def as_dict(self) -> Dict[str, object]:
        return asdict(self)


def mean_and_se(values: Sequence[float]) -> Tuple[float, float]:
    """Sample mean with its standard error (0 for a single value)."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ContractError("cannot average an empty sample")
    if values.size == 1:
        return float(values[0]), 0.0
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(values.size))


def summarize(metric: str, values: Sequence[float], group: str = "all") -> MetricReport:
    """Report the mean and standard error of ``values`` under ``metric`` and ``group``."""
    mean, se = mean_and_se(values)
    return MetricReport(metric, mean, se, len(values), group)


def reports_frame(reports: Sequence[MetricReport]) -> pd.DataFrame:
    return pd.DataFrame([r.as_dict() for r in reports],
                        columns=["metric", "value", "standard_error", "sample_size", "group"])


def _items(predictions: Union[RankedList, Sequence]) -> Sequence:
    return predictions.items if isinstance(predictions, RankedList) else predictions


def topk_hit(predictions: Union[RankedList, Sequence], gold: Collection, k: int) -> int:
    """1 when any of the first ``k`` predictions is gold."""
    if k < 1:
        raise ContractError(f"k must be at least 1, got {k}")
    if not gold:
        raise ContractError("gold set is empty")
    return int(any(item in gold for item in _items(predictions)[:k]))


def topk_accuracy(predictions: Sequence[Union[RankedList, Sequence]], golds: Sequence[Collection], k: int,
                  metric: str = "top_k_accuracy") -> MetricReport:
    """Share of examples with a gold item among the first ``k`` predictions.

    Args:
        predictions: One ranking per example.
        golds: One gold set per example, aligned with ``predictions``.
        k: Cut-off, at least 1.
        metric: Report name; ``@{k}`` is appended.

    Raises:
        ContractError: misaligned inputs, an empty gold set or k below 1.
    """
    if len(predictions) != len(golds):
        raise ContractError("predictions and golds differ in length")
    return summarize(f"{metric}@{k}", [topk_hit(p, g, k) for p, g in zip(predictions, golds)])


@dataclass(frozen=True)
class RocCurve:
    """Cumulative top-k accuracy for k = 1..k_max and its normalized area."""

    points: Tuple[Tuple[int, float], ...]
    auc: float

    def to_frame(self, label: str = "") -> pd.DataFrame:
        k_max = len(self.points)
        frame = pd.DataFrame(self.points, columns=["k", "accuracy"])
        frame.insert(1, "fraction", frame["k"] / k_max)
        if label:
            frame.insert(0, "task", label)
        return frame


def roc_auc(predictions: Sequence[Union[RankedList, Sequence]], golds: Sequence[Collection],
            k_max: int) -> RocCurve:
    """Accuracy at each k, area under (k/k_max, accuracy) rescaled to [0, 1].

    The area spans x from 1/k_max to 1; with k_max = 1 the AUC is the top-1 accuracy.
    """
    if k_max < 1:
        raise ContractError(f"k_max must be at least 1, got {k_max}")
    if not predictions:
        raise ContractError("roc_auc needs at least one example")
    accuracies = [float(np.mean([topk_hit(p, g, k) for p, g in zip(predictions, golds)]))
                  for k in range(1, k_max + 1)]
    points = tuple((k, acc) for k, acc in zip(range(1, k_max + 1), accuracies))
    if k_max == 1:
        return RocCurve(points, accuracies[0])
    x = np.arange(1, k_max + 1) / k_max
    y = np.asarray(accuracies)
    area = float(np.sum((x[1:] - x[:-1]) * (y[1:] + y[:-1]) / 2.0))
    return RocCurve(points, area / (1.0 - 1.0 / k_max))


def kl_divergence(p: Union[AnnotationDistribution, Sequence[float]],
                  q: Union[Mapping[str, float], Sequence[float]],
                  epsilon: float = 1e-6, normalize: bool = True) -> float:
    """Natural-log KL(P ‖ Q) over the support of P.

    Q is restricted to P's support, floored at ``epsilon`` and renormalized.
    ``epsilon=0, normalize=False`` evaluates the raw sum with no smoothing; in
    that mode P is not required to sum to one.

    Args:
        p: empirical distribution, or probabilities aligned with ``q``.
        q: token → probability mapping (with an AnnotationDistribution) or aligned probabilities.
    """
    if epsilon < 0:
        raise ContractError("epsilon must be non-negative")
    if isinstance(p, AnnotationDistribution):
        p_values = np.asarray(p.probabilities, dtype=np.float64)
        if isinstance(q, Mapping):
            q_values = np.array([float(q.get(token, 0.0)) for token in p.support])
        else:
            q_values = np.asarray(q, dtype=np.float64)
    else:
        p_values = np.asarray(p, dtype=np.float64)
        q_values = np.asarray(q, dtype=np.float64)
    if p_values.shape != q_values.shape:
        raise ContractError(f"P and Q shapes differ: {p_values.shape} vs {q_values.shape}")
    if p_values.size == 0 or np.any(p_values < 0) or not np.all(np.isfinite(p_values)):
        raise ContractError("P is not a valid distribution")
    if normalize and abs(p_values.sum() - 1.0) > 1e-6:
        raise ContractError(f"P sums to {p_values.sum():.6f}, not 1")
    if np.any(q_values < 0):
        raise ContractError("Q has negative entries")
    support = p_values > 0
    p_s, q_s = p_values[support], q_values[support]
    if epsilon > 0:
        q_s = np.maximum(q_s, epsilon)
    if normalize:
        q_s = q_s / q_s.sum()
    if np.any(q_s == 0):
        raise NumericalError("Q assigns zero mass inside P's support; use epsilon > 0")
    value = float(np.sum(p_s * np.log(p_s / q_s)))
    return max(value, 0.0) if normalize else value


def distribution_over(tokens: Sequence[str], probs: Sequence[float],
                      normalizer=None) -> Dict[str, float]:
    """Token → probability, summing mass of tokens that share a lemma."""
    out: Dict[str, float] = {}
    for token, prob in zip(tokens, probs):
        key = normalizer(token) if normalizer is not None else token
        out[key] = out.get(key, 0.0) + float(prob)
    return out


def normalized_support(dist: AnnotationDistribution, normalizer=None) -> AnnotationDistribution:
    if normalizer is None:
        return dist
    return AnnotationDistribution.from_counts(distribution_over(dist.support, dist.probabilities, normalizer))


def lemma_set(tokens: Collection[str], normalizer=None) -> set:
    return {normalizer(t) for t in tokens} if normalizer is not None else set(tokens)

