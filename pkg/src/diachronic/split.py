"""Partitioning historical records around each word's change point, and the
temporal prediction protocol that runs on those partitions."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from src.data.records import Dataset, Interpretation, SupervisedExample, Utterance
from src.diachronic.changepoint import ChangePoint
from src.errors import ContractError
from src.evaluation.baselines import FrequencyUsageBaseline
from src.evaluation.metrics import MetricReport
from src.evaluation.protocols import decade_precision
from src.inference.tasks import FrameSampleConfig, predict_future_usage

logger = logging.getLogger(__name__)

DECADE_SPAN = 10


@dataclass
class WordPartition:
    """Conventional interpretations before t* and novel utterances from t* on."""

    word: str
    decade: int
    pre: List[SupervisedExample] = field(default_factory=list)
    post: List[Tuple[Utterance, int]] = field(default_factory=list)

    @property
    def reference_decade(self) -> int:
        """Last decade on the pre side; future usages are judged relative to it."""
        return self.decade - DECADE_SPAN

    @property
    def interpretations(self) -> List[Interpretation]:
        seen: Dict[Interpretation, None] = {}
        for example in self.pre:
            for interp, votes in example.gold:
                if votes > 0:
                    seen.setdefault(interp, None)
        return sorted(seen)


def split_by_change_point(dataset: Dataset, change_points: Mapping[str, ChangePoint]) -> Dict[str, WordPartition]:
    """Per-word partition keyed by the change-point decade.

    Records in decades ≥ decade(t*) are post-side gold; earlier ones are
    pre-side interpretations. Words without a change point or with an empty
    post side are left out.

    Args:
        dataset: Decade-stamped historical records.
        change_points: Detected change point per denominal.

    Returns:
        Partitions sorted by word.

    Raises:
        ContractError: a record carries no decade stamp.
    """
    partitions: Dict[str, WordPartition] = {}
    skipped = set()
    for example in dataset.supervised:
        word = example.utterance.denominal
        if example.decade is None:
            raise ContractError(f"record {example.utterance} has no decade stamp")
        point = change_points.get(word)
        if point is None:
            if word not in skipped:
                logger.warning(f"{word}: no change point, skipping")
                skipped.add(word)
            continue
        partition = partitions.setdefault(word, WordPartition(word, point.decade))
        if example.decade >= point.decade:
            partition.post.append((example.utterance, example.decade))
        else:
            partition.pre.append(example)
    return {w: p for w, p in sorted(partitions.items()) if p.post}


def pre_change_dataset(partitions: Mapping[str, WordPartition], language: str = "en") -> Dataset:
    """Training data restricted to each word's conventional usages."""
    examples = [e for p in partitions.values() for e in p.pre]
    return Dataset(tuple(examples), (), language=language)


def temporal_predictions(model, partitions: Mapping[str, WordPartition],
                         frames: Optional[FrameSampleConfig] = None,
                         candidates: Optional[Sequence[Utterance]] = None) -> Dict[str, List[Utterance]]:
    """Top-m future usages per word with m = number of post-side gold usages.

    Args:
        model: Trained on the pre-change records.
        partitions: Output of ``split_by_change_point``.
        frames: Frame marginalization for the production scores.
        candidates: Utterances to rank; all (D, C) over the heads when ``None``.

    Returns:
        Predictions per word. Words whose conventional verbs are all unknown
        to the model are skipped with a warning.
    """
    known = set(model.spec.verbs)
    out: Dict[str, List[Utterance]] = {}
    for word, partition in partitions.items():
        interpretations = [i for i in partition.interpretations if i.verb in known]
        if not interpretations:
            logger.warning(f"{word}: no conventional interpretations usable by the model")
            continue
        ranking = predict_future_usage(model, interpretations, len(partition.post), frames, candidates)
        out[word] = list(ranking.items)
    return out


def baseline_predictions(train: Dataset, partitions: Mapping[str, WordPartition]) -> Dict[str, List[Utterance]]:
    """Top-m usages per word from the frequency baseline fitted on the pre-change records.

    Args:
        train: Pre-change records, usually ``pre_change_dataset(partitions)``.
        partitions: Output of ``split_by_change_point``.

    Returns:
        Predictions per word, shorter than m when the word has fewer past usages.
    """
    baseline = FrequencyUsageBaseline(train)
    return {word: list(baseline.predict(word, len(p.post)).items) for word, p in partitions.items()}


def temporal_precision(predictions: Mapping[str, Sequence[Utterance]], partitions: Mapping[str, WordPartition],
                       criterion: str = "next-decade") -> List[MetricReport]:
    """Decade precision of predicted usages against each word's post-side gold.

    A word's model saw records up to the decade before its change point, so
    gold usages from the change-point decade itself count as next-decade hits.
    Precision is averaged per change-point decade.

    Args:
        predictions: Word → top-m predicted utterances.
        partitions: Output of ``split_by_change_point``.
        criterion: ``next-decade`` or ``any-future``.

    Returns:
        One report per change-point decade.
    """
    gold = {word: p.post for word, p in partitions.items()}
    reference = {word: p.reference_decade for word, p in partitions.items()}
    groups = {word: p.decade for word, p in partitions.items()}
    return decade_precision(predictions, gold, reference, criterion, group_decades=groups)
