"""k-fold cross-validation with a fresh model per fold."""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from src.config import EvaluationConfig, TrainConfig
from src.data.records import Dataset
from src.data.splits import kfold_split
from src.errors import Noun2VerbError
from src.evaluation.metrics import mean_and_se
from src.evaluation.protocols import EvaluationBundle, evaluate_model
from src.models.base import DenominalModel
from src.training.trainer import TrainingReport, train

logger = logging.getLogger(__name__)

ModelFactory = Callable[[int, Dataset], DenominalModel]


@dataclass
class FoldResult:
    fold: int
    train_size: int
    test_size: int
    report: TrainingReport
    evaluation: EvaluationBundle


def remove_leakage(train_set: Dataset, test_set: Dataset) -> Dataset:
    """Drop training supervision sharing a (D,C) pair or a denominal D with the test fold,
    and drop test pairs from X_u.

    Args:
        train_set: Records of the training folds.
        test_set: The held-out fold.

    Returns:
        The filtered training set.
    """
    test_pairs = {e.utterance for e in test_set.supervised}
    test_denominals = {u.denominal for u in test_pairs}
    supervised = tuple(e for e in train_set.supervised
                       if e.utterance not in test_pairs and e.utterance.denominal not in test_denominals)
    unsupervised = tuple(u for u in train_set.unsupervised if u not in test_pairs)
    dropped = len(train_set.supervised) - len(supervised)
    if dropped:
        logger.debug(f"Leakage filter removed {dropped} supervised training examples")
    return Dataset(supervised, unsupervised, language=train_set.language)


def cross_validate(model_factory: ModelFactory, dataset: Dataset, k: int, config: TrainConfig,
                   evaluation: Optional[EvaluationConfig] = None, normalizer=None,
                   exclude_verbs: Iterable[str] = ()) -> List[FoldResult]:
    """Train and evaluate one model per fold.

    Args:
        model_factory: ``model_factory(fold_index, train_dataset)`` builds a fresh model.
        dataset: Records to split; X_u joins every training fold.
        k: Number of folds.
        config: Training settings; ``config.seed`` fixes the fold assignment.
        evaluation: Metric settings for the held-out folds.
        normalizer: Optional lemma map applied before gold matching.
        exclude_verbs: Target denominal verbs removed from every training fold.
            Held-out folds keep their records.

    Returns:
        One result per fold, in fold order.

    Raises:
        Noun2VerbError: Re-raised with the fold index in its message.
    """
    results: List[FoldResult] = []
    for fold, (train_set, test_set) in enumerate(kfold_split(dataset, k, config.seed)):
        train_set = remove_leakage(train_set, test_set).excluding_verbs(exclude_verbs)
        try:
            model = model_factory(fold, train_set)
            report = train(model, train_set, config)
            bundle = evaluate_model(model, test_set, evaluation, normalizer)
        except Noun2VerbError as e:
            raise type(e)(f"fold {fold}: {e}") from e
        logger.info(f"Fold {fold + 1}/{k}: {len(train_set.supervised)} train, {len(test_set.supervised)} test, "
                    f"comprehension top-1 {bundle.metric('comprehension_top1').value:.3f}")
        results.append(FoldResult(fold, len(train_set.supervised), len(test_set.supervised), report, bundle))
    return results


def mean_metrics(results: List[FoldResult]) -> Dict[str, Tuple[float, float]]:
    """Metric name → (mean over folds, standard error over folds).

    A metric missing from some folds, such as production when no test verb is
    a candidate, is averaged over the folds that report it.

    Args:
        results: Output of ``cross_validate``.

    Returns:
        Metrics named as in the first fold; empty when ``results`` is empty.
    """
    names = [r.metric for r in results[0].evaluation.reports] if results else []
    return {name: mean_and_se([r.evaluation.metric(name).value for r in results
                               if any(m.metric == name for m in r.evaluation.reports)])
            for name in names}
