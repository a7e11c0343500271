"""Evaluation protocols built on the metrics: per-model bundles, subset KL,
decade precision and grouped breakdowns."""

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.config import EvaluationConfig
from src.data.records import AnnotationDistribution, Dataset, Utterance, empirical_distribution, group_by_interpretation
from src.errors import ContractError
from src.evaluation.metrics import (
    MetricReport,
    RocCurve,
    distribution_over,
    kl_divergence,
    lemma_set,
    mean_and_se,
    normalized_support,
    reports_frame,
    roc_auc,
    summarize,
    topk_hit,
)

logger = logging.getLogger(__name__)

LAST_EVALUATED_DECADE = 1980
CRITERIA = ("next-decade", "any-future")


@dataclass(frozen=True)
class ExampleScore:
    """One example's value for one metric, with tags for grouped breakdowns."""

    value: float
    tags: Mapping[str, str]


@dataclass
class EvaluationBundle:
    reports: List[MetricReport] = field(default_factory=list)
    rocs: Dict[str, RocCurve] = field(default_factory=dict)
    scores: Dict[str, List[ExampleScore]] = field(default_factory=dict)

    def metric(self, name: str) -> MetricReport:
        for report in self.reports:
            if report.metric == name:
                return report
        raise KeyError(name)

    def reports_frame(self) -> pd.DataFrame:
        return reports_frame(self.reports)

    def roc_frame(self) -> pd.DataFrame:
        frames = [curve.to_frame(task) for task, curve in sorted(self.rocs.items())]
        if not frames:
            return pd.DataFrame(columns=["task", "k", "fraction", "accuracy"])
        return pd.concat(frames, ignore_index=True)


def _example_kl(scorer, example, epsilon: float, normalizer) -> float:
    p = normalized_support(empirical_distribution(example), normalizer)
    q = distribution_over(scorer.verbs, scorer.verb_distribution(example.utterance), normalizer)
    return kl_divergence(p, q, epsilon=epsilon)


def _record(bundle: EvaluationBundle, metric: str, values: List[float], tags: List[Mapping[str, str]]) -> None:
    bundle.reports.append(summarize(metric, values))
    bundle.scores[metric] = [ExampleScore(v, t) for v, t in zip(values, tags)]


def _task_metrics(bundle: EvaluationBundle, task: str, rankings: List[List[str]], golds: List[set],
                  kls: List[float], tags: List[Mapping[str, str]], k_max: int) -> None:
    for k in range(1, k_max + 1):
        _record(bundle, f"{task}_top{k}", [topk_hit(r, g, k) for r, g in zip(rankings, golds)], tags)
    curve = roc_auc(rankings, golds, k_max)
    bundle.rocs[task] = curve
    bundle.reports.append(MetricReport(f"{task}_auc", curve.auc, 0.0, len(rankings)))
    _record(bundle, f"{task}_kl", kls, tags)


def evaluate_model(scorer, test: Dataset, config: Optional[EvaluationConfig] = None,
                   normalizer=None) -> EvaluationBundle:
    """Comprehension and production metrics of ``scorer`` on held-out ``test``.

    ``scorer`` is a trained model or a baseline: anything exposing ``verbs``,
    ``denominals``, the three distribution methods and the ``rank_*`` methods.
    Gold verbs and predictions are compared after ``normalizer`` (a lemma map).

    Args:
        scorer: Model or baseline to score.
        test: Held-out records; only X_s is used.
        config: Top-k range and KL smoothing; defaults when ``None``.
        normalizer: Optional token → lemma callable.

    Returns:
        Comprehension, relation and production reports with per-example scores.
        Production is omitted when no gold verb is a candidate.

    Raises:
        ContractError: ``test`` has no supervised examples.
    """
    config = config or EvaluationConfig()
    bundle = EvaluationBundle()
    if not test.supervised:
        raise ContractError("evaluation needs supervised test examples")

    rankings, golds, kls, tags, relation_hits = [], [], [], [], []
    for example in test.supervised:
        ranking = scorer.rank_verbs(example.utterance)
        rankings.append([normalizer(v) if normalizer else v for v in ranking.items])
        golds.append(lemma_set(example.gold_verbs, normalizer))
        kls.append(_example_kl(scorer, example, config.kl_epsilon, normalizer))
        tags.append(example.tags())
        relation_hits.append(int(scorer.rank_relations(example.utterance).items[0] == example.relation))
    _task_metrics(bundle, "comprehension", rankings, golds, kls, tags, config.k_max)
    _record(bundle, "relation_accuracy", relation_hits, tags)

    known_verbs = set(scorer.verbs)
    rankings, golds, kls, tags = [], [], [], []
    for interp, utterances in group_by_interpretation(test).items():
        if interp.verb not in known_verbs:
            logger.warning(f"Skipping production for {interp}: verb is not a candidate")
            continue
        counts = Counter(u.denominal for u in utterances)
        ranking = scorer.rank_denominals(interp)
        rankings.append(list(ranking.items))
        golds.append(set(counts))
        q = dict(zip(scorer.denominals, scorer.denominal_distribution(interp)))
        kls.append(kl_divergence(AnnotationDistribution.from_counts(counts), q, epsilon=config.kl_epsilon))
        tags.append({"relation": interp.relation.value, "verb": interp.verb})
    if rankings:
        _task_metrics(bundle, "production", rankings, golds, kls, tags, config.k_max)
    logger.info(f"Evaluated {getattr(scorer, 'name', type(scorer).__name__)} on {len(test.supervised)} examples: "
                f"comprehension top-1 {bundle.metric('comprehension_top1').value:.3f}")
    return bundle


def subset_kl_protocol(dataset: Dataset, scorer, subset_size: int = 55, n_subsets: int = 100, seed: int = 0,
                       epsilon: float = 1e-6, normalizer=None) -> MetricReport:
    """Mean comprehension KL over seeded random subsets drawn without replacement.

    Returns:
        The mean of the subset means, with their standard error and ``n_subsets`` as n.

    Raises:
        ContractError: ``subset_size`` outside [1, |X_s|] or a non-positive ``n_subsets``.
    """
    n = len(dataset.supervised)
    if subset_size < 1 or subset_size > n:
        raise ContractError(f"subset size {subset_size} outside [1, {n}]")
    if n_subsets < 1:
        raise ContractError("n_subsets must be positive")
    per_example = np.array([_example_kl(scorer, e, epsilon, normalizer) for e in dataset.supervised])
    rng = np.random.default_rng(seed)
    means = [float(per_example[rng.choice(n, size=subset_size, replace=False)].mean()) for _ in range(n_subsets)]
    mean, se = mean_and_se(means)
    return MetricReport("subset_kl", mean, se, n_subsets)


def decade_precision(predictions: Mapping[str, Sequence[Utterance]],
                     gold: Mapping[str, Sequence[Tuple[Utterance, Optional[int]]]],
                     reference_decades: Mapping[str, int], criterion: str = "next-decade",
                     last_decade: int = LAST_EVALUATED_DECADE,
                     group_decades: Optional[Mapping[str, int]] = None) -> List[MetricReport]:
    """Mean precision of each word's top-m predicted usages, grouped by decade.

    Args:
        predictions: Word → predicted utterances, m of them.
        gold: Word → decade-stamped gold usages.
        reference_decades: Word → t, the last decade the model was trained on.
        criterion: ``next-decade`` accepts gold usages from t + 10 only;
            ``any-future`` accepts every decade after t.
        last_decade: Groups after this decade are skipped.
        group_decades: Word → decade its precision is averaged under.
            Defaults to ``reference_decades``.

    Returns:
        One report per group decade, in decade order.

    Raises:
        ContractError: Unknown criterion, or a gold usage without a decade stamp.
    """
    if criterion not in CRITERIA:
        raise ContractError(f"criterion must be one of {CRITERIA}")
    group_decades = reference_decades if group_decades is None else group_decades
    by_decade: Dict[int, List[float]] = defaultdict(list)
    for word, predicted in predictions.items():
        if word not in reference_decades:
            continue
        t = reference_decades[word]
        group = group_decades.get(word, t)
        if group > last_decade or not predicted:
            continue
        accepted = set()
        for utterance, decade in gold.get(word, ()):
            if decade is None:
                raise ContractError(f"gold usage {utterance} of '{word}' has no decade stamp")
            if (criterion == "next-decade" and decade == t + 10) or (criterion == "any-future" and decade > t):
                accepted.add(utterance)
        hits = sum(1 for u in predicted if u in accepted)
        by_decade[group].append(hits / len(predicted))
    return [summarize(f"precision_{criterion}", values, group=str(decade))
            for decade, values in sorted(by_decade.items())]


def grouped_report(scores: Sequence[ExampleScore], metric: str, key: str) -> List[MetricReport]:
    """Per-group mean and standard error of ``scores`` keyed by ``tags[key]``.

    Raises:
        ContractError: a score lacks ``key`` in its tags.
    """
    groups: Dict[str, List[float]] = defaultdict(list)
    for score in scores:
        if key not in score.tags:
            raise ContractError(f"example lacks the group key '{key}'")
        groups[score.tags[key]].append(score.value)
    return [summarize(metric, values, group=group) for group, values in sorted(groups.items())]
