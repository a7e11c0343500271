"""Non-learning controls evaluated through the same surface as trained models."""

import logging
from collections import Counter
from typing import Dict, Optional, Sequence

import numpy as np

from src.data.records import Dataset, Interpretation, Utterance
from src.data.relations import RELATION_ORDER, RelationType
from src.errors import ContractError
from src.inference.ranking import RankedList, RankingMixin

logger = logging.getLogger(__name__)


def _normalized(counts: Dict[str, float], tokens: Sequence[str]) -> np.ndarray:
    values = np.array([counts.get(t, 0.0) for t in tokens], dtype=np.float64)
    total = values.sum()
    if total <= 0:
        return np.full(len(tokens), 1.0 / len(tokens))
    return values / total


class FrequencyBaseline(RankingMixin):
    """Ranks by raw training-set counts; the same ranking for every query.

    Verb counts sum gold votes, relation counts sum votes per relation, and
    denominal counts tally how often each noun appears as D in X_s and X_u.
    """

    name = "frequency"

    def __init__(self, dataset: Dataset, verbs: Optional[Sequence[str]] = None,
                 denominals: Optional[Sequence[str]] = None):
        if not dataset.supervised:
            raise ContractError("the frequency baseline needs supervised training data")
        verb_counts: Counter = Counter()
        relation_counts: Counter = Counter()
        for example in dataset.supervised:
            for interp, votes in example.gold:
                verb_counts[interp.verb] += votes
                relation_counts[interp.relation.value] += votes
        denominal_counts = Counter(u.denominal for u in dataset.utterances())
        self.verbs = tuple(verbs) if verbs is not None else tuple(sorted(verb_counts))
        self.denominals = tuple(denominals) if denominals is not None else tuple(sorted(denominal_counts))
        self._verb = _normalized(verb_counts, self.verbs)
        self._relation = _normalized(relation_counts, [r.value for r in RELATION_ORDER])
        self._denominal = _normalized(denominal_counts, self.denominals)
        logger.info(f"Frequency baseline over {len(self.verbs)} verbs and {len(self.denominals)} denominals")

    def verb_distribution(self, utterance: Utterance) -> np.ndarray:
        return self._verb.copy()

    def relation_distribution(self, utterance: Utterance) -> np.ndarray:
        return self._relation.copy()

    def denominal_distribution(self, interpretation: Interpretation) -> np.ndarray:
        return self._denominal.copy()


class RandomBaseline(RankingMixin):
    """Uniform distributions; rankings are fresh seeded permutations."""

    name = "random"

    def __init__(self, verbs: Sequence[str], denominals: Sequence[str], seed: int = 0):
        if not verbs or not denominals:
            raise ContractError("the random baseline needs non-empty candidate lists")
        self.verbs = tuple(verbs)
        self.denominals = tuple(denominals)
        self.rng = np.random.default_rng(seed)

    def verb_distribution(self, utterance: Utterance) -> np.ndarray:
        return np.full(len(self.verbs), 1.0 / len(self.verbs))

    def relation_distribution(self, utterance: Utterance) -> np.ndarray:
        return np.full(len(RELATION_ORDER), 1.0 / len(RELATION_ORDER))

    def denominal_distribution(self, interpretation: Interpretation) -> np.ndarray:
        return np.full(len(self.denominals), 1.0 / len(self.denominals))

    def _permuted(self, items: Sequence) -> RankedList:
        order = self.rng.permutation(len(items))
        n = len(items)
        return RankedList(tuple(items[i] for i in order), tuple((n - rank) / n for rank in range(n)))

    def rank_verbs(self, utterance: Utterance) -> RankedList[str]:
        return self._permuted(self.verbs)

    def rank_relations(self, utterance: Utterance) -> RankedList[RelationType]:
        return self._permuted(RELATION_ORDER)

    def rank_denominals(self, interpretation: Interpretation) -> RankedList[str]:
        return self._permuted(self.denominals)


class FrequencyUsageBaseline:
    """Temporal control: the m most frequent training utterances containing D."""

    name = "frequency-usage"

    def __init__(self, dataset: Dataset):
        counts: Counter = Counter()
        for example in dataset.supervised:
            counts[example.utterance] += sum(votes for _, votes in example.gold)
        for utterance in dataset.unsupervised:
            counts[utterance] += 1
        self._counts = counts

    def predict(self, denominal: str, m: int) -> RankedList[Utterance]:
        """The ``m`` most voted training utterances of ``denominal``; empty for an unseen word.

        Raises:
            ContractError: ``m`` below 1.
        """
        if m < 1:
            raise ContractError(f"m must be at least 1, got {m}")
        items = [u for u in self._counts if u.denominal == denominal]
        if not items:
            return RankedList((), ())
        return RankedList.from_scores(items, [self._counts[u] for u in items]).top(m)
