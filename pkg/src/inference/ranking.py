"""Ranked prediction lists and the ranking surface shared by models and baselines."""

from dataclasses import dataclass
from typing import Any, Generic, Iterator, List, Sequence, Tuple, TypeVar

import numpy as np
import pandas as pd

from src.data.records import Interpretation, Utterance
from src.data.relations import RELATION_ORDER, RelationType
from src.errors import ContractError

T = TypeVar("T")


def sort_key(item: Any) -> Tuple:
    if isinstance(item, Interpretation):
        return item.sort_key
    if isinstance(item, Utterance):
        return (item.denominal, item.context)
    if isinstance(item, RelationType):
        return (item.value,)
    return (str(item),)


@dataclass(frozen=True)
class RankedList(Generic[T]):
    """(item, score) pairs, scores descending, ties broken lexicographically."""

    items: Tuple[T, ...]
    scores: Tuple[float, ...]

    @classmethod
    def from_scores(cls, items: Sequence[T], scores: Sequence[float]) -> "RankedList[T]":
        scores = [float(s) for s in scores]
        if len(items) != len(scores):
            raise ContractError(f"{len(items)} items but {len(scores)} scores")
        order = sorted(range(len(items)), key=lambda i: (-scores[i], sort_key(items[i])))
        return cls(tuple(items[i] for i in order), tuple(scores[i] for i in order))

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[Tuple[T, float]]:
        return iter(zip(self.items, self.scores))

    def top(self, k: int) -> "RankedList[T]":
        if k < 1:
            raise ContractError(f"k must be at least 1, got {k}")
        return RankedList(self.items[:k], self.scores[:k])

    def rescaled(self, factor: float) -> "RankedList[T]":
        if factor <= 0:
            raise ContractError("rescaling factor must be positive")
        return RankedList(self.items, tuple(s * factor for s in self.scores))

    def rank_of(self, item: T) -> int:
        """1-based rank, or 0 when absent."""
        try:
            return self.items.index(item) + 1
        except ValueError:
            return 0

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "rank": np.arange(1, len(self.items) + 1),
            "item": [str(i) for i in self.items],
            "score": list(self.scores),
        })


class RankingMixin:
    """Rankings derived from ``verb_distribution``-style methods.

    Implementers provide ``verbs``, ``denominals`` and the three distribution
    methods; baselines that rank differently override the ``rank_*`` methods.
    """

    verbs: Sequence[str]
    denominals: Sequence[str]

    def rank_verbs(self, utterance: Utterance) -> RankedList[str]:
        return RankedList.from_scores(list(self.verbs), self.verb_distribution(utterance))

    def rank_relations(self, utterance: Utterance) -> RankedList[RelationType]:
        return RankedList.from_scores(list(RELATION_ORDER), self.relation_distribution(utterance))

    def rank_denominals(self, interpretation: Interpretation) -> RankedList[str]:
        return RankedList.from_scores(list(self.denominals), self.denominal_distribution(interpretation))


def merge_rankings(rankings: Sequence[RankedList[T]], limit: int) -> RankedList[T]:
    """Union of rankings keeping each item's maximum score, truncated to ``limit``."""
    best: dict = {}
    for ranking in rankings:
        for item, score in ranking:
            if item not in best or score > best[item]:
                best[item] = score
    items: List[T] = list(best)
    merged = RankedList.from_scores(items, [best[i] for i in items])
    return merged.top(limit) if merged.items else merged
