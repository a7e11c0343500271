"""Utterances, interpretations, supervised examples and datasets."""

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.data.relations import RelationType
from src.errors import ContractError

SOURCE_TAGS = ("adult", "child", "corpus", "historical")


@dataclass(frozen=True, order=True)
class Utterance:
    """A denominal verb D with its single-word context C."""

    denominal: str
    context: str

    def __post_init__(self):
        if not self.denominal or not self.context:
            raise ContractError("utterance tokens must be non-empty")

    def __str__(self) -> str:
        return f"{self.denominal} the {self.context}"


@dataclass(frozen=True)
class Interpretation:
    """A paraphrase verb V with a relation type R."""

    verb: str
    relation: RelationType

    def __post_init__(self):
        if not self.verb:
            raise ContractError("paraphrase verb must be non-empty")

    @property
    def sort_key(self) -> Tuple[str, str]:
        return (self.verb, self.relation.value)

    def __lt__(self, other: "Interpretation") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return f"{self.verb}/{self.relation.value}"


@dataclass(frozen=True)
class SupervisedExample:
    utterance: Utterance
    gold: Tuple[Tuple[Interpretation, int], ...]
    source: str = "corpus"
    decade: Optional[int] = None
    language: str = "en"

    def __post_init__(self):
        if not self.gold:
            raise ContractError(f"{self.utterance}: at least one gold interpretation is required")
        if any(votes < 0 for _, votes in self.gold):
            raise ContractError(f"{self.utterance}: vote counts must be non-negative")
        if sum(votes for _, votes in self.gold) == 0:
            raise ContractError(f"{self.utterance}: vote counts are all zero")
        if self.source not in SOURCE_TAGS:
            raise ContractError(f"unknown source tag '{self.source}'")

    @property
    def relation(self) -> RelationType:
        return self.gold[0][0].relation

    @property
    def gold_verbs(self) -> List[str]:
        return [interp.verb for interp, votes in self.gold if votes > 0]

    def top_gold(self) -> Interpretation:
        """Highest-vote gold interpretation; ties broken lexicographically."""
        return min(self.gold, key=lambda pair: (-pair[1], pair[0].sort_key))[0]

    def tags(self) -> Dict[str, str]:
        return {
            "source": self.source,
            "language": self.language,
            "decade": "" if self.decade is None else str(self.decade),
        }


@dataclass(frozen=True)
class Dataset:
    """Supervised set X_s and unsupervised set X_u."""

    supervised: Tuple[SupervisedExample, ...] = ()
    unsupervised: Tuple[Utterance, ...] = ()
    language: str = "en"

    def __post_init__(self):
        object.__setattr__(self, "supervised", tuple(self.supervised))
        object.__setattr__(self, "unsupervised", tuple(self.unsupervised))
        for name, pairs in (("supervised", [e.utterance for e in self.supervised]),
                            ("unsupervised", list(self.unsupervised))):
            duplicates = [u for u, n in Counter(pairs).items() if n > 1]
            if duplicates:
                raise ContractError(f"duplicate (D,C) pairs in {name} split: {duplicates[:3]}")

    def __len__(self) -> int:
        return len(self.supervised)

    def merge(self, other: "Dataset") -> "Dataset":
        return Dataset(self.supervised + other.supervised, self.unsupervised + other.unsupervised,
                       language=self.language)

    def without_denominals(self, tokens: Iterable[str]) -> "Dataset":
        """Drop every record whose denominal verb is one of ``tokens``."""
        banned = set(tokens)
        return Dataset(
            tuple(e for e in self.supervised if e.utterance.denominal not in banned),
            tuple(u for u in self.unsupervised if u.denominal not in banned),
            language=self.language,
        )

    def excluding_verbs(self, tokens: Iterable[str]) -> "Dataset":
        """Remove every trace of target denominal verbs from the training records.

        Records whose denominal is a target are dropped, gold interpretations
        paraphrasing with a target verb are removed, and supervised examples
        left without any voted gold are dropped too.

        Args:
            tokens: Target denominal verbs.

        Returns:
            A new dataset; ``self`` is unchanged.
        """
        banned = set(tokens)
        if not banned:
            return self
        kept = self.without_denominals(banned)
        supervised = []
        for example in kept.supervised:
            gold = tuple((interp, votes) for interp, votes in example.gold if interp.verb not in banned)
            if sum(votes for _, votes in gold) > 0:
                supervised.append(replace(example, gold=gold))
        return Dataset(tuple(supervised), kept.unsupervised, language=self.language)

    def utterances(self) -> List[Utterance]:
        return [e.utterance for e in self.supervised] + list(self.unsupervised)


@dataclass(frozen=True)
class AnnotationDistribution:
    """Empirical distribution over unique support tokens."""

    support: Tuple[str, ...]
    probabilities: Tuple[float, ...] = field(default=())

    def __post_init__(self):
        if len(self.support) != len(self.probabilities) or not self.support:
            raise ContractError("support and probabilities must be non-empty and aligned")
        if len(set(self.support)) != len(self.support):
            raise ContractError("support entries must be unique")
        probs = np.asarray(self.probabilities, dtype=np.float64)
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-9:
            raise ContractError("probabilities must be non-negative and sum to 1")

    def as_dict(self) -> Dict[str, float]:
        return dict(zip(self.support, self.probabilities))

    @classmethod
    def from_counts(cls, counts: Dict[str, float]) -> "AnnotationDistribution":
        total = float(sum(counts.values()))
        if total <= 0:
            raise ContractError("counts must have a positive total")
        support = tuple(sorted(k for k, v in counts.items() if v > 0))
        return cls(support, tuple(counts[k] / total for k in support))


def empirical_distribution(example: SupervisedExample) -> AnnotationDistribution:
    """Votes for each verb divided by total votes, over voted verbs."""
    counts: Dict[str, float] = {}
    for interp, votes in example.gold:
        counts[interp.verb] = counts.get(interp.verb, 0) + votes
    if sum(counts.values()) == 0:
        raise ContractError(f"{example.utterance}: all-zero votes")
    return AnnotationDistribution.from_counts(counts)


def group_by_interpretation(
    examples: Union[Dataset, Sequence[SupervisedExample]],
) -> Dict[Interpretation, List[Utterance]]:
    """Utterances sharing a gold (V, R), keyed in sorted interpretation order."""
    if isinstance(examples, Dataset):
        examples = examples.supervised
    groups: Dict[Interpretation, List[Utterance]] = {}
    for example in examples:
        for interp, votes in example.gold:
            if votes > 0:
                groups.setdefault(interp, []).append(example.utterance)
    return {k: groups[k] for k in sorted(groups)}
