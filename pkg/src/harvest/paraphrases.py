"""Template-based paraphrase-verb mining over a tagged corpus."""

import logging
from collections import Counter
from typing import Iterable, List, Optional, Sequence, Tuple

from src.data.records import Dataset, Interpretation, SupervisedExample, Utterance
from src.data.relations import RELATION_ORDER, RelationType
from src.errors import ContractError
from src.harvest.corpus import TokenizedCorpus
from src.harvest.templates import instantiate_template

logger = logging.getLogger(__name__)


def count_matches(corpus: TokenizedCorpus, utterance: Utterance, relation: RelationType,
                  language: str = "en") -> Counter:
    template = instantiate_template(utterance, relation, language)
    counts: Counter = Counter()
    for sentence in corpus:
        counts.update(template.find_matches(sentence))
    return counts


def harvest_paraphrases(corpus: TokenizedCorpus, utterance: Utterance, relation: RelationType,
                        top_n: int = 3, language: str = "en") -> List[Tuple[str, int]]:
    """Verbs filling the template's verb hole, most frequent first.

    Ties are broken lexicographically. No matches gives an empty list.
    """
    if top_n < 1:
        raise ContractError("top_n must be at least 1")
    counts = count_matches(corpus, utterance, relation, language)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:top_n]


def harvest_dataset(corpus: TokenizedCorpus, utterances: Iterable[Utterance],
                    relations: Optional[Sequence[RelationType]] = None, top_n: int = 3,
                    source: str = "corpus", language: str = "en") -> Dataset:
    """Supervised records for utterances with template matches, the rest unsupervised.

    Each utterance is labelled with the relation whose template matched most
    often (earlier relations win ties); its gold is that relation's top-n verbs
    with their match counts as votes.
    """
    relations = list(relations) if relations else list(RELATION_ORDER)
    supervised: List[SupervisedExample] = []
    unsupervised: List[Utterance] = []
    for utterance in dict.fromkeys(utterances):
        best: List[Tuple[str, int]] = []
        best_relation = None
        for relation in relations:
            ranked = harvest_paraphrases(corpus, utterance, relation, top_n, language)
            if sum(c for _, c in ranked) > sum(c for _, c in best):
                best, best_relation = ranked, relation
        if best_relation is None:
            logger.debug(f"{utterance}: no template matches")
            unsupervised.append(utterance)
            continue
        gold = tuple((Interpretation(verb, best_relation), count) for verb, count in best)
        supervised.append(SupervisedExample(utterance, gold, source=source, language=language))
    logger.info(f"Harvested {len(supervised)} supervised and {len(unsupervised)} unsupervised utterances")
    return Dataset(tuple(supervised), tuple(unsupervised), language=language)
