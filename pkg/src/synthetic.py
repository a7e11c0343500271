"""Seeded synthetic data: embeddings, labelled benchmarks, a known speaker and
POS ratio series with and without a change point."""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.data.records import Dataset, Interpretation, SupervisedExample, Utterance
from src.data.relations import RELATION_ORDER, RelationType
from src.diachronic.series import PosTimeSeries
from src.lexicon.embeddings import EmbeddingTable
from src.models.heads import HeadSpec, Priors

logger = logging.getLogger(__name__)


def random_embeddings(tokens: Iterable[str], dim: int = 16, seed: int = 0) -> EmbeddingTable:
    """Gaussian vectors for ``tokens`` plus every relation's head word."""
    vocabulary = list(dict.fromkeys(list(tokens) + [r.head_word for r in RELATION_ORDER]))
    rng = np.random.default_rng(seed)
    return EmbeddingTable(vocabulary, rng.normal(0.0, 1.0 / np.sqrt(dim), size=(len(vocabulary), dim)))


def dataset_tokens(dataset: Dataset) -> List[str]:
    tokens: Dict[str, None] = {}
    for utterance in dataset.utterances():
        tokens.setdefault(utterance.denominal, None)
        tokens.setdefault(utterance.context, None)
    for example in dataset.supervised:
        for interp, _ in example.gold:
            tokens.setdefault(interp.verb, None)
    return list(tokens)


def dataset_spec(dataset: Dataset, frames: int = 1) -> HeadSpec:
    """Candidate lists covering every token the dataset uses."""
    denominals = sorted({u.denominal for u in dataset.utterances()})
    contexts = sorted({u.context for u in dataset.utterances()})
    verbs = sorted({i.verb for e in dataset.supervised for i, _ in e.gold})
    return HeadSpec(tuple(denominals), tuple(contexts), tuple(verbs), frames)


def relation_deterministic_dataset(n_denominals: int = 6, n_contexts: int = 16, seed: int = 0) -> Dataset:
    """Every (D, C) pair labelled with a relation fixed by C and a verb fixed by the relation.

    Context ``ctx{i}`` carries relation ``i mod 8``; that relation's verb is
    ``verb{index}``. Pairs are shuffled with ``seed``.
    """
    rng = np.random.default_rng(seed)
    examples = []
    for d in range(n_denominals):
        for c in range(n_contexts):
            relation = RELATION_ORDER[c % len(RELATION_ORDER)]
            interp = Interpretation(f"verb{relation.index}", relation)
            examples.append(SupervisedExample(Utterance(f"noun{d}", f"ctx{c}"), ((interp, 3),)))
    order = rng.permutation(len(examples))
    return Dataset(tuple(examples[i] for i in order), ())


def frame_structured_benchmark(n_denominals: int = 8, contexts_per_cluster: int = 3,
                               relations: Sequence[RelationType] = (RelationType.LOCATUM_ON,
                                                                    RelationType.INSTRUMENT),
                               unsupervised_share: float = 0.3, seed: int = 0) -> Dataset:
    """Two latent frame clusters per relation.

    Each relation owns two context clusters. Utterances in a cluster split
    their votes over that cluster's two verbs (3:1, the major verb chosen by the
    denominal's parity). A ``unsupervised_share`` of the pairs lose their labels.
    """
    rng = np.random.default_rng(seed)
    examples: List[SupervisedExample] = []
    unlabelled: List[Utterance] = []
    for r_pos, relation in enumerate(relations):
        for cluster in range(2):
            verbs = (f"v{r_pos}{cluster}a", f"v{r_pos}{cluster}b")
            for c in range(contexts_per_cluster):
                context = f"c{r_pos}{cluster}{c}"
                for d in range(n_denominals):
                    utterance = Utterance(f"n{d}", context)
                    if rng.random() < unsupervised_share:
                        unlabelled.append(utterance)
                        continue
                    major, minor = verbs if d % 2 == 0 else verbs[::-1]
                    gold = tuple(sorted(((Interpretation(major, relation), 3), (Interpretation(minor, relation), 1)),
                                        key=lambda pair: pair[0].sort_key))
                    examples.append(SupervisedExample(utterance, gold))
    logger.debug(f"Frame benchmark: {len(examples)} labelled, {len(unlabelled)} unlabelled")
    return Dataset(tuple(examples), tuple(unlabelled))


def frame_interaction_benchmark(n_denominals: int = 4, contexts_per_cluster: int = 3,
                                relations: Sequence[RelationType] = (RelationType.LOCATUM_ON,
                                                                     RelationType.INSTRUMENT)) -> Dataset:
    """Two verbs per relation whose preference flips between two context frames.

    Relation ``r`` owns denominals ``n{r}{d}``, verbs ``v{r}a`` / ``v{r}b`` and
    two context clusters. Votes split 3:1, with ``v{r}a`` the major verb when
    the denominal's parity equals the cluster index. Neither the verb nor the
    denominal alone reveals the preference; only the (D, C) pairing does.
    Every pair is labelled.
    """
    examples: List[SupervisedExample] = []
    for r_pos, relation in enumerate(relations):
        verbs = (f"v{r_pos}a", f"v{r_pos}b")
        for cluster in range(2):
            for c in range(contexts_per_cluster):
                for d in range(n_denominals):
                    major, minor = verbs if d % 2 == cluster else verbs[::-1]
                    gold = tuple(sorted(((Interpretation(major, relation), 3), (Interpretation(minor, relation), 1)),
                                        key=lambda pair: pair[0].sort_key))
                    examples.append(SupervisedExample(Utterance(f"n{r_pos}{d}", f"c{r_pos}{cluster}{c}"), gold))
    return Dataset(tuple(examples), ())


@dataclass(frozen=True)
class ToySpeaker:
    """A ground-truth speaker with explicit tables p(D | V, R) and p(C | V, R)."""

    spec: HeadSpec
    relations: Tuple[RelationType, ...]
    verb_prior: np.ndarray
    denominal_table: np.ndarray
    context_table: np.ndarray

    @property
    def interpretations(self) -> List[Interpretation]:
        return [Interpretation(v, r) for v in self.spec.verbs for r in self.relations]

    def priors(self, frames: int = 1) -> Priors:
        relation = np.full(len(RELATION_ORDER), 1.0 / len(RELATION_ORDER))
        return Priors(self.verb_prior, relation, np.full(frames, 1.0 / frames))

    def sample(self, n: int, seed: int = 0) -> List[Utterance]:
        """``n`` distinct utterances drawn from the speaker."""
        rng = np.random.default_rng(seed)
        seen: Dict[Utterance, None] = {}
        for _ in range(1000 * n):
            if len(seen) == n:
                break
            v = rng.choice(len(self.spec.verbs), p=self.verb_prior)
            r = rng.integers(len(self.relations))
            cell = v * len(self.relations) + r
            d = rng.choice(len(self.spec.denominals), p=self.denominal_table[cell])
            c = rng.choice(len(self.spec.contexts), p=self.context_table[cell])
            seen.setdefault(Utterance(self.spec.denominals[d], self.spec.contexts[c]), None)
        return list(seen)


def toy_speaker(n_verbs: int = 3, n_denominals: int = 4, n_contexts: int = 4,
                relations: Sequence[RelationType] = (RelationType.LOCATUM_ON, RelationType.INSTRUMENT),
                frames: int = 1, seed: int = 0) -> ToySpeaker:
    """Sharp Dirichlet tables so that utterances identify their interpretation."""
    rng = np.random.default_rng(seed)
    spec = HeadSpec(tuple(f"d{i}" for i in range(n_denominals)), tuple(f"c{i}" for i in range(n_contexts)),
                    tuple(f"v{i}" for i in range(n_verbs)), frames)
    cells = n_verbs * len(relations)
    return ToySpeaker(
        spec,
        tuple(relations),
        np.full(n_verbs, 1.0 / n_verbs),
        rng.dirichlet(np.full(n_denominals, 0.3), size=cells),
        rng.dirichlet(np.full(n_contexts, 0.3), size=cells),
    )


def toy_speaker_dataset(n_utterances: int = 8, seed: int = 0) -> Tuple[ToySpeaker, Dataset]:
    speaker = toy_speaker(seed=seed)
    return speaker, Dataset((), tuple(speaker.sample(n_utterances, seed)))


def step_series(word: str = "step", n_years: int = 100, change_at: int = 50, before: float = 0.9,
                after: float = 0.4, per_year: int = 500, start_year: int = 1800,
                seed: Optional[int] = 0) -> PosTimeSeries:
    """Binomial noun counts whose ratio jumps from ``before`` to ``after`` at index ``change_at``."""
    rng = np.random.default_rng(seed)
    ratio = np.where(np.arange(n_years) < change_at, before, after)
    nouns = rng.binomial(per_year, ratio)
    return PosTimeSeries(word, np.arange(start_year, start_year + n_years), nouns, per_year - nouns)


def constant_series(word: str = "flat", n_years: int = 100, ratio: float = 0.7, per_year: int = 500,
                    start_year: int = 1800, seed: Optional[int] = 0) -> PosTimeSeries:
    return step_series(word, n_years, n_years, ratio, ratio, per_year, start_year, seed)
