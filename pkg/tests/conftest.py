"""Shared fixtures: tiny seeded models over a handful of tokens."""

import numpy as np
import pytest

from src.config import ModelConfig
from src.data.records import Dataset, Interpretation, SupervisedExample, Utterance
from src.data.relations import RelationType
from src.models.heads import HeadSpec
from src.models.kinds import build_model
from src.synthetic import random_embeddings

TOY_DENOMINALS = ("d0", "d1", "d2", "d3")
TOY_CONTEXTS = ("c0", "c1", "c2", "c3")
TOY_VERBS = ("v0", "v1", "v2")


@pytest.fixture
def toy_embeddings():
    return random_embeddings(TOY_DENOMINALS + TOY_CONTEXTS + TOY_VERBS, dim=6, seed=3)


@pytest.fixture
def make_model(toy_embeddings):
    """Factory for small models over the toy vocabulary."""

    def factory(kind="full", frames=2, seed=0, hidden=8, priors=None):
        spec = HeadSpec(TOY_DENOMINALS, TOY_CONTEXTS, TOY_VERBS, frames)
        config = ModelConfig(hidden_size=hidden, frames=frames, embedding_dim=toy_embeddings.dim, init_seed=seed)
        return build_model(kind, spec, toy_embeddings, config=config, priors=priors)

    return factory


def zero_parameters(model) -> None:
    for param in model.params:
        param.tensor.values = np.zeros_like(param.values)


@pytest.fixture
def toy_dataset():
    on, instrument = RelationType.LOCATUM_ON, RelationType.INSTRUMENT
    supervised = (
        SupervisedExample(Utterance("d0", "c0"), ((Interpretation("v0", on), 3), (Interpretation("v1", on), 1))),
        SupervisedExample(Utterance("d1", "c1"), ((Interpretation("v1", instrument), 2),)),
        SupervisedExample(Utterance("d2", "c2"), ((Interpretation("v2", on), 4),), source="child"),
        SupervisedExample(Utterance("d3", "c3"), ((Interpretation("v0", instrument), 1),), source="adult"),
    )
    unsupervised = (Utterance("d0", "c1"), Utterance("d2", "c3"), Utterance("d3", "c0"))
    return Dataset(supervised, unsupervised)
