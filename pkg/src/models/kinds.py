"""The three model kinds and a factory keyed by ModelKind."""

from typing import Optional, Sequence, Type, Union

import numpy as np

from src.config import ModelConfig
from src.data.records import Utterance
from src.errors import ContractError
from src.lexicon.embeddings import EmbeddingTable
from src.models.base import DenominalModel
from src.models.heads import HeadSpec, ModelKind, Priors


class DiscriminativeModel(DenominalModel):
    """Listener and speaker trained independently on X_s only; no priors, no frames."""

    kind = ModelKind.DISCRIMINATIVE


class PartialGenerativeModel(DenominalModel):
    """Listener and speaker tied through the ELBO with a prior α over (V, R)."""

    kind = ModelKind.PARTIAL


class FullGenerativeModel(DenominalModel):
    """Adds the latent frame E: a listener head, a speaker input and a prior β."""

    kind = ModelKind.FULL

    def frame_posteriors(self, utterances: Sequence[Utterance]) -> np.ndarray:
        """B × K listener posteriors over frames."""
        logs = self.listener_log_probs(utterances)
        return np.exp(logs["frame"].values)


MODEL_CLASSES = {
    ModelKind.DISCRIMINATIVE: DiscriminativeModel,
    ModelKind.PARTIAL: PartialGenerativeModel,
    ModelKind.FULL: FullGenerativeModel,
}


def model_class(kind: Union[str, ModelKind]) -> Type[DenominalModel]:
    try:
        return MODEL_CLASSES[ModelKind(kind)]
    except ValueError:
        raise ContractError(f"unknown model kind '{kind}'; choose from "
                            f"{[k.value for k in ModelKind]}") from None


def build_model(kind: Union[str, ModelKind], spec: HeadSpec, embeddings: EmbeddingTable,
                config: Optional[ModelConfig] = None, priors: Optional[Priors] = None) -> DenominalModel:
    return model_class(kind)(spec, embeddings, config=config, priors=priors)
