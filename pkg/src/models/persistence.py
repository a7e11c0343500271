"""Model checkpoints: parameters plus a manifest describing how to rebuild the model."""

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from src.autodiff.checkpoint import load_checkpoint, save_checkpoint
from src.config import ModelConfig
from src.errors import FormatError
from src.lexicon.embeddings import EmbeddingTable
from src.models.base import DenominalModel
from src.models.heads import HeadSpec, Priors
from src.models.kinds import build_model

logger = logging.getLogger(__name__)


def model_manifest(model: DenominalModel) -> Dict[str, Any]:
    return {
        "model_kind": model.kind.value,
        "heads": model.spec.as_dict(),
        "hidden_size": model.config.hidden_size,
        "embedding_dim": model.embeddings.dim,
        "init_seed": model.config.init_seed,
        "priors": model.priors.as_dict(),
    }


def save_model(path: Union[str, Path], model: DenominalModel, extra: Optional[Dict[str, Any]] = None) -> Path:
    manifest = {"model": model_manifest(model)}
    manifest.update(extra or {})
    return save_checkpoint(path, model.params, manifest)


def load_model(path: Union[str, Path], embeddings: EmbeddingTable) -> DenominalModel:
    """Rebuild a model from its checkpoint; ``embeddings`` must match the stored dimension."""
    state, manifest = load_checkpoint(path)
    try:
        meta = manifest["model"]
        heads = meta["heads"]
        spec = HeadSpec(tuple(heads["denominals"]), tuple(heads["contexts"]), tuple(heads["verbs"]),
                        int(heads["frames"]))
        priors = Priors(np.asarray(meta["priors"]["alpha_verb"]), np.asarray(meta["priors"]["alpha_relation"]),
                        np.asarray(meta["priors"]["beta"]))
        config = ModelConfig(hidden_size=int(meta["hidden_size"]), frames=spec.frames,
                             embedding_dim=int(meta["embedding_dim"]), init_seed=int(meta.get("init_seed", 0)))
        kind = meta["model_kind"]
    except (KeyError, TypeError) as e:
        raise FormatError(f"checkpoint manifest is incomplete: {e}", path=str(path)) from e
    if embeddings.dim != config.embedding_dim:
        raise FormatError(f"embedding dimension {embeddings.dim} does not match checkpoint "
                          f"dimension {config.embedding_dim}", path=str(path))
    model = build_model(kind, spec, embeddings, config=config, priors=priors)
    model.params.load_state_dict(state)
    logger.info(f"Loaded {model.kind.value} model from {path}")
    return model
