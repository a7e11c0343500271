"""Helpers shared by the subcommands: output paths, embeddings and model loading."""

import argparse
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

from src.autodiff.checkpoint import load_checkpoint
from src.config import ModelConfig
from src.data.records import Dataset
from src.lexicon.embeddings import EmbeddingTable, load_embeddings
from src.lexicon.lemmas import LemmaNormalizer, load_lemma_map
from src.lexicon.vocabulary import Vocabulary
from src.models.base import DenominalModel
from src.models.heads import HeadSpec
from src.models.persistence import load_model
from src.synthetic import dataset_tokens, random_embeddings

logger = logging.getLogger(__name__)


def out_path(args: argparse.Namespace, name: str) -> Path:
    path = Path(args.out) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def require_file(path: Optional[str], what: str) -> Path:
    if path is None:
        raise FileNotFoundError(f"no {what} given")
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"{what} not found: {path}")
    return path


def add_model_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", required=True, help="Model checkpoint (model.ckpt.json)")
    parser.add_argument("--embeddings", help="Word vectors in text format; defaults to the source recorded "
                                             "in the checkpoint")


def embedding_source(args: argparse.Namespace, dataset: Dataset, dim: int, seed: int) -> Dict[str, Any]:
    """Where the model's vectors come from, as stored in the checkpoint manifest."""
    if getattr(args, "embeddings", None):
        return {"path": str(args.embeddings)}
    return {"random": {"seed": seed, "dim": dim, "tokens": dataset_tokens(dataset)}}


def resolve_embeddings(source: Dict[str, Any]) -> EmbeddingTable:
    if "path" in source:
        return load_embeddings(require_file(source["path"], "embedding file"))
    random = source["random"]
    logger.warning("No embedding file given, using seeded random vectors")
    return random_embeddings(random["tokens"], dim=int(random["dim"]), seed=int(random["seed"]))


def open_model(args: argparse.Namespace) -> DenominalModel:
    path = require_file(args.model, "model checkpoint")
    if getattr(args, "embeddings", None):
        source: Dict[str, Any] = {"path": args.embeddings}
    else:
        _, manifest = load_checkpoint(path)
        source = manifest.get("embeddings") or {}
        if not source:
            raise FileNotFoundError("checkpoint records no embedding source; pass --embeddings")
    return load_model(path, resolve_embeddings(source))


def model_config(args: argparse.Namespace, embedding_dim: int, seed: int) -> ModelConfig:
    base = ModelConfig.from_env()
    config = ModelConfig(
        hidden_size=args.hidden if args.hidden is not None else base.hidden_size,
        frames=args.frames if args.frames is not None else base.frames,
        embedding_dim=embedding_dim,
        init_seed=seed,
    )
    config.validate()
    return config


def lemma_normalizer(path: Optional[str]) -> Optional[LemmaNormalizer]:
    return load_lemma_map(require_file(path, "lemma map")) if path else None


def write_lines(path: Path, lines: Iterable[str]) -> Path:
    path.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
    return path


def candidate_spec(dataset: Dataset, exclude_verbs: Optional[Iterable[str]], frames: int) -> HeadSpec:
    """Head candidates drawn from a dataset with target verbs withheld from the verb head.

    Args:
        dataset: Every record the model may be asked about, training or held out.
        exclude_verbs: Target denominal verbs never offered as paraphrases.
        frames: Frame cardinality K.

    Returns:
        The candidate lists for the D, C and V heads.
    """
    excluded = list(exclude_verbs or ())
    vocab = Vocabulary.from_dataset(dataset, exclude_verbs=excluded)
    return HeadSpec.from_vocabulary(vocab, frames=frames)
