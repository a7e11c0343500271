"""``train``: fit one model on a dataset file and write its checkpoint and metrics log."""

import argparse
import logging

from src.commands.common import (
    candidate_spec,
    embedding_source,
    model_config,
    out_path,
    require_file,
    resolve_embeddings,
)
from src.config import TrainConfig
from src.data.io import load_dataset
from src.manifest import RunManifest
from src.models.heads import ModelKind
from src.models.kinds import build_model
from src.models.persistence import save_model
from src.training.trainer import train

logger = logging.getLogger(__name__)


def train_config(args: argparse.Namespace) -> TrainConfig:
    """File or environment settings, with command-line flags taking precedence."""
    overrides = {"seed": args.seed, "epochs": args.epochs, "lambda": args.lam, "estimator": args.estimator}
    if args.config:
        return TrainConfig.from_file(require_file(args.config, "training config"), overrides)
    return TrainConfig.from_env(overrides)


def run(args: argparse.Namespace, manifest: RunManifest) -> None:
    excluded = args.exclude_verbs or []
    dataset = load_dataset(require_file(args.data, "dataset"), language=args.language)
    training = dataset.excluding_verbs(excluded)
    if excluded:
        logger.info(f"Withheld {len(dataset) - len(training)} supervised records for {len(excluded)} target verbs")
    config = train_config(args)
    manifest.config["train"] = config.as_dict()

    source = embedding_source(args, dataset, args.embedding_dim, config.seed)
    embeddings = resolve_embeddings(source)
    settings = model_config(args, embeddings.dim, config.seed)
    spec = candidate_spec(training, excluded, settings.frames)
    model = build_model(args.model_kind, spec, embeddings, config=settings)

    checkpoint_dir = args.out if config.checkpoint_every else None
    report = train(model, training, config, checkpoint_dir=checkpoint_dir)

    checkpoint = save_model(out_path(args, "model.ckpt.json"), model,
                            {"embeddings": source, "train_config": config.as_dict(), "language": args.language})
    report.checkpoint = str(checkpoint)
    metrics = report.to_jsonl(out_path(args, "metrics.jsonl"))
    manifest.add_output(checkpoint)
    manifest.add_output(metrics)
    if report.epochs:
        logger.info(f"Final loss {report.epochs[-1].total:.4f} after {len(report.epochs)} epochs")


def register_command(subparsers) -> None:
    parser = subparsers.add_parser("train", help="Train a discriminative, partial or full model")
    parser.add_argument("--data", required=True, help="Dataset file (tab-separated records)")
    parser.add_argument("--model-kind", choices=[k.value for k in ModelKind], default=ModelKind.FULL.value)
    parser.add_argument("--config", help="Flat key=value training config file")
    parser.add_argument("--embeddings", help="Word vectors in text format")
    parser.add_argument("--embedding-dim", type=int, default=50,
                        help="Dimension of the seeded random vectors used without --embeddings")
    parser.add_argument("--frames", type=int, help="Frame cardinality K of the full model")
    parser.add_argument("--hidden", type=int, help="Hidden layer width")
    parser.add_argument("--epochs", type=int)
    parser.add_argument("--lambda", dest="lam", type=float, help="Weight of the supervised loss in U + lambda*S")
    parser.add_argument("--estimator", choices=["auto", "exact", "score"])
    parser.add_argument("--language", default="en", choices=["en", "zh"])
    parser.add_argument("--exclude-verbs", nargs="*", metavar="VERB",
                        help="Target denominal verbs withheld from training records and verb candidates")
    parser.set_defaults(handler=run, inputs=lambda a: [a.data, a.config, a.embeddings])
