"""``eval``: score a checkpoint, a baseline or a cross-validated model kind on held-out data."""

import argparse
import logging
from typing import List

import pandas as pd

from src.commands.common import (
    candidate_spec,
    embedding_source,
    lemma_normalizer,
    model_config,
    open_model,
    out_path,
    require_file,
    resolve_embeddings,
)
from src.commands.train import train_config
from src.config import EvaluationConfig
from src.data.io import load_dataset
from src.errors import ContractError
from src.evaluation.baselines import FrequencyBaseline, RandomBaseline
from src.evaluation.metrics import MetricReport, reports_frame
from src.evaluation.protocols import EvaluationBundle, evaluate_model, grouped_report
from src.inference.tasks import export_frame_posteriors
from src.manifest import RunManifest
from src.models.heads import ModelKind
from src.models.kinds import build_model
from src.training.crossval import ModelFactory, cross_validate, mean_metrics

logger = logging.getLogger(__name__)

METRIC_COLUMNS = ["model", "language", "metric", "value", "standard_error", "sample_size", "group"]
GROUPED_METRICS = ("comprehension_top1", "comprehension_kl")


def _grouped(bundle: EvaluationBundle, keys: List[str]) -> List[MetricReport]:
    reports: List[MetricReport] = []
    for key in keys:
        for metric in GROUPED_METRICS:
            for report in grouped_report(bundle.scores.get(metric, []), metric, key):
                reports.append(MetricReport(report.metric, report.value, report.standard_error,
                                            report.sample_size, f"{key}={report.group}"))
    return reports


def metrics_frame(reports: List[MetricReport], model: str, language: str) -> pd.DataFrame:
    frame = reports_frame(reports)
    frame.insert(0, "language", language)
    frame.insert(0, "model", model)
    return frame[METRIC_COLUMNS]


def fold_factory(args: argparse.Namespace, dataset, embeddings, settings) -> ModelFactory:
    """Fresh models whose candidates come from the whole dataset, so held-out
    denominals and contexts stay on the heads; only training records vary by fold."""
    spec = candidate_spec(dataset, args.exclude_verbs, settings.frames)

    def factory(fold: int, train_set):
        return build_model(args.model_kind, spec, embeddings, config=settings)

    return factory


def _cross_validated(args: argparse.Namespace, dataset, evaluation: EvaluationConfig, normalizer) -> pd.DataFrame:
    config = train_config(args)
    source = embedding_source(args, dataset, args.embedding_dim, config.seed)
    embeddings = resolve_embeddings(source)
    settings = model_config(args, embeddings.dim, config.seed)
    results = cross_validate(fold_factory(args, dataset, embeddings, settings), dataset, args.folds, config,
                             evaluation, normalizer, exclude_verbs=args.exclude_verbs or ())
    reports = [MetricReport(name, mean, se, len(results), f"folds={args.folds}")
               for name, (mean, se) in mean_metrics(results).items()]
    return metrics_frame(reports, args.model_kind, dataset.language)


def run(args: argparse.Namespace, manifest: RunManifest) -> None:
    dataset = load_dataset(require_file(args.data, "dataset"), language=args.language)
    evaluation = EvaluationConfig.from_env()
    if args.k_max is not None:
        evaluation.k_max = args.k_max
    evaluation.validate()
    normalizer = lemma_normalizer(args.lemmas)
    if not (args.model or args.baseline or args.folds):
        raise ContractError("eval needs one of --model, --baseline or --folds")

    if args.folds:
        frame = _cross_validated(args, dataset, evaluation, normalizer)
        path = out_path(args, "metrics.csv")
        frame.to_csv(path, index=False)
        manifest.add_output(path)
        return

    if args.baseline:
        train_set = load_dataset(require_file(args.train, "training dataset"), language=args.language)
        verbs = sorted({i.verb for e in train_set.supervised for i, _ in e.gold}
                       | {i.verb for e in dataset.supervised for i, _ in e.gold})
        denominals = sorted({u.denominal for u in train_set.utterances() + dataset.utterances()})
        if args.baseline == "frequency":
            scorer = FrequencyBaseline(train_set, verbs=verbs, denominals=denominals)
        else:
            scorer = RandomBaseline(verbs, denominals, seed=args.seed or 0)
        label = args.baseline
    else:
        scorer = open_model(args)
        label = scorer.kind.value

    bundle = evaluate_model(scorer, dataset, evaluation, normalizer)
    reports = bundle.reports + _grouped(bundle, args.group_by or [])
    metrics = out_path(args, "metrics.csv")
    metrics_frame(reports, label, dataset.language).to_csv(metrics, index=False)
    roc = out_path(args, "roc.csv")
    bundle.roc_frame().to_csv(roc, index=False)
    manifest.add_output(metrics)
    manifest.add_output(roc)

    if getattr(scorer, "kind", None) is ModelKind.FULL:
        frames = out_path(args, "frames.csv")
        export_frame_posteriors(scorer, dataset.utterances()).to_csv(frames, index=False)
        manifest.add_output(frames)
    logger.info(f"Wrote {len(reports)} metric rows for {label}")


def register_command(subparsers) -> None:
    parser = subparsers.add_parser("eval", help="Evaluate comprehension and production on held-out data")
    parser.add_argument("--data", required=True, help="Held-out dataset (or the full dataset with --folds)")
    parser.add_argument("--model", help="Model checkpoint to evaluate")
    parser.add_argument("--embeddings", help="Word vectors in text format")
    parser.add_argument("--baseline", choices=["frequency", "random"], help="Evaluate a baseline instead")
    parser.add_argument("--train", help="Training dataset for the frequency baseline")
    parser.add_argument("--folds", type=int, help="Run k-fold cross-validation of --model-kind on --data")
    parser.add_argument("--model-kind", choices=[k.value for k in ModelKind], default=ModelKind.FULL.value)
    parser.add_argument("--config", help="Training config for --folds")
    parser.add_argument("--embedding-dim", type=int, default=50)
    parser.add_argument("--frames", type=int)
    parser.add_argument("--hidden", type=int)
    parser.add_argument("--epochs", type=int)
    parser.add_argument("--lambda", dest="lam", type=float)
    parser.add_argument("--estimator", choices=["auto", "exact", "score"])
    parser.add_argument("--exclude-verbs", nargs="*", metavar="VERB",
                        help="Target denominal verbs withheld from training folds and verb candidates")
    parser.add_argument("--k-max", type=int)
    parser.add_argument("--lemmas", help="inflected<TAB>lemma map for gold matching")
    parser.add_argument("--group-by", nargs="*", choices=["source", "language", "decade"],
                        help="Add per-group rows for top-1 accuracy and KL")
    parser.add_argument("--language", default="en", choices=["en", "zh"])
    parser.set_defaults(handler=run, inputs=lambda a: [a.data, a.model, a.train, a.config, a.embeddings, a.lemmas])
