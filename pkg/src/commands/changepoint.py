"""``changepoint``: detect noun-to-verb shifts in yearly POS counts.

With ``--data`` and ``--model`` the detected change points also drive the
temporal prediction protocol, for the model and the frequency baseline.
"""

import argparse
import logging

import pandas as pd

from src.commands.common import open_model, out_path, require_file
from src.config import ChangePointConfig
from src.data.io import load_dataset
from src.diachronic.changepoint import change_points_by_word, detect_all
from src.diachronic.series import frequency_filter, load_counts, zseries_frame
from src.diachronic.split import (
    baseline_predictions,
    pre_change_dataset,
    split_by_change_point,
    temporal_precision,
    temporal_predictions,
)
from src.evaluation.metrics import reports_frame
from src.manifest import RunManifest

logger = logging.getLogger(__name__)


def changepoint_config(args: argparse.Namespace) -> ChangePointConfig:
    config = ChangePointConfig.from_env()
    for name in ("permutations", "alpha", "min_segment", "theta_f"):
        value = getattr(args, name)
        if value is not None:
            setattr(config, name, value)
    if args.per_year:
        config.per_year = True
    config.validate()
    return config


def _temporal(args: argparse.Namespace, points, manifest: RunManifest) -> None:
    dataset = load_dataset(require_file(args.data, "historical dataset"))
    partitions = split_by_change_point(dataset, change_points_by_word(points))
    frames = []
    for label, predictions in (("frequency", baseline_predictions(pre_change_dataset(partitions), partitions)),
                               ("model", temporal_predictions(open_model(args), partitions))):
        for criterion in ("next-decade", "any-future"):
            reports = temporal_precision(predictions, partitions, criterion)
            if reports:
                frame = reports_frame(reports)
                frame.insert(0, "model", label)
                frames.append(frame)
    path = out_path(args, "temporal.csv")
    if frames:
        pd.concat(frames, ignore_index=True).to_csv(path, index=False)
    else:
        logger.warning("No word has both a change point and post-change usages")
        pd.DataFrame(columns=["model", "metric", "value", "standard_error", "sample_size", "group"]).to_csv(
            path, index=False)
    manifest.add_output(path)


def run(args: argparse.Namespace, manifest: RunManifest) -> None:
    config = changepoint_config(args)
    manifest.config["changepoint"] = vars(config).copy()
    series = load_counts(require_file(args.counts, "counts file"))
    points = detect_all(series, config, seed=args.seed or 0)

    rows = [{"word": p.word, "year": p.year, "decade": p.decade, "index": p.index,
             "p_value": p.p_value, "statistic": p.statistic} for p in points]
    path = out_path(args, "changepoints.csv")
    pd.DataFrame(rows, columns=["word", "year", "decade", "index", "p_value", "statistic"]).to_csv(path, index=False)
    manifest.add_output(path)

    kept = frequency_filter(series, config.theta_f, per_year=config.per_year)
    z_path = out_path(args, "zseries.csv")
    zseries_frame(kept).to_csv(z_path, index=False)
    manifest.add_output(z_path)
    logger.info(f"{len(points)} change points among {len(series)} words")

    if args.data:
        if not args.model:
            raise FileNotFoundError("--data needs a --model checkpoint for temporal prediction")
        _temporal(args, points, manifest)


def register_command(subparsers) -> None:
    parser = subparsers.add_parser("changepoint", help="Detect change points in noun/verb usage ratios")
    parser.add_argument("--counts", required=True, help="CSV with word,year,noun_count,verb_count")
    parser.add_argument("--permutations", type=int)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--min-segment", dest="min_segment", type=int)
    parser.add_argument("--theta-f", dest="theta_f", type=int)
    parser.add_argument("--per-year", action="store_true", help="Apply theta_f to mean yearly counts")
    parser.add_argument("--data", help="Decade-stamped historical dataset for temporal prediction")
    parser.add_argument("--model", help="Checkpoint used for temporal prediction")
    parser.add_argument("--embeddings")
    parser.set_defaults(handler=run, inputs=lambda a: [a.counts, a.data, a.model, a.embeddings])
