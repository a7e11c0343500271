"""``report``: consolidate ``eval`` metric files into model comparison tables."""

import argparse
import json
import logging
from pathlib import Path
from typing import List

import pandas as pd

from src.commands.common import out_path
from src.errors import FormatError
from src.manifest import RunManifest

logger = logging.getLogger(__name__)

TASKS = ("comprehension", "production")
REQUIRED = ("model", "language", "metric", "value", "standard_error")


def find_metric_files(inputs: List[str]) -> List[Path]:
    files: List[Path] = []
    for raw in inputs:
        path = Path(raw)
        if path.is_dir():
            files.extend(sorted(path.rglob("metrics*.csv")))
        elif path.is_file():
            files.append(path)
        else:
            raise FileNotFoundError(f"report input not found: {path}")
    if not files:
        raise FormatError(f"no metric files under {', '.join(inputs)}")
    return files


def load_metrics(files: List[Path]) -> pd.DataFrame:
    frames = []
    for path in files:
        try:
            frame = pd.read_csv(path)
        except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
            raise FormatError(f"unreadable metric file: {e}", path=str(path)) from e
        missing = [c for c in REQUIRED if c not in frame.columns]
        if missing:
            raise FormatError(f"metric file lacks columns {missing}", path=str(path))
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)


def summary_table(metrics: pd.DataFrame) -> pd.DataFrame:
    """One row per (model, language, task); one value and SE column per measure."""
    if "group" in metrics.columns:
        group = metrics["group"].astype(str)
        metrics = metrics[~group.str.contains("=") | group.str.startswith("folds=")]
    names = metrics["metric"].replace({"relation_accuracy": "comprehension_relation_accuracy"})
    split = names.str.split("_", n=1, expand=True).reindex(columns=[0, 1])
    metrics = metrics.assign(task=split[0], measure=split[1].fillna(""))
    metrics = metrics[metrics["task"].isin(TASKS)]
    if metrics.empty:
        raise FormatError("metric files hold no comprehension or production rows")
    values = metrics.pivot_table(index=["model", "language", "task"], columns="measure", values="value",
                                 aggfunc="mean")
    errors = metrics.pivot_table(index=["model", "language", "task"], columns="measure",
                                 values="standard_error", aggfunc="mean").add_suffix("_se")
    table = values.join(errors)
    table = table[sorted(table.columns)]
    return table.reset_index().sort_values(["model", "language", "task"], ignore_index=True)


def run(args: argparse.Namespace, manifest: RunManifest) -> None:
    table = summary_table(load_metrics(find_metric_files(args.paths)))
    csv_path = out_path(args, "summary.csv")
    table.to_csv(csv_path, index=False, float_format="%.6f")
    json_path = out_path(args, "summary.json")
    json_path.write_text(json.dumps(json.loads(table.to_json(orient="records", double_precision=6)),
                                    indent=2, sort_keys=True) + "\n", encoding="utf-8")
    manifest.add_output(csv_path)
    manifest.add_output(json_path)
    logger.info(f"Summary with {len(table)} rows written to {csv_path}")


def register_command(subparsers) -> None:
    parser = subparsers.add_parser("report", help="Summarize metric CSVs into comparison tables")
    parser.add_argument("paths", nargs="+", metavar="INPUT",
                        help="Metric CSV files or directories searched for metrics*.csv")
    parser.set_defaults(handler=run, inputs=lambda a: [p for p in a.paths if Path(p).is_file()])
