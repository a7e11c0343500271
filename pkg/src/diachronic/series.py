"""Yearly noun/verb POS counts and the ratio series derived from them."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Mapping, Union

import numpy as np
import pandas as pd

from src.errors import ContractError, FormatError

logger = logging.getLogger(__name__)

COUNT_COLUMNS = ("word", "year", "noun_count", "verb_count")


@dataclass(frozen=True)
class PosTimeSeries:
    word: str
    years: np.ndarray
    noun_counts: np.ndarray
    verb_counts: np.ndarray

    def __post_init__(self):
        lengths = {len(self.years), len(self.noun_counts), len(self.verb_counts)}
        if len(lengths) != 1:
            raise ContractError(f"{self.word}: years and counts differ in length")
        if np.any(np.diff(self.years) <= 0):
            raise ContractError(f"{self.word}: years must be strictly increasing")
        if np.any(self.noun_counts < 0) or np.any(self.verb_counts < 0):
            raise ContractError(f"{self.word}: counts must be non-negative")


@dataclass(frozen=True)
class RatioSeries:
    """Q(w, t) = noun / (noun + verb) for the years with any counts."""

    word: str
    years: np.ndarray
    values: np.ndarray


def load_counts(path: Union[str, Path]) -> Dict[str, PosTimeSeries]:
    """Read a ``word,year,noun_count,verb_count`` CSV into one series per word."""
    path = Path(path)
    try:
        frame = pd.read_csv(path)
    except (pd.errors.EmptyDataError, pd.errors.ParserError, UnicodeDecodeError) as e:
        raise FormatError(f"unreadable counts file: {e}", path=str(path)) from e
    missing = [c for c in COUNT_COLUMNS if c not in frame.columns]
    if missing:
        raise FormatError(f"counts file lacks columns {missing}", path=str(path))
    if frame.empty:
        raise FormatError("counts file has no rows", path=str(path))
    try:
        frame = frame.astype({"year": "int64", "noun_count": "int64", "verb_count": "int64"})
    except (ValueError, TypeError) as e:
        raise FormatError(f"non-integer year or count: {e}", path=str(path)) from e
    series: Dict[str, PosTimeSeries] = {}
    for word, group in frame.groupby("word", sort=True):
        if group["year"].duplicated().any():
            raise FormatError(f"word '{word}' repeats a year", path=str(path))
        group = group.sort_values("year")
        series[str(word)] = PosTimeSeries(str(word), group["year"].to_numpy(),
                                          group["noun_count"].to_numpy(), group["verb_count"].to_numpy())
    logger.info(f"Loaded POS counts for {len(series)} words from {path}")
    return series


def noun_ratio(series: PosTimeSeries) -> RatioSeries:
    """Noun share per year; years with zero total are dropped with a warning."""
    totals = series.noun_counts + series.verb_counts
    keep = totals > 0
    if not keep.any():
        raise ContractError(f"{series.word}: every year has zero counts")
    if not keep.all():
        logger.warning(f"{series.word}: dropping {int((~keep).sum())} years with zero counts")
    return RatioSeries(series.word, series.years[keep], series.noun_counts[keep] / totals[keep])


def frequency_filter(series: Mapping[str, PosTimeSeries], theta_f: int,
                     per_year: bool = False) -> Dict[str, PosTimeSeries]:
    """Keep words whose noun and verb counts each exceed ``theta_f``.

    Totals over all years are compared by default; ``per_year`` compares the
    mean yearly counts instead.
    """
    if theta_f < 0:
        raise ContractError("theta_f must be non-negative")
    kept = {}
    for word, s in series.items():
        reduce = np.mean if per_year else np.sum
        nouns, verbs = reduce(s.noun_counts), reduce(s.verb_counts)
        if theta_f == 0:
            passes = nouns + verbs > 0
        else:
            passes = nouns > theta_f and verbs > theta_f
        if passes:
            kept[word] = s
    logger.info(f"Frequency filter θ_f={theta_f}: kept {len(kept)} of {len(series)} words")
    return kept


def normalize_zscore(values: np.ndarray) -> np.ndarray:
    """(Q - mean) / population std; a constant series maps to zeros."""
    values = np.asarray(values, dtype=np.float64)
    if values.size < 2:
        raise ContractError("z-scores need at least two values")
    if np.ptp(values) == 0:
        return np.zeros_like(values)
    return (values - values.mean()) / values.std()


def zseries_frame(series: Mapping[str, PosTimeSeries]) -> pd.DataFrame:
    """Plot-ready long table: word, year, ratio, z."""
    frames = []
    for word in sorted(series):
        ratio = noun_ratio(series[word])
        z = normalize_zscore(ratio.values) if ratio.values.size >= 2 else np.zeros_like(ratio.values)
        frames.append(pd.DataFrame({"word": word, "year": ratio.years, "ratio": ratio.values, "z": z}))
    if not frames:
        return pd.DataFrame(columns=["word", "year", "ratio", "z"])
    return pd.concat(frames, ignore_index=True)
