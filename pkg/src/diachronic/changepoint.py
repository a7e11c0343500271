"""Mean-shift change points with a permutation test."""

import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.config import ChangePointConfig
from src.diachronic.series import PosTimeSeries, frequency_filter, noun_ratio, normalize_zscore
from src.errors import ContractError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChangePoint:
    word: str
    year: int
    index: int
    p_value: float
    statistic: float

    @property
    def decade(self) -> int:
        return self.year // 10 * 10


def _max_shift(z: np.ndarray, min_segment: int) -> Tuple[np.ndarray, np.ndarray]:
    """Row-wise (statistic, pivot) for |mean(z[:t]) - mean(z[t:])| over valid t.

    ``z`` is 2-D, one series per row. Pivots run over min_segment..n-min_segment.
    """
    n = z.shape[1]
    pivots = np.arange(min_segment, n - min_segment + 1)
    prefix = np.cumsum(z, axis=1)
    total = prefix[:, -1:]
    left = prefix[:, pivots - 1] / pivots
    right = (total - prefix[:, pivots - 1]) / (n - pivots)
    shifts = np.abs(left - right)
    best = np.argmax(shifts, axis=1)
    return shifts[np.arange(z.shape[0]), best], pivots[best]


def scan_change_point(z_series: Sequence[float], years: Optional[Sequence[int]] = None, word: str = "",
                      n_permutations: int = 1000, min_segment: int = 5, seed: int = 0) -> ChangePoint:
    """Best pivot and its permutation p-value, significant or not."""
    z = np.asarray(z_series, dtype=np.float64)
    n = z.size
    if min_segment < 1:
        raise ContractError("min_segment must be at least 1")
    if n < 2 * min_segment:
        raise ContractError(f"series of length {n} is shorter than 2·min_segment = {2 * min_segment}")
    if n_permutations < 1:
        raise ContractError("n_permutations must be positive")
    years = np.arange(n) if years is None else np.asarray(years)
    observed, pivot = _max_shift(z[None, :], min_segment)
    rng = np.random.default_rng(seed)
    shuffled = rng.permuted(np.tile(z, (n_permutations, 1)), axis=1)
    null, _ = _max_shift(shuffled, min_segment)
    tolerance = 1e-12 * max(1.0, abs(float(observed[0])))
    p_value = float(np.mean(null >= observed[0] - tolerance))
    t = int(pivot[0])
    return ChangePoint(word, int(years[t]), t, p_value, float(observed[0]))


def detect_change_point(z_series: Sequence[float], n_permutations: int = 1000, alpha: float = 0.05,
                        min_segment: int = 5, seed: int = 0, years: Optional[Sequence[int]] = None,
                        word: str = "") -> Optional[ChangePoint]:
    """The change point of ``z_series`` if its p-value is below ``alpha``."""
    candidate = scan_change_point(z_series, years, word, n_permutations, min_segment, seed)
    return candidate if candidate.p_value < alpha else None


def detect_all(series: Mapping[str, PosTimeSeries], config: Optional[ChangePointConfig] = None,
               seed: int = 0) -> List[ChangePoint]:
    """Filter, ratio, z-score and detect for every word; results sorted by word."""
    config = config or ChangePointConfig()
    found: List[ChangePoint] = []
    kept = frequency_filter(series, config.theta_f, per_year=config.per_year)
    for word in sorted(kept):
        ratio = noun_ratio(kept[word])
        if ratio.values.size < 2 * config.min_segment:
            logger.warning(f"{word}: only {ratio.values.size} usable years, skipping")
            continue
        point = detect_change_point(normalize_zscore(ratio.values), config.permutations, config.alpha,
                                    config.min_segment, seed, years=ratio.years, word=word)
        if point is None:
            logger.warning(f"{word}: no significant change point")
            continue
        logger.info(f"{word}: change point {point.year} (p={point.p_value:.3f})")
        found.append(point)
    return found


def change_points_by_word(points: Sequence[ChangePoint]) -> Dict[str, ChangePoint]:
    return {p.word: p for p in points}
