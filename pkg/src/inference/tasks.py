"""Comprehension, production, temporal prediction and frame-posterior export."""

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, List, Optional, Sequence

import numpy as np
import pandas as pd

from src.data.records import Interpretation, Utterance
from src.data.relations import RELATION_ORDER
from src.errors import ContractError
from src.inference.ranking import RankedList, merge_rankings
from src.models.heads import ModelKind

if TYPE_CHECKING:
    from src.models.base import DenominalModel

logger = logging.getLogger(__name__)

CANDIDATE_CAP = 1_000_000
EXACT_FRAME_LIMIT = 64


@dataclass(frozen=True)
class FrameSampleConfig:
    """How to marginalize the frame E: exact sum over K, or Monte Carlo from β.

    ``mode="auto"`` sums exactly when K ≤ 64.
    """

    mode: str = "auto"
    n_samples: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("auto", "exact", "sampled"):
            raise ContractError(f"frame mode must be auto, exact or sampled, got '{self.mode}'")
        if self.n_samples < 1:
            raise ContractError("n_samples must be at least 1")

    def weights(self, prior: np.ndarray) -> np.ndarray:
        """Per-frame weights: β itself, or empirical frequencies of draws from β."""
        mode = self.mode
        if mode == "auto":
            mode = "exact" if prior.size <= EXACT_FRAME_LIMIT else "sampled"
        if mode == "exact":
            return prior
        draws = np.random.default_rng(self.seed).choice(prior.size, size=self.n_samples, p=prior)
        return np.bincount(draws, minlength=prior.size) / self.n_samples


def _frame_weights(model: "DenominalModel", frames: Optional[FrameSampleConfig]) -> np.ndarray:
    return (frames or FrameSampleConfig()).weights(model.frame_prior)


def comprehension_scores(model: "DenominalModel", utterance: Utterance,
                         frames: Optional[FrameSampleConfig] = None) -> np.ndarray:
    """Ranking scores over every (V, R) for ``utterance``.

    Each cell holds Σ_E w_E · p_l(V|U) p_l(R|U) p_l(E|U), with w the frame
    weights. These are listener scores normalized over interpretations, so the
    matrix sums to 1. They order candidates and are not the joint p(I|U) of
    the generative model.

    Args:
        model: A trained model of any kind.
        utterance: The (D, C) pair to interpret.
        frames: How to marginalize the frame; ``None`` sums exactly over K.

    Returns:
        A |V| × |R| matrix in candidate order.
    """
    posterior = model.listener_posterior(utterance)
    product = np.outer(posterior.verb, posterior.relation)
    if posterior.frame is None:
        return product
    weights = _frame_weights(model, frames)
    joint = product[:, :, None] * posterior.frame[None, None, :]
    return joint @ weights


def comprehend(model: "DenominalModel", utterance: Utterance, k: int,
               frames: Optional[FrameSampleConfig] = None) -> RankedList[Interpretation]:
    """Top-k interpretations (V, R) of ``utterance``."""
    if k < 1:
        raise ContractError(f"k must be at least 1, got {k}")
    scores = comprehension_scores(model, utterance, frames)
    items = [Interpretation(verb, relation) for verb in model.spec.verbs for relation in RELATION_ORDER]
    return RankedList.from_scores(items, scores.ravel()).top(k)


def production_scores(model: "DenominalModel", interpretation: Interpretation,
                      frames: Optional[FrameSampleConfig] = None) -> np.ndarray:
    """|D| × |C| scores Σ_E w_E · p_s(D|I,E) p_s(C|I,E)."""
    tables = model.speaker_tables(interpretation)
    weights = _frame_weights(model, frames) if model.kind is ModelKind.FULL else np.ones(1)
    return (tables.denominal.T * weights) @ tables.context


def _top_cells(matrix: np.ndarray, k: int) -> np.ndarray:
    """Flat indices whose score reaches the k-th largest value (ties kept)."""
    flat = matrix.ravel()
    if k >= flat.size:
        return np.arange(flat.size)
    threshold = np.partition(flat, flat.size - k)[flat.size - k]
    return np.flatnonzero(flat >= threshold)


def produce(model: "DenominalModel", interpretation: Interpretation, k: int,
            frames: Optional[FrameSampleConfig] = None,
            candidates: Optional[Sequence[Utterance]] = None) -> RankedList[Utterance]:
    """Top-k utterances (D, C) for ``interpretation``.

    Without ``candidates`` the pool is every denominal × context candidate pair.
    """
    if k < 1:
        raise ContractError(f"k must be at least 1, got {k}")
    spec = model.spec
    if candidates is None and len(spec.denominals) * len(spec.contexts) > CANDIDATE_CAP:
        raise ContractError(f"candidate space exceeds {CANDIDATE_CAP} pairs; pass an explicit candidate list")
    scores = production_scores(model, interpretation, frames)
    if candidates is not None:
        if not candidates:
            raise ContractError("production needs a non-empty candidate set")
        d_idx = model.target_indices("denominal", [u.denominal for u in candidates])
        c_idx = model.target_indices("context", [u.context for u in candidates])
        return RankedList.from_scores(list(candidates), scores[d_idx, c_idx]).top(k)
    keep = _top_cells(scores, k)
    d_idx, c_idx = np.unravel_index(keep, scores.shape)
    items = [Utterance(spec.denominals[d], spec.contexts[c]) for d, c in zip(d_idx, c_idx)]
    return RankedList.from_scores(items, scores[d_idx, c_idx]).top(k)


def predict_future_usage(model: "DenominalModel", interpretations: Sequence[Interpretation], m: int,
                         frames: Optional[FrameSampleConfig] = None,
                         candidates: Optional[Sequence[Utterance]] = None) -> RankedList[Utterance]:
    """Union of production rankings over ``interpretations``, deduplicated by max score, top ``m``."""
    if m < 1:
        raise ContractError(f"m must be at least 1, got {m}")
    rankings: List[RankedList[Utterance]] = [
        produce(model, interp, m, frames, candidates) for interp in interpretations
    ]
    if not rankings:
        return RankedList((), ())
    return merge_rankings(rankings, m)


def export_frame_posteriors(model: "DenominalModel", utterances: Sequence[Utterance]) -> pd.DataFrame:
    """One row per utterance with its K-way frame posterior."""
    if model.kind is not ModelKind.FULL:
        raise ContractError("frame posteriors exist only for the full generative model")
    posteriors = model.frame_posteriors(list(utterances))
    frame = pd.DataFrame(posteriors, columns=[f"frame_{e}" for e in range(model.n_frames)])
    frame.insert(0, "context", [u.context for u in utterances])
    frame.insert(0, "denominal", [u.denominal for u in utterances])
    return frame
