"""Listener and speaker networks shared by the three model kinds.

The listener reads emb(D) ⊕ emb(C) and emits independent categorical heads over
V, R and (full model only) the frame E. The speaker reads emb(V) ⊕ emb(rel) ⊕
onehot(R), plus a learned frame embedding in the full model, and emits heads
over D and C.

Models without frames carry a single frame cell with prior [1], so every
latent enumeration below runs over |V|·8·n_frames cells for all kinds.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from src.autodiff.layers import FeedForward, build_heads, glorot_uniform, one_hot
from src.autodiff.parameters import ParameterSet
from src.autodiff.tensor import Tensor, concat, log_softmax, matmul
from src.config import ModelConfig
from src.data.records import Interpretation, Utterance
from src.data.relations import RELATION_ORDER
from src.errors import ContractError
from src.inference.ranking import RankingMixin
from src.lexicon.embeddings import EmbeddingTable
from src.models.heads import N_RELATIONS, HeadSpec, LatentPosterior, ModelKind, Priors, check_frame

logger = logging.getLogger(__name__)

_HEAD_LISTS = {"denominal": "denominals", "context": "contexts", "verb": "verbs"}


@dataclass(frozen=True)
class SpeakerLikelihood:
    """p_s(D|I,E) and p_s(C|I,E) over the candidate lists."""

    denominal: np.ndarray
    context: np.ndarray


class DenominalModel(RankingMixin):
    """Parameter container and forward passes; subclasses fix the kind."""

    kind: ModelKind = ModelKind.DISCRIMINATIVE

    def __init__(self, spec: HeadSpec, embeddings: EmbeddingTable, config: Optional[ModelConfig] = None,
                 priors: Optional[Priors] = None):
        self.spec = spec
        self.embeddings = embeddings
        self.config = config or ModelConfig()
        self.n_frames = spec.frames if self.kind is ModelKind.FULL else 1
        self.params = ParameterSet()

        rng = np.random.default_rng(self.config.init_seed)
        dim = embeddings.dim
        hidden = self.config.hidden_size

        self.listener = FeedForward(self.params, "listener.encoder", 2 * dim, hidden, rng)
        listener_sizes = {"verb": len(spec.verbs), "relation": N_RELATIONS}
        if self.kind is ModelKind.FULL:
            listener_sizes["frame"] = self.n_frames
        self.listener_heads = build_heads(self.params, "listener", hidden, listener_sizes, rng)

        speaker_in = 2 * dim + N_RELATIONS
        self.frame_embedding: Optional[Tensor] = None
        if self.kind is ModelKind.FULL:
            self.frame_embedding = self.params.create(
                "speaker.frame_embedding", glorot_uniform(rng, self.n_frames, dim))
            speaker_in += dim
        self.speaker = FeedForward(self.params, "speaker.encoder", speaker_in, hidden, rng)
        self.speaker_heads = build_heads(
            self.params, "speaker", hidden, {"denominal": len(spec.denominals), "context": len(spec.contexts)}, rng)

        self._verb_rows = embeddings.embed_matrix(list(spec.verbs))
        self._relation_rows = embeddings.embed_matrix([r.head_word for r in RELATION_ORDER])
        self._indices = {head: spec.index(attr) for head, attr in _HEAD_LISTS.items()}

        if priors is None:
            priors = Priors.uniform(len(spec.verbs), self.n_frames)
        if priors.verb.size != len(spec.verbs) or priors.frame.size != self.n_frames:
            raise ContractError(
                f"prior sizes ({priors.verb.size}, {priors.frame.size}) do not match "
                f"{len(spec.verbs)} verbs and {self.n_frames} frames")
        self._priors = priors
        logger.debug(f"Built {self.kind.value} model with {len(self.params)} parameters")

    # -- indices --------------------------------------------------------------

    def target_index(self, head: str, token: str) -> int:
        try:
            return self._indices[head][token]
        except KeyError:
            raise ContractError(f"'{token}' is not a {head} candidate of this model") from None

    def target_indices(self, head: str, tokens: Sequence[str]) -> np.ndarray:
        return np.array([self.target_index(head, t) for t in tokens], dtype=np.int64)

    def parameter_groups(self) -> Dict[str, List[str]]:
        names = self.params.names()
        return {
            "listener": [n for n in names if n.startswith("listener.")],
            "speaker": [n for n in names if n.startswith("speaker.")],
        }

    # -- forward passes -------------------------------------------------------

    def listener_inputs(self, utterances: Sequence[Utterance]) -> Tensor:
        rows = [np.concatenate([self.embeddings.embed(u.denominal), self.embeddings.embed(u.context)])
                for u in utterances]
        return Tensor(np.stack(rows))

    def listener_log_probs(self, utterances: Sequence[Utterance]) -> Dict[str, Tensor]:
        """Log-probabilities per head, each of shape B × head size."""
        if not utterances:
            raise ContractError("listener needs at least one utterance")
        hidden = self.listener(self.listener_inputs(utterances))
        out = {head: log_softmax(layer(hidden)) for head, layer in self.listener_heads.items()}
        if "frame" not in out:
            out["frame"] = Tensor(np.zeros((len(utterances), 1)))
        return out

    def speaker_inputs(self, verb_idx: np.ndarray, relation_idx: np.ndarray,
                       frame_idx: Optional[np.ndarray] = None) -> Tensor:
        verb_idx = np.asarray(verb_idx, dtype=np.int64)
        relation_idx = np.asarray(relation_idx, dtype=np.int64)
        fixed = Tensor(np.concatenate(
            [self._verb_rows[verb_idx], self._relation_rows[relation_idx], one_hot(relation_idx, N_RELATIONS)],
            axis=1))
        if self.frame_embedding is None:
            return fixed
        if frame_idx is None:
            frame_idx = np.zeros_like(verb_idx)
        frames = matmul(Tensor(one_hot(frame_idx, self.n_frames)), self.frame_embedding)
        return concat([fixed, frames], axis=1)

    def speaker_log_probs(self, verb_idx: np.ndarray, relation_idx: np.ndarray,
                          frame_idx: Optional[np.ndarray] = None) -> Dict[str, Tensor]:
        """Log p_s(D|·) and log p_s(C|·), one row per (v, r, e) triple."""
        hidden = self.speaker(self.speaker_inputs(verb_idx, relation_idx, frame_idx))
        return {head: log_softmax(layer(hidden)) for head, layer in self.speaker_heads.items()}

    # -- probability views ----------------------------------------------------

    def listener_posteriors(self, utterances: Sequence[Utterance]) -> List[LatentPosterior]:
        logs = self.listener_log_probs(utterances)
        verb, relation = np.exp(logs["verb"].values), np.exp(logs["relation"].values)
        frame = np.exp(logs["frame"].values) if self.kind is ModelKind.FULL else None
        return [LatentPosterior(verb[i], relation[i], None if frame is None else frame[i])
                for i in range(len(utterances))]

    def listener_posterior(self, utterance: Utterance) -> LatentPosterior:
        return self.listener_posteriors([utterance])[0]

    def speaker_likelihood(self, interpretation: Interpretation, frame: Optional[int] = None) -> SpeakerLikelihood:
        if self.kind is ModelKind.FULL and frame is None:
            raise ContractError("the full model needs a frame index")
        if self.kind is not ModelKind.FULL and frame is not None:
            raise ContractError(f"{self.kind.value} models have no frame variable")
        e = check_frame(frame, self.n_frames)
        v = self.target_index("verb", interpretation.verb)
        logs = self.speaker_log_probs(np.array([v]), np.array([interpretation.relation.index]), np.array([e]))
        return SpeakerLikelihood(np.exp(logs["denominal"].values[0]), np.exp(logs["context"].values[0]))

    def speaker_tables(self, interpretation: Interpretation) -> SpeakerLikelihood:
        """Per-frame speaker distributions, each n_frames × candidates."""
        v = self.target_index("verb", interpretation.verb)
        frames = np.arange(self.n_frames)
        logs = self.speaker_log_probs(np.full(self.n_frames, v),
                                      np.full(self.n_frames, interpretation.relation.index), frames)
        return SpeakerLikelihood(np.exp(logs["denominal"].values), np.exp(logs["context"].values))

    def prior_distributions(self) -> Priors:
        if not self.kind.generative:
            raise ContractError("discriminative models have no priors")
        return self._priors

    @property
    def priors(self) -> Priors:
        """Stored priors; discriminative models hold a placeholder used only internally."""
        return self._priors

    @property
    def frame_prior(self) -> np.ndarray:
        return self._priors.frame

    @property
    def cell_log_prior(self) -> np.ndarray:
        return self._priors.cell_log_prior()

    # shared evaluation surface (baselines implement the same methods)

    @property
    def verbs(self) -> Sequence[str]:
        return self.spec.verbs

    @property
    def denominals(self) -> Sequence[str]:
        return self.spec.denominals

    def verb_distribution(self, utterance: Utterance) -> np.ndarray:
        return self.listener_posterior(utterance).verb

    def relation_distribution(self, utterance: Utterance) -> np.ndarray:
        return self.listener_posterior(utterance).relation

    def denominal_distribution(self, interpretation: Interpretation) -> np.ndarray:
        """p_s(D|I) with frames marginalized under β."""
        tables = self.speaker_tables(interpretation)
        return self.frame_prior @ tables.denominal

    def context_distribution(self, interpretation: Interpretation) -> np.ndarray:
        tables = self.speaker_tables(interpretation)
        return self.frame_prior @ tables.context

    def __repr__(self) -> str:
        return (f"{type(self).__name__}(verbs={len(self.spec.verbs)}, denominals={len(self.spec.denominals)}, "
                f"contexts={len(self.spec.contexts)}, frames={self.n_frames})")
