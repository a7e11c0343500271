"""Training objectives: supervised NLL, the ELBO and their semi-supervised mix."""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.autodiff.tensor import Tensor, gather, logsumexp, mul, neg, reshape, tensor_sum
from src.data.records import Interpretation, SupervisedExample, Utterance
from src.errors import ContractError
from src.models.base import DenominalModel
from src.models.estimators import Estimator, ExactEnumeration

logger = logging.getLogger(__name__)


def _targets(example: SupervisedExample, soft: bool) -> List[Tuple[Interpretation, float]]:
    if not soft:
        return [(example.top_gold(), 1.0)]
    total = float(sum(votes for _, votes in example.gold))
    return [(interp, votes / total) for interp, votes in example.gold if votes > 0]


def supervised_loss(model: DenominalModel, batch: Sequence[SupervisedExample], soft_targets: bool = False) -> Tensor:
    """S = S_l + S_s summed over the batch.

    The listener term is the cross-entropy of the V and R heads against the
    target interpretation. The speaker term is -log p_s(D, C | V, R), with the
    frame marginalized under β for the full model. With ``soft_targets`` every
    voted interpretation contributes, weighted by its vote share.
    """
    if not batch:
        raise ContractError("supervised_loss needs at least one example")
    n_verbs, n_frames = len(model.spec.verbs), model.n_frames

    verb_weights = np.zeros((len(batch), n_verbs))
    relation_weights = np.zeros((len(batch), model.spec.relations))
    rows: List[Tuple[int, int, int, int, float]] = []
    for b, example in enumerate(batch):
        d = model.target_index("denominal", example.utterance.denominal)
        c = model.target_index("context", example.utterance.context)
        for interp, weight in _targets(example, soft_targets):
            v = model.target_index("verb", interp.verb)
            r = interp.relation.index
            verb_weights[b, v] += weight
            relation_weights[b, r] += weight
            rows.append((v, r, d, c, weight))

    logs = model.listener_log_probs([e.utterance for e in batch])
    listener = neg(tensor_sum(mul(logs["verb"], verb_weights)) + tensor_sum(mul(logs["relation"], relation_weights)))

    v_idx, r_idx, d_idx, c_idx, weights = (np.array(col) for col in zip(*rows))
    frames = np.tile(np.arange(n_frames), len(rows))
    speaker_logs = model.speaker_log_probs(np.repeat(v_idx, n_frames), np.repeat(r_idx, n_frames), frames)
    per_frame = (gather(speaker_logs["denominal"], np.repeat(d_idx, n_frames).astype(np.int64))
                 + gather(speaker_logs["context"], np.repeat(c_idx, n_frames).astype(np.int64)))
    joint = reshape(per_frame, (len(rows), n_frames)) + np.log(model.frame_prior)
    speaker = neg(tensor_sum(mul(logsumexp(joint, axis=1), weights.astype(np.float64))))
    return listener + speaker


def elbo(model: DenominalModel, utterances, estimator: Optional[Estimator] = None) -> Tensor:
    """ELBO of one utterance or the sum over a list of them.

    E_{q}[log p_s(U|latent)] - KL(p_l(·|U) ‖ prior). Defaults to exact enumeration.
    """
    if isinstance(utterances, Utterance):
        utterances = [utterances]
    if not utterances:
        raise ContractError("elbo needs at least one utterance")
    estimator = estimator or ExactEnumeration()
    return estimator(model, list(utterances))


@dataclass
class LossTerms:
    """The S and U parts of one training step; either may be absent."""

    supervised: Optional[Tensor]
    unsupervised: Optional[Tensor]
    lam: float

    @property
    def total(self) -> Tensor:
        if self.unsupervised is None:
            return self.supervised * self.lam
        if self.supervised is None:
            return self.unsupervised
        return self.unsupervised + self.supervised * self.lam


def loss_terms(model: DenominalModel, sup_batch: Sequence[SupervisedExample], unsup_batch: Sequence[Utterance],
               lam: float, estimator: Optional[Estimator] = None, soft_targets: bool = False) -> LossTerms:
    if lam < 0:
        raise ContractError(f"lambda must be non-negative, got {lam}")
    if not model.kind.generative:
        raise ContractError("semi-supervised training needs a generative model")
    if not sup_batch and not unsup_batch:
        raise ContractError("both batches are empty")
    unsupervised = neg(elbo(model, unsup_batch, estimator)) if unsup_batch else None
    supervised = supervised_loss(model, sup_batch, soft_targets) if sup_batch else None
    return LossTerms(supervised, unsupervised, float(lam))


def semi_supervised_loss(model: DenominalModel, sup_batch: Sequence[SupervisedExample],
                         unsup_batch: Sequence[Utterance], lam: float,
                         estimator: Optional[Estimator] = None, soft_targets: bool = False) -> Tensor:
    """L = U + λ·S with U the negative ELBO summed over ``unsup_batch``."""
    return loss_terms(model, sup_batch, unsup_batch, lam, estimator, soft_targets).total
