"""ELBO estimators over the discrete latent (V, R, E).

Both estimators return a scalar tensor whose value is the ELBO estimate for
the batch (summed over utterances) and whose gradient is an unbiased or exact
gradient of it.
"""

import logging
from typing import Dict, Optional, Sequence, Union

import numpy as np

from src.autodiff.tensor import (
    Tensor,
    detach,
    exp,
    gather,
    index_select,
    matmul,
    tensor_sum,
    transpose,
)
from src.errors import ContractError
from src.models.base import DenominalModel
from src.models.heads import expansion_matrices, latent_cells
from src.data.records import Utterance

logger = logging.getLogger(__name__)

HEADS = ("verb", "relation", "frame")


def _require_generative(model: DenominalModel) -> None:
    if not model.kind.generative:
        raise ContractError("the ELBO is defined for generative models only")


def _log_priors(model: DenominalModel) -> Dict[str, np.ndarray]:
    priors = model.prior_distributions()
    return {"verb": np.log(priors.verb), "relation": np.log(priors.relation), "frame": np.log(priors.frame)}


def kl_to_prior(model: DenominalModel, logs: Dict[str, Tensor]) -> Tensor:
    """Σ_b Σ_heads KL(q_head(·|U_b) ‖ prior_head); the factorized joint KL."""
    log_prior = _log_priors(model)
    total = None
    for head in HEADS:
        log_q = logs[head]
        term = tensor_sum(exp(log_q) * (log_q - log_prior[head]))
        total = term if total is None else total + term
    return total


def cell_reconstruction(model: DenominalModel, utterances: Sequence[Utterance]) -> Tensor:
    """B × cells matrix of log p_s(D_b|cell) + log p_s(C_b|cell)."""
    v, r, e = latent_cells(len(model.spec.verbs), model.n_frames)
    logs = model.speaker_log_probs(v, r, e)
    d_idx = model.target_indices("denominal", [u.denominal for u in utterances])
    c_idx = model.target_indices("context", [u.context for u in utterances])
    return (transpose(index_select(logs["denominal"], d_idx, axis=1))
            + transpose(index_select(logs["context"], c_idx, axis=1)))


def cell_count(model: DenominalModel) -> int:
    return len(model.spec.verbs) * model.spec.relations * model.n_frames


class ExactEnumeration:
    """Sums the expected reconstruction over every latent cell."""

    name = "exact"

    def __init__(self, limit: int = 10_000):
        self.limit = limit
        self.last_standard_error = 0.0

    def __call__(self, model: DenominalModel, utterances: Sequence[Utterance]) -> Tensor:
        _require_generative(model)
        cells = cell_count(model)
        if cells > self.limit:
            raise ContractError(
                f"{cells} latent cells exceed the enumeration limit {self.limit}; "
                f"use the score-function estimator instead")
        logs = model.listener_log_probs(utterances)
        ev, er, ee = expansion_matrices(len(model.spec.verbs), model.n_frames)
        q_joint = (matmul(exp(logs["verb"]), Tensor(ev)) * matmul(exp(logs["relation"]), Tensor(er))
                   * matmul(exp(logs["frame"]), Tensor(ee)))
        expected = tensor_sum(q_joint * cell_reconstruction(model, utterances))
        self.last_standard_error = 0.0
        return expected - kl_to_prior(model, logs)


def _sample_rows(rng: np.random.Generator, probs: np.ndarray, n: int, stratified: bool = False) -> np.ndarray:
    """n categorical draws per row of ``probs``, flattened row-major.

    With ``stratified`` the uniforms of each row fall one per stratum of width
    1/n in a random order. Each draw keeps its categorical marginal, and
    independent calls for different heads pair up as a Latin hypercube.
    """
    cdf = np.cumsum(probs, axis=1)
    u = rng.random((probs.shape[0], n))
    if stratified:
        strata = np.argsort(rng.random((probs.shape[0], n)), axis=1)
        u = (strata + u) / n
    draws = (u[:, :, None] > cdf[:, None, :]).sum(axis=2)
    return np.minimum(draws, probs.shape[1] - 1).ravel()


class ScoreFunction:
    """Monte Carlo ELBO with the log-derivative gradient and a moving-average baseline.

    The KL term is computed in closed form; only the reconstruction term is
    sampled, by default as a Latin hypercube over the verb, relation and frame
    heads. ``last_standard_error`` holds the independent-draw standard error of
    the most recent batch estimate, which the stratified draws never exceed
    asymptotically.
    """

    name = "score-function"

    def __init__(self, n_samples: int = 64, seed: int = 0, decay: float = 0.9, stratified: bool = True):
        if n_samples < 1:
            raise ContractError(f"n_samples must be positive, got {n_samples}")
        if not 0.0 <= decay < 1.0:
            raise ContractError(f"baseline decay must lie in [0, 1), got {decay}")
        self.n_samples = n_samples
        self.decay = decay
        self.stratified = stratified
        self.rng = np.random.default_rng(seed)
        self.baseline: Optional[float] = None
        self.last_standard_error = 0.0

    def __call__(self, model: DenominalModel, utterances: Sequence[Utterance]) -> Tensor:
        _require_generative(model)
        n = self.n_samples
        batch = len(utterances)
        logs = model.listener_log_probs(utterances)
        rows = np.repeat(np.arange(batch), n)
        samples = {head: _sample_rows(self.rng, np.exp(logs[head].values), n, self.stratified) for head in HEADS}

        log_q = None
        for head in HEADS:
            picked = gather(index_select(logs[head], rows, axis=0), samples[head])
            log_q = picked if log_q is None else log_q + picked

        speaker = model.speaker_log_probs(samples["verb"], samples["relation"], samples["frame"])
        d_idx = np.repeat(model.target_indices("denominal", [u.denominal for u in utterances]), n)
        c_idx = np.repeat(model.target_indices("context", [u.context for u in utterances]), n)
        f = gather(speaker["denominal"], d_idx) + gather(speaker["context"], c_idx)
        f_values = f.values.reshape(batch, n)

        baseline = float(f_values.mean()) if self.baseline is None else self.baseline
        advantage = Tensor(f_values.ravel() - baseline)
        score_term = tensor_sum(advantage * (log_q - detach(log_q)))
        surrogate = (tensor_sum(f) + score_term) * (1.0 / n) - kl_to_prior(model, logs)

        self.baseline = self.decay * baseline + (1.0 - self.decay) * float(f_values.mean())
        if n > 1:
            self.last_standard_error = float(np.sqrt(np.sum(f_values.var(axis=1, ddof=1) / n)))
        else:
            self.last_standard_error = float("inf")
        logger.debug(f"Score-function ELBO {surrogate.item():.4f} ± {self.last_standard_error:.4f}")
        return surrogate


Estimator = Union[ExactEnumeration, ScoreFunction]


def resolve_estimator(name: str, model: DenominalModel, limit: int = 10_000, samples: int = 64,
                      seed: int = 0, decay: float = 0.9, stratified: bool = True) -> Estimator:
    """Pick an estimator by name; ``auto`` enumerates whenever the cell count fits the limit."""
    if name == "auto":
        name = "exact" if cell_count(model) <= limit else "score-function"
        logger.info(f"Estimator auto-selected: {name} ({cell_count(model)} latent cells)")
    if name == "exact":
        return ExactEnumeration(limit)
    if name in ("score", "score-function", "sampled"):
        return ScoreFunction(samples, seed=seed, decay=decay, stratified=stratified)
    raise ContractError(f"unknown estimator '{name}'; choose from auto, exact, score-function")
