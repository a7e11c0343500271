"""Exact latent quantities for enumerable models, computed without the tape."""

from typing import Optional

import numpy as np

from src.data.records import Utterance
from src.models.base import DenominalModel
from src.models.estimators import cell_reconstruction


def _log_joint(model: DenominalModel, utterance: Utterance) -> np.ndarray:
    """log p0(cell) + log p_s(U|cell) for every latent cell."""
    recon = cell_reconstruction(model, [utterance]).values[0]
    return model.cell_log_prior + recon


def _logsumexp(values: np.ndarray) -> float:
    peak = values.max()
    return float(peak + np.log(np.exp(values - peak).sum()))


def log_marginal_likelihood(model: DenominalModel, utterance: Utterance) -> float:
    """log Σ_cells p0(cell)·p_s(U|cell)."""
    return _logsumexp(_log_joint(model, utterance))


def exact_speaker_posterior(model: DenominalModel, utterance: Utterance) -> np.ndarray:
    """p_s(cell|U) over the flattened (v, r, e) cells."""
    log_joint = _log_joint(model, utterance)
    return np.exp(log_joint - _logsumexp(log_joint))


def bound_for_posterior(model: DenominalModel, utterance: Utterance, posterior: Optional[np.ndarray] = None) -> float:
    """ELBO for an arbitrary joint posterior over cells.

    Without ``posterior`` the listener's factorized joint is used, which
    matches the exact-enumeration estimator.
    """
    if posterior is None:
        posterior = model.listener_posterior(utterance).joint()
        if posterior.ndim == 2:
            posterior = posterior[:, :, None]
    q = np.asarray(posterior, dtype=np.float64).ravel()
    recon = cell_reconstruction(model, [utterance]).values[0]
    live = q > 0
    kl = float(np.sum(q[live] * (np.log(q[live]) - model.cell_log_prior[live])))
    return float(np.dot(q, recon)) - kl
