"""Discriminative, partial generative and full generative listener/speaker models."""

from src.models.base import DenominalModel, SpeakerLikelihood
from src.models.estimators import ExactEnumeration, ScoreFunction, resolve_estimator
from src.models.heads import HeadSpec, LatentPosterior, ModelKind, Priors
from src.models.kinds import (
    DiscriminativeModel,
    FullGenerativeModel,
    PartialGenerativeModel,
    build_model,
)
from src.models.objectives import LossTerms, elbo, loss_terms, semi_supervised_loss, supervised_loss
from src.models.persistence import load_model, save_model
from src.models.posterior import bound_for_posterior, exact_speaker_posterior, log_marginal_likelihood

__all__ = [
    "DenominalModel",
    "DiscriminativeModel",
    "ExactEnumeration",
    "FullGenerativeModel",
    "HeadSpec",
    "LatentPosterior",
    "LossTerms",
    "ModelKind",
    "PartialGenerativeModel",
    "Priors",
    "ScoreFunction",
    "SpeakerLikelihood",
    "bound_for_posterior",
    "build_model",
    "elbo",
    "exact_speaker_posterior",
    "load_model",
    "log_marginal_likelihood",
    "loss_terms",
    "resolve_estimator",
    "save_model",
    "semi_supervised_loss",
    "supervised_loss",
]
