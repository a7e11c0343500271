"""Minimal dense tensors, reverse-mode autodiff and optimizers."""

from src.autodiff.checkpoint import load_checkpoint, save_checkpoint
from src.autodiff.layers import FeedForward, Linear
from src.autodiff.optim import Adam, GradientDescent, OptimizerConfig, build_optimizer
from src.autodiff.parameters import Parameter, ParameterSet
from src.autodiff.tensor import (
    Tape,
    Tensor,
    backward,
    cross_entropy,
    log_softmax,
    matmul,
    softmax,
)

__all__ = [
    "Adam",
    "FeedForward",
    "GradientDescent",
    "Linear",
    "OptimizerConfig",
    "Parameter",
    "ParameterSet",
    "Tape",
    "Tensor",
    "backward",
    "build_optimizer",
    "cross_entropy",
    "load_checkpoint",
    "log_softmax",
    "matmul",
    "save_checkpoint",
    "softmax",
]
