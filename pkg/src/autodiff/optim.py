"""First-order optimizers updating a ParameterSet in place."""

import logging
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from src.autodiff.parameters import Parameter, ParameterSet
from src.errors import ContractError

logger = logging.getLogger(__name__)


@dataclass
class OptimizerConfig:
    """Optimizer settings; ``kind`` is "sgd" (plain gradient) or "adam"."""

    kind: str = "adam"
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def validate(self) -> None:
        if self.kind not in ("sgd", "adam"):
            raise ContractError(f"optimizer kind must be 'sgd' or 'adam', got '{self.kind}'")
        if self.learning_rate <= 0:
            raise ContractError("learning_rate must be positive")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ContractError("moment decays must lie in [0, 1)")


class Optimizer:
    def __init__(self, params: ParameterSet, config: OptimizerConfig):
        config.validate()
        self.params = params
        self.config = config

    def _with_grads(self) -> List[Parameter]:
        """Parameters reached by the last backward pass; the rest are left untouched."""
        live = [p for p in self.params if p.grad is not None]
        if not live:
            raise ContractError("no parameter has a gradient; call backward first")
        return live

    def zero_grad(self) -> None:
        self.params.zero_grad()

    def step(self) -> None:
        raise NotImplementedError


class GradientDescent(Optimizer):
    def step(self) -> None:
        lr = self.config.learning_rate
        for param in self._with_grads():
            param.tensor.values = param.values - lr * param.grad


class Adam(Optimizer):
    def __init__(self, params: ParameterSet, config: OptimizerConfig):
        super().__init__(params, config)
        self._m: Dict[str, np.ndarray] = {}
        self._v: Dict[str, np.ndarray] = {}
        self._t = 0

    def step(self) -> None:
        cfg = self.config
        live = self._with_grads()
        self._t += 1
        for param in live:
            g = param.grad
            m = cfg.beta1 * self._m.get(param.name, np.zeros_like(g)) + (1 - cfg.beta1) * g
            v = cfg.beta2 * self._v.get(param.name, np.zeros_like(g)) + (1 - cfg.beta2) * g ** 2
            self._m[param.name], self._v[param.name] = m, v
            m_hat = m / (1 - cfg.beta1 ** self._t)
            v_hat = v / (1 - cfg.beta2 ** self._t)
            param.tensor.values = param.values - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.eps)


def build_optimizer(params: ParameterSet, config: OptimizerConfig) -> Optimizer:
    config.validate()
    logger.debug(f"Building {config.kind} optimizer (lr={config.learning_rate}) over {len(params)} parameters")
    if config.kind == "sgd":
        return GradientDescent(params, config)
    return Adam(params, config)
