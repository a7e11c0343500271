"""Named trainable parameters and the set that owns them."""

from dataclasses import dataclass
from typing import Dict, Iterator, Optional

import numpy as np

from src.autodiff.tensor import Tensor
from src.errors import ContractError, DimensionError


@dataclass
class Parameter:
    """A named tensor that always requires grad."""

    name: str
    tensor: Tensor

    @property
    def values(self) -> np.ndarray:
        return self.tensor.values

    @property
    def grad(self) -> Optional[np.ndarray]:
        return self.tensor.grad


class ParameterSet:
    """Parameters keyed by unique name, iterated in name order."""

    def __init__(self) -> None:
        self._params: Dict[str, Parameter] = {}

    def create(self, name: str, values: np.ndarray) -> Tensor:
        if name in self._params:
            raise ContractError(f"duplicate parameter name '{name}'")
        tensor = Tensor(values, requires_grad=True)
        self._params[name] = Parameter(name, tensor)
        return tensor

    def __getitem__(self, name: str) -> Parameter:
        return self._params[name]

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def __iter__(self) -> Iterator[Parameter]:
        for name in sorted(self._params):
            yield self._params[name]

    def __len__(self) -> int:
        return len(self._params)

    def names(self):
        return sorted(self._params)

    def zero_grad(self) -> None:
        for param in self._params.values():
            param.tensor.zero_grad()

    def grad_norm(self) -> float:
        total = 0.0
        for param in self:
            if param.grad is not None:
                total += float(np.sum(param.grad ** 2))
        return float(np.sqrt(total))

    def state_dict(self) -> Dict[str, np.ndarray]:
        return {p.name: p.values.copy() for p in self}

    def load_state_dict(self, state: Dict[str, np.ndarray]) -> None:
        missing = set(self._params) - set(state)
        unexpected = set(state) - set(self._params)
        if missing or unexpected:
            raise ContractError(
                f"parameter names disagree: missing {sorted(missing)}, unexpected {sorted(unexpected)}"
            )
        for name, values in state.items():
            target = self._params[name].tensor
            values = np.asarray(values, dtype=np.float64)
            if values.shape != target.shape:
                raise DimensionError(f"parameter '{name}': shape {values.shape} vs {target.shape}")
            target.values = values.copy()
