"""Feed-forward building blocks registered into a ParameterSet."""

from typing import Dict, Sequence

import numpy as np

from src.autodiff.parameters import ParameterSet
from src.autodiff.tensor import Tensor, add, matmul, tanh


def glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


class Linear:
    """x @ W + b with W of shape (in_features, out_features)."""

    def __init__(self, params: ParameterSet, name: str, in_features: int, out_features: int,
                 rng: np.random.Generator):
        self.name = name
        self.weight = params.create(f"{name}.weight", glorot_uniform(rng, in_features, out_features))
        self.bias = params.create(f"{name}.bias", np.zeros(out_features))

    def __call__(self, x: Tensor) -> Tensor:
        return add(matmul(x, self.weight), self.bias)


class FeedForward:
    """Stack of tanh hidden layers; the heads on top form the final layer."""

    def __init__(self, params: ParameterSet, name: str, in_features: int, hidden_size: int,
                 rng: np.random.Generator, depth: int = 2):
        sizes = [in_features] + [hidden_size] * depth
        self.layers = [
            Linear(params, f"{name}.{i}", sizes[i], sizes[i + 1], rng) for i in range(depth)
        ]
        self.out_features = hidden_size

    def __call__(self, x: Tensor) -> Tensor:
        for layer in self.layers:
            x = tanh(layer(x))
        return x


def build_heads(params: ParameterSet, prefix: str, in_features: int, sizes: Dict[str, int],
                rng: np.random.Generator) -> Dict[str, Linear]:
    return {head: Linear(params, f"{prefix}.{head}", in_features, size, rng) for head, size in sizes.items()}


def one_hot(indices: Sequence[int], depth: int) -> np.ndarray:
    out = np.zeros((len(indices), depth))
    out[np.arange(len(indices)), np.asarray(indices, dtype=np.int64)] = 1.0
    return out
