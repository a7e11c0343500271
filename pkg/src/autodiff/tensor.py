"""Dense 64-bit tensors with reverse-mode automatic differentiation.

Tensors hold at most two dimensions. Every primitive records a node linking
the output to its inputs together with a closure computing input gradients;
:class:`Tape` orders those nodes topologically for the backward pass.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.errors import ContractError, DimensionError, NumericalError, TargetIndexError

logger = logging.getLogger(__name__)

LOG_FLOOR = 1e-12

ArrayLike = Union[np.ndarray, float, int, Sequence]
GradFn = Callable[[np.ndarray], Tuple[Optional[np.ndarray], ...]]


@dataclass
class _Node:
    op: str
    parents: Tuple["Tensor", ...]
    backward: GradFn


class Tensor:
    """A dense array of float64 values that may take part in differentiation."""

    def __init__(self, values: ArrayLike, requires_grad: bool = False, _node: Optional[_Node] = None):
        data = np.array(values, dtype=np.float64)
        if data.ndim > 2:
            raise DimensionError(f"tensors are limited to 2 dimensions, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise NumericalError("tensor values must be finite")
        self.values = data
        self.requires_grad = requires_grad
        self.grad: Optional[np.ndarray] = None
        self._node = _node

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.values.shape

    @property
    def ndim(self) -> int:
        return self.values.ndim

    @property
    def is_leaf(self) -> bool:
        return self._node is None

    def item(self) -> float:
        if self.values.size != 1:
            raise ContractError(f"item() needs a single value, shape is {self.shape}")
        return float(self.values.reshape(()))

    def numpy(self) -> np.ndarray:
        return self.values.copy()

    def zero_grad(self) -> None:
        self.grad = None

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    def __add__(self, other): return add(self, other)
    def __radd__(self, other): return add(other, self)
    def __sub__(self, other): return sub(self, other)
    def __rsub__(self, other): return sub(other, self)
    def __mul__(self, other): return mul(self, other)
    def __rmul__(self, other): return mul(other, self)
    def __neg__(self): return neg(self)
    def __matmul__(self, other): return matmul(self, other)

    def sum(self, axis: Optional[int] = None) -> "Tensor":
        return tensor_sum(self, axis)

    def reshape(self, *shape: int) -> "Tensor":
        return reshape(self, shape)

    @property
    def T(self) -> "Tensor":
        return transpose(self)


def as_tensor(value: Union["Tensor", ArrayLike]) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


def _result(op: str, data: np.ndarray, parents: Sequence[Tensor], backward: GradFn) -> Tensor:
    if not np.all(np.isfinite(data)):
        raise NumericalError(f"{op} produced non-finite values")
    requires_grad = any(p.requires_grad for p in parents)
    node = _Node(op, tuple(parents), backward) if requires_grad else None
    return Tensor(data, requires_grad=requires_grad, _node=node)


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad.reshape(shape)


def add(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    return _result(
        "add", a.values + b.values, (a, b),
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(g, b.shape)),
    )


def sub(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    return _result(
        "sub", a.values - b.values, (a, b),
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)),
    )


def mul(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    av, bv = a.values, b.values
    return _result(
        "mul", av * bv, (a, b),
        lambda g: (_unbroadcast(g * bv, a.shape), _unbroadcast(g * av, b.shape)),
    )


def neg(a) -> Tensor:
    a = as_tensor(a)
    return _result("neg", -a.values, (a,), lambda g: (-g,))


def matmul(a, b) -> Tensor:
    """Matrix product of an m×k and a k×n tensor."""
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply shapes {a.shape} and {b.shape}")
    av, bv = a.values, b.values
    return _result("matmul", av @ bv, (a, b), lambda g: (g @ bv.T, av.T @ g))


def tanh(a) -> Tensor:
    a = as_tensor(a)
    out = np.tanh(a.values)
    return _result("tanh", out, (a,), lambda g: (g * (1.0 - out ** 2),))


def exp(a) -> Tensor:
    a = as_tensor(a)
    out = np.exp(a.values)
    return _result("exp", out, (a,), lambda g: (g * out,))


def log(a) -> Tensor:
    """Natural log with inputs clamped at LOG_FLOOR."""
    a = as_tensor(a)
    clamped = np.maximum(a.values, LOG_FLOOR)
    live = a.values > LOG_FLOOR
    return _result("log", np.log(clamped), (a,), lambda g: (np.where(live, g / clamped, 0.0),))


def tensor_sum(a, axis: Optional[int] = None) -> Tensor:
    a = as_tensor(a)
    shape = a.shape

    def backward(g: np.ndarray):
        if axis is None:
            return (np.broadcast_to(g, shape).copy(),)
        return (np.broadcast_to(np.expand_dims(g, axis), shape).copy(),)

    return _result("sum", np.sum(a.values, axis=axis), (a,), backward)


def reshape(a, shape: Sequence[int]) -> Tensor:
    a = as_tensor(a)
    original = a.shape
    try:
        out = a.values.reshape(tuple(shape))
    except ValueError as e:
        raise DimensionError(f"cannot reshape {original} into {tuple(shape)}") from e
    return _result("reshape", out, (a,), lambda g: (g.reshape(original),))


def transpose(a) -> Tensor:
    a = as_tensor(a)
    return _result("transpose", a.values.T, (a,), lambda g: (g.T,))


def concat(tensors: Sequence[Tensor], axis: int = -1) -> Tensor:
    parts = [as_tensor(t) for t in tensors]
    if not parts:
        raise DimensionError("concat needs at least one tensor")
    try:
        out = np.concatenate([p.values for p in parts], axis=axis)
    except ValueError as e:
        raise DimensionError(f"cannot concatenate shapes {[p.shape for p in parts]}") from e
    splits = np.cumsum([p.shape[axis] for p in parts])[:-1]
    return _result("concat", out, parts, lambda g: tuple(np.split(g, splits, axis=axis)))


def index_select(a, indices: Sequence[int], axis: int = 0) -> Tensor:
    """Pick slices along ``axis``; repeated indices accumulate gradient."""
    a = as_tensor(a)
    idx = np.asarray(indices, dtype=np.int64)
    size = a.shape[axis]
    if idx.size and (idx.min() < -size or idx.max() >= size):
        raise TargetIndexError(f"index out of range for axis {axis} of size {size}")
    shape = a.shape

    def backward(g: np.ndarray):
        grad = np.zeros(shape)
        if axis == 0:
            np.add.at(grad, idx, g)
        else:
            np.add.at(grad.T, idx, g.T)
        return (grad,)

    return _result("index_select", np.take(a.values, idx, axis=axis), (a,), backward)


def gather(a, indices: Union[int, Sequence[int]]) -> Tensor:
    """Per-row pick: a[i, indices[i]] for matrices, a[index] for vectors."""
    a = as_tensor(a)
    n = a.shape[-1] if a.ndim else 0
    if a.ndim == 1:
        index = int(indices)
        if not 0 <= index < n:
            raise TargetIndexError(f"target index {index} outside [0, {n})")

        def backward_vec(g: np.ndarray):
            grad = np.zeros(a.shape)
            grad[index] = g
            return (grad,)

        return _result("gather", a.values[index], (a,), backward_vec)
    if a.ndim != 2:
        raise DimensionError(f"gather expects a vector or matrix, got shape {a.shape}")
    idx = np.asarray(indices, dtype=np.int64)
    if idx.shape != (a.shape[0],):
        raise DimensionError(f"gather needs one index per row: {idx.shape} vs {a.shape}")
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise TargetIndexError(f"target index outside [0, {n})")
    rows = np.arange(a.shape[0])

    def backward_mat(g: np.ndarray):
        grad = np.zeros(a.shape)
        grad[rows, idx] = g
        return (grad,)

    return _result("gather", a.values[rows, idx], (a,), backward_mat)


def _check_nonempty(a: Tensor, op: str) -> None:
    if a.ndim == 0 or a.shape[-1] == 0:
        raise DimensionError(f"{op} needs a non-empty last axis, got shape {a.shape}")


def softmax(logits) -> Tensor:
    """Softmax over the last axis, stabilised by max subtraction."""
    a = as_tensor(logits)
    _check_nonempty(a, "softmax")
    shifted = a.values - a.values.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    out = e / e.sum(axis=-1, keepdims=True)
    return _result(
        "softmax", out, (a,),
        lambda g: (out * (g - (g * out).sum(axis=-1, keepdims=True)),),
    )


def log_softmax(logits) -> Tensor:
    a = as_tensor(logits)
    _check_nonempty(a, "log_softmax")
    shifted = a.values - a.values.max(axis=-1, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=-1, keepdims=True))
    out = shifted - lse
    probs = np.exp(out)
    return _result(
        "log_softmax", out, (a,),
        lambda g: (g - probs * g.sum(axis=-1, keepdims=True),),
    )


def logsumexp(a, axis: int = -1) -> Tensor:
    a = as_tensor(a)
    _check_nonempty(a, "logsumexp")
    peak = a.values.max(axis=axis, keepdims=True)
    weights = np.exp(a.values - peak)
    total = weights.sum(axis=axis, keepdims=True)
    out = (np.log(total) + peak).squeeze(axis=axis)
    probs = weights / total
    return _result("logsumexp", out, (a,), lambda g: (np.expand_dims(g, axis) * probs,))


def cross_entropy(log_probs, target_index: Union[int, Sequence[int]]) -> Tensor:
    """Negative log-likelihood of the target class(es), summed over rows."""
    picked = gather(log_probs, target_index)
    return neg(tensor_sum(picked))


def detach(a) -> Tensor:
    return Tensor(as_tensor(a).values.copy())


class Tape:
    """Topologically ordered record of the operations reachable from a tensor."""

    def __init__(self, nodes: List[Tensor]):
        self._nodes = nodes

    @classmethod
    def from_loss(cls, loss: Tensor) -> "Tape":
        order: List[Tensor] = []
        visited = set()
        stack: List[Tuple[Tensor, bool]] = [(loss, False)]
        while stack:
            tensor, expanded = stack.pop()
            if expanded:
                order.append(tensor)
                continue
            if id(tensor) in visited:
                continue
            visited.add(id(tensor))
            stack.append((tensor, True))
            if tensor._node is not None:
                for parent in reversed(tensor._node.parents):
                    if parent.requires_grad and id(parent) not in visited:
                        stack.append((parent, False))
        return cls(order)

    def __len__(self) -> int:
        return len(self._nodes)

    def __iter__(self) -> Iterator[Tensor]:
        return iter(self._nodes)

    @property
    def ops(self) -> List[str]:
        return [t._node.op if t._node is not None else "leaf" for t in self._nodes]

    def run_backward(self, seed: np.ndarray) -> None:
        if not self._nodes:
            return
        pending = {id(self._nodes[-1]): seed}
        for tensor in reversed(self._nodes):
            grad = pending.pop(id(tensor), None)
            if grad is None:
                continue
            if tensor._node is None:
                tensor.grad = grad.copy() if tensor.grad is None else tensor.grad + grad
                continue
            parent_grads = tensor._node.backward(grad)
            for parent, parent_grad in zip(tensor._node.parents, parent_grads):
                if parent_grad is None or not parent.requires_grad:
                    continue
                parent_grad = np.asarray(parent_grad, dtype=np.float64).reshape(parent.shape)
                key = id(parent)
                pending[key] = pending[key] + parent_grad if key in pending else parent_grad
        if any(t.grad is not None and not np.all(np.isfinite(t.grad)) for t in self._nodes if t.is_leaf):
            raise NumericalError("backward produced non-finite gradients")


def backward(loss: Tensor) -> None:
    """Accumulate d(loss)/d(leaf) into every reachable leaf requiring grad."""
    if loss.values.size != 1 or loss.ndim > 1:
        raise ContractError(f"backward needs a scalar loss, got shape {loss.shape}")
    if not loss.requires_grad:
        raise ContractError("loss is not on the tape: nothing requires grad")
    tape = Tape.from_loss(loss)
    logger.debug(f"Backward over {len(tape)} tape entries")
    tape.run_backward(np.ones(loss.shape))
