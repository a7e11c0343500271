"""Head candidate lists, priors and listener posteriors shared by all model kinds."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np

from src.data.relations import RELATION_ORDER
from src.errors import ContractError

N_RELATIONS = len(RELATION_ORDER)


class ModelKind(str, Enum):
    DISCRIMINATIVE = "discriminative"
    PARTIAL = "partial"
    FULL = "full"

    @property
    def generative(self) -> bool:
        return self is not ModelKind.DISCRIMINATIVE


def _check_categorical(name: str, probs: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    probs = np.asarray(probs, dtype=np.float64)
    if probs.ndim != 1 or probs.size == 0:
        raise ContractError(f"{name} must be a non-empty vector")
    if np.any(probs < 0) or not np.all(np.isfinite(probs)) or abs(probs.sum() - 1.0) > tol:
        raise ContractError(f"{name} is not a valid categorical distribution")
    return probs


@dataclass(frozen=True)
class HeadSpec:
    """Candidate tokens for the D, C and V heads plus the frame cardinality K."""

    denominals: Tuple[str, ...]
    contexts: Tuple[str, ...]
    verbs: Tuple[str, ...]
    frames: int = 1

    def __post_init__(self):
        for name in ("denominals", "contexts", "verbs"):
            values = tuple(getattr(self, name))
            if not values:
                raise ContractError(f"head candidate list '{name}' is empty")
            if len(set(values)) != len(values):
                raise ContractError(f"head candidate list '{name}' has duplicates")
            object.__setattr__(self, name, values)
        if self.frames < 1:
            raise ContractError(f"frame cardinality must be at least 1, got {self.frames}")

    @property
    def relations(self) -> int:
        return N_RELATIONS

    def index(self, head: str) -> Dict[str, int]:
        return {token: i for i, token in enumerate(getattr(self, head))}

    def as_dict(self) -> Dict[str, object]:
        return {
            "denominals": list(self.denominals),
            "contexts": list(self.contexts),
            "verbs": list(self.verbs),
            "frames": self.frames,
        }

    @classmethod
    def from_vocabulary(cls, vocab, frames: int = 1) -> "HeadSpec":
        from src.lexicon.vocabulary import Role

        return cls(
            tuple(vocab.tokens_with_role(Role.NOUN)),
            tuple(vocab.tokens_with_role(Role.CONTEXT)),
            tuple(vocab.tokens_with_role(Role.VERB)),
            frames,
        )


@dataclass
class Priors:
    """Categorical priors: α factorized over the V and R heads, β over frames."""

    verb: np.ndarray
    relation: np.ndarray
    frame: np.ndarray = field(default_factory=lambda: np.ones(1))

    def __post_init__(self):
        self.verb = _check_categorical("verb prior", self.verb)
        self.relation = _check_categorical("relation prior", self.relation)
        self.frame = _check_categorical("frame prior", self.frame)
        if self.relation.size != N_RELATIONS:
            raise ContractError(f"relation prior needs {N_RELATIONS} entries, got {self.relation.size}")

    @classmethod
    def uniform(cls, n_verbs: int, n_frames: int = 1) -> "Priors":
        return cls(np.full(n_verbs, 1.0 / n_verbs), np.full(N_RELATIONS, 1.0 / N_RELATIONS),
                   np.full(n_frames, 1.0 / n_frames))

    def cell_log_prior(self) -> np.ndarray:
        """log p0 over flattened (v, r, e) cells."""
        joint = (self.verb[:, None, None] * self.relation[None, :, None] * self.frame[None, None, :])
        return np.log(joint.ravel())

    def as_dict(self) -> Dict[str, list]:
        return {"alpha_verb": self.verb.tolist(), "alpha_relation": self.relation.tolist(),
                "beta": self.frame.tolist()}


@dataclass(frozen=True)
class LatentPosterior:
    """Per-head listener categoricals; the joint is their outer product."""

    verb: np.ndarray
    relation: np.ndarray
    frame: Optional[np.ndarray] = None

    def __post_init__(self):
        _check_categorical("verb posterior", self.verb)
        _check_categorical("relation posterior", self.relation)
        if self.frame is not None:
            _check_categorical("frame posterior", self.frame)

    def joint(self) -> np.ndarray:
        """|V| × 8 (× K) array of joint probabilities."""
        joint = np.outer(self.verb, self.relation)
        if self.frame is not None:
            joint = joint[:, :, None] * self.frame[None, None, :]
        return joint


def latent_cells(n_verbs: int, n_frames: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(v, r, e) index arrays for cell = v·(8K) + r·K + e."""
    v, r, e = np.unravel_index(np.arange(n_verbs * N_RELATIONS * n_frames), (n_verbs, N_RELATIONS, n_frames))
    return v, r, e


def expansion_matrices(n_verbs: int, n_frames: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """0/1 matrices mapping per-head probabilities onto the flattened cells."""
    v, r, e = latent_cells(n_verbs, n_frames)
    cells = v.size
    ev = np.zeros((n_verbs, cells))
    er = np.zeros((N_RELATIONS, cells))
    ee = np.zeros((n_frames, cells))
    ev[v, np.arange(cells)] = 1.0
    er[r, np.arange(cells)] = 1.0
    ee[e, np.arange(cells)] = 1.0
    return ev, er, ee


def check_frame(frame: Optional[int], n_frames: int) -> int:
    if frame is None:
        return 0
    if not 0 <= frame < n_frames:
        raise ContractError(f"frame index {frame} outside [0, {n_frames})")
    return int(frame)