"""The optimization loop.

Each step pairs one supervised batch with one unsupervised batch; the shorter
list of batches is cycled so every epoch covers both sets at least once.
Discriminative models only ever see supervised batches.
"""

import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Sequence, TypeVar, Union

import numpy as np

from src.autodiff.optim import OptimizerConfig, build_optimizer
from src.autodiff.tensor import backward
from src.config import TrainConfig
from src.data.records import Dataset
from src.errors import ContractError, NumericalError
from src.models.base import DenominalModel
from src.models.estimators import resolve_estimator
from src.models.objectives import LossTerms, loss_terms, supervised_loss
from src.models.persistence import save_model

logger = logging.getLogger(__name__)

T = TypeVar("T")
CheckpointCallback = Callable[[int, DenominalModel], None]


@dataclass
class EpochStats:
    epoch: int
    supervised: float
    unsupervised: float
    total: float
    grad_norm: float
    steps: int


@dataclass
class TrainingReport:
    model_kind: str
    estimator: str
    epochs: List[EpochStats] = field(default_factory=list)
    wall_time: float = 0.0
    checkpoint: Optional[str] = None

    @property
    def losses(self) -> List[float]:
        return [e.total for e in self.epochs]

    def to_jsonl(self, path: Union[str, Path]) -> Path:
        """One JSON object per epoch, then a summary line."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = [json.dumps(asdict(e)) for e in self.epochs]
        lines.append(json.dumps({"summary": True, "model_kind": self.model_kind, "estimator": self.estimator,
                                 "epochs": len(self.epochs), "wall_time": self.wall_time,
                                 "checkpoint": self.checkpoint}))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path


def _batches(items: Sequence[T], size: int, rng: np.random.Generator) -> List[List[T]]:
    if not items:
        return []
    order = rng.permutation(len(items))
    return [[items[i] for i in order[start:start + size]] for start in range(0, len(items), size)]


def _step_loss(model: DenominalModel, sup, unsup, config: TrainConfig, estimator) -> LossTerms:
    if not model.kind.generative:
        return LossTerms(supervised_loss(model, sup, config.soft_targets), None, 1.0)
    return loss_terms(model, sup, unsup, config.lam, estimator, config.soft_targets)


def train(model: DenominalModel, dataset: Dataset, config: TrainConfig,
          on_checkpoint: Optional[CheckpointCallback] = None,
          checkpoint_dir: Optional[Union[str, Path]] = None) -> TrainingReport:
    """Optimize ``model`` in place on ``dataset``.

    Raises:
        ContractError: nothing to train on.
        NumericalError: a non-finite loss or gradient, naming epoch, step and batch.
    """
    config.validate()
    generative = model.kind.generative
    supervised = list(dataset.supervised)
    unsupervised = list(dataset.unsupervised) if generative else []
    if not supervised and not unsupervised:
        raise ContractError(f"no training data for a {model.kind.value} model")

    rng = np.random.default_rng(config.seed)
    estimator = None
    if generative:
        estimator = resolve_estimator(config.estimator, model, limit=config.enumeration_limit,
                                      samples=config.samples, seed=config.seed + 1, decay=config.baseline_decay)
    optimizer = build_optimizer(model.params, OptimizerConfig(kind=config.optimizer,
                                                              learning_rate=config.learning_rate))
    report = TrainingReport(model.kind.value, getattr(estimator, "name", "none"))
    start = time.perf_counter()
    logger.info(f"Training {model.kind.value} model: {len(supervised)} supervised, "
                f"{len(unsupervised)} unsupervised, {config.epochs} epochs")

    for epoch in range(1, config.epochs + 1):
        sup_batches = _batches(supervised, config.supervised_batch_size, rng)
        unsup_batches = _batches(unsupervised, config.unsupervised_batch_size, rng)
        steps = max(len(sup_batches), len(unsup_batches))
        totals = {"supervised": 0.0, "unsupervised": 0.0, "total": 0.0}
        grad_sq = 0.0
        for step in range(steps):
            sup = sup_batches[step % len(sup_batches)] if sup_batches else []
            unsup = unsup_batches[step % len(unsup_batches)] if unsup_batches else []
            optimizer.zero_grad()
            try:
                terms = _step_loss(model, sup, unsup, config, estimator)
                loss = terms.total
                backward(loss)
            except NumericalError as e:
                batch = [str(x.utterance) for x in sup] + [str(u) for u in unsup]
                raise NumericalError(f"epoch {epoch}, step {step}: {e}; batch {batch[:8]}") from e
            if terms.supervised is not None:
                totals["supervised"] += terms.supervised.item()
            if terms.unsupervised is not None:
                totals["unsupervised"] += terms.unsupervised.item()
            totals["total"] += loss.item()
            norm = model.params.grad_norm()
            grad_sq += norm ** 2
            optimizer.step()
            logger.debug(f"epoch {epoch} step {step}: loss {loss.item():.4f}, grad norm {norm:.4f}")

        stats = EpochStats(epoch, totals["supervised"], totals["unsupervised"], totals["total"],
                           math.sqrt(grad_sq / max(steps, 1)), steps)
        report.epochs.append(stats)
        logger.info(f"Epoch {epoch}/{config.epochs}: L={stats.total:.4f} S={stats.supervised:.4f} "
                    f"U={stats.unsupervised:.4f} |g|={stats.grad_norm:.4f}")

        if config.checkpoint_every and epoch % config.checkpoint_every == 0:
            if on_checkpoint is not None:
                on_checkpoint(epoch, model)
            if checkpoint_dir is not None:
                save_model(Path(checkpoint_dir) / f"epoch-{epoch:04d}.ckpt.json", model, {"epoch": epoch})

    report.wall_time = time.perf_counter() - start
    if checkpoint_dir is not None:
        final = save_model(Path(checkpoint_dir) / "model.ckpt.json", model,
                           {"epoch": config.epochs, "train_config": config.as_dict()})
        report.checkpoint = str(final)
    logger.info(f"Training finished in {report.wall_time:.1f}s")
    return report
