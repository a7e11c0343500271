"""Configuration management for noun2verb.

This module handles environment variable loading, validation, and provides
centralized configuration for models, training, evaluation and change-point
detection. Training settings can also come from a flat ``key=value`` file.
"""

import os
import logging
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Optional, Union

from dotenv import dotenv_values, load_dotenv

from src.errors import ContractError, FormatError

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger(__name__)

ENV_PREFIX = "NOUN2VERB_"


def _parse(raw: Optional[str], default: Any, cast: Callable[[str], Any], name: str, strict: bool) -> Any:
    """Cast a raw string; on failure raise (strict) or warn and keep the default."""
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except ValueError:
        if strict:
            raise FormatError(f"invalid value '{raw}' for {name}")
        logger.warning(f"Invalid {name} value '{raw}', using default {default}")
        return default


def _as_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(raw)


def _env(name: str) -> Optional[str]:
    return os.getenv(f"{ENV_PREFIX}{name}")


@dataclass
class ModelConfig:
    """Network shape shared by the three model classes."""

    hidden_size: int = 128
    frames: int = 16
    embedding_dim: int = 300
    init_seed: int = 0

    @classmethod
    def from_env(cls) -> "ModelConfig":
        return cls(
            hidden_size=_parse(_env("HIDDEN_SIZE"), 128, int, "hidden_size", strict=False),
            frames=_parse(_env("FRAMES"), 16, int, "frames", strict=False),
            embedding_dim=_parse(_env("EMBEDDING_DIM"), 300, int, "embedding_dim", strict=False),
            init_seed=_parse(_env("INIT_SEED"), 0, int, "init_seed", strict=False),
        )

    def validate(self) -> None:
        if self.hidden_size < 1:
            raise ContractError("hidden_size must be positive")
        if self.frames < 1:
            raise ContractError("frames (K) must be at least 1")
        if self.embedding_dim < 1:
            raise ContractError("embedding_dim must be positive")


@dataclass
class TrainConfig:
    """Optimization settings. ``seed`` has no default on purpose."""

    seed: int
    epochs: int = 50
    supervised_batch_size: int = 32
    unsupervised_batch_size: int = 32
    lam: float = 1.0
    learning_rate: float = 1e-3
    optimizer: str = "adam"
    estimator: str = "auto"
    samples: int = 64
    enumeration_limit: int = 10_000
    checkpoint_every: int = 0
    soft_targets: bool = False
    baseline_decay: float = 0.9

    # keys accepted in config files / environment, mapped onto field casts
    _KEYS = {
        "seed": int,
        "epochs": int,
        "supervised_batch_size": int,
        "unsupervised_batch_size": int,
        "lambda": float,
        "learning_rate": float,
        "optimizer": str,
        "estimator": str,
        "samples": int,
        "enumeration_limit": int,
        "checkpoint_every": int,
        "soft_targets": _as_bool,
        "baseline_decay": float,
    }

    @classmethod
    def from_mapping(cls, values: Mapping[str, Optional[str]], strict: bool = True,
                     overrides: Optional[Dict[str, Any]] = None) -> "TrainConfig":
        """Build from string values keyed as in a config file.

        Raises:
            FormatError: unknown key or unparsable value (strict mode).
            ContractError: the seed is missing.
        """
        unknown = sorted(set(values) - set(cls._KEYS))
        if unknown:
            raise FormatError(f"unknown training config keys: {', '.join(unknown)}")
        defaults = {f.name: f.default for f in fields(cls) if f.name != "seed"}
        parsed: Dict[str, Any] = {}
        for key, cast in cls._KEYS.items():
            attr = "lam" if key == "lambda" else key
            parsed[attr] = _parse(values.get(key), defaults.get(attr), cast, key, strict)
        for key, value in (overrides or {}).items():
            if value is not None:
                parsed["lam" if key == "lambda" else key] = value
        if parsed.get("seed") is None:
            raise ContractError("training config requires an explicit seed")
        config = cls(**parsed)
        config.validate()
        return config

    @classmethod
    def from_file(cls, path: Union[str, Path], overrides: Optional[Dict[str, Any]] = None) -> "TrainConfig":
        path = Path(path)
        if not path.is_file():
            raise FormatError("config file not found", path=str(path))
        logger.info(f"Loading training configuration from {path}")
        try:
            return cls.from_mapping(dotenv_values(path), strict=True, overrides=overrides)
        except FormatError as e:
            raise FormatError(str(e), path=str(path)) from e

    @classmethod
    def from_env(cls, overrides: Optional[Dict[str, Any]] = None) -> "TrainConfig":
        values = {key: _env(key.upper()) for key in cls._KEYS}
        return cls.from_mapping({k: v for k, v in values.items() if v is not None}, strict=False,
                                overrides=overrides)

    def validate(self) -> None:
        positive = ("supervised_batch_size", "unsupervised_batch_size", "learning_rate", "samples",
                    "enumeration_limit")
        for name in positive:
            if getattr(self, name) <= 0:
                raise ContractError(f"{name} must be positive")
        if self.epochs < 0 or self.checkpoint_every < 0:
            raise ContractError("epochs and checkpoint_every must be non-negative")
        if self.lam < 0:
            raise ContractError("lambda must be non-negative")
        if self.estimator not in ("auto", "exact", "score"):
            raise ContractError("estimator must be one of auto, exact, score")
        if self.optimizer not in ("adam", "sgd"):
            raise ContractError("optimizer must be adam or sgd")
        if not 0.0 <= self.baseline_decay < 1.0:
            raise ContractError("baseline_decay must lie in [0, 1)")

    def as_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class EvaluationConfig:
    """Evaluation protocol settings."""

    k_max: int = 5
    kl_epsilon: float = 1e-6
    subset_size: int = 55
    subsets: int = 100
    folds: int = 12

    @classmethod
    def from_env(cls) -> "EvaluationConfig":
        return cls(
            k_max=_parse(_env("K_MAX"), 5, int, "k_max", strict=False),
            kl_epsilon=_parse(_env("KL_EPSILON"), 1e-6, float, "kl_epsilon", strict=False),
            subset_size=_parse(_env("SUBSET_SIZE"), 55, int, "subset_size", strict=False),
            subsets=_parse(_env("SUBSETS"), 100, int, "subsets", strict=False),
            folds=_parse(_env("FOLDS"), 12, int, "folds", strict=False),
        )

    def validate(self) -> None:
        if self.k_max < 1:
            raise ContractError("k_max must be at least 1")
        if self.kl_epsilon < 0:
            raise ContractError("kl_epsilon must be non-negative")
        if self.folds < 2:
            raise ContractError("folds must be at least 2")


@dataclass
class ChangePointConfig:
    """Change-point detection settings."""

    permutations: int = 1000
    alpha: float = 0.05
    min_segment: int = 5
    theta_f: int = 500
    per_year: bool = False

    @classmethod
    def from_env(cls) -> "ChangePointConfig":
        return cls(
            permutations=_parse(_env("PERMUTATIONS"), 1000, int, "permutations", strict=False),
            alpha=_parse(_env("ALPHA"), 0.05, float, "alpha", strict=False),
            min_segment=_parse(_env("MIN_SEGMENT"), 5, int, "min_segment", strict=False),
            theta_f=_parse(_env("THETA_F"), 500, int, "theta_f", strict=False),
            per_year=_parse(_env("THETA_F_PER_YEAR"), False, _as_bool, "per_year", strict=False),
        )

    def validate(self) -> None:
        if self.permutations < 1:
            raise ContractError("permutations must be at least 1")
        if not 0.0 < self.alpha <= 1.0:
            raise ContractError("alpha must lie in (0, 1]")
        if self.min_segment < 1:
            raise ContractError("min_segment must be at least 1")
        if self.theta_f < 0:
            raise ContractError("theta_f must be non-negative")


@dataclass
class LoggingConfig:
    level: str = "INFO"

    @classmethod
    def from_env(cls) -> "LoggingConfig":
        return cls(level=(_env("LOG_LEVEL") or "INFO").upper())

    def validate(self) -> None:
        valid_log_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if self.level not in valid_log_levels:
            raise ContractError(f"log level must be one of {valid_log_levels}")


@dataclass
class Config:
    """Main configuration container."""

    model: ModelConfig
    evaluation: EvaluationConfig
    changepoint: ChangePointConfig
    logging: LoggingConfig

    @classmethod
    def load(cls) -> "Config":
        """Load and validate all configuration from environment variables.

        Raises:
            ContractError: If a configured value is out of range.
        """
        logger.info("Loading configuration from environment variables...")
        try:
            config = cls(
                model=ModelConfig.from_env(),
                evaluation=EvaluationConfig.from_env(),
                changepoint=ChangePointConfig.from_env(),
                logging=LoggingConfig.from_env(),
            )
            config.model.validate()
            config.evaluation.validate()
            config.changepoint.validate()
            config.logging.validate()
            logger.info("Configuration loaded successfully")
            logger.debug(f"Model: hidden={config.model.hidden_size} K={config.model.frames}")
            return config
        except ValueError as e:
            logger.error(f"Configuration error: {e}")
            raise


# Global configuration instance (lazy-loaded)
_config: Optional[Config] = None


def get_config() -> Config:
    """Get the global configuration instance, loading it on first access."""
    global _config
    if _config is None:
        _config = Config.load()
    return _config


def reload_config() -> Config:
    """Reload configuration from environment variables (re-reads .env)."""
    global _config
    load_dotenv(override=True)
    _config = Config.load()
    return _config
