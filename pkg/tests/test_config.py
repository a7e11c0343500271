import pytest

from src.config import (
    ChangePointConfig,
    Config,
    LoggingConfig,
    ModelConfig,
    TrainConfig,
    get_config,
    reload_config,
)
from src.errors import ContractError, FormatError


class TestTrainConfig:
    def test_seed_is_required(self, monkeypatch):
        monkeypatch.delenv("NOUN2VERB_SEED", raising=False)
        with pytest.raises(ContractError):
            TrainConfig.from_env()

    def test_overrides_win_over_environment(self, monkeypatch):
        monkeypatch.setenv("NOUN2VERB_SEED", "3")
        monkeypatch.setenv("NOUN2VERB_EPOCHS", "9")
        config = TrainConfig.from_env(overrides={"epochs": 2, "lambda": 0.5})
        assert (config.seed, config.epochs, config.lam) == (3, 2, 0.5)

    def test_bad_environment_value_falls_back(self, monkeypatch):
        monkeypatch.setenv("NOUN2VERB_EPOCHS", "many")
        config = TrainConfig.from_env(overrides={"seed": 1})
        assert config.epochs == 50

    def test_from_file(self, tmp_path):
        path = tmp_path / "train.env"
        path.write_text("seed=7\nepochs=3\nlambda=0.25\nestimator=exact\nsoft_targets=yes\n")
        config = TrainConfig.from_file(path)
        assert config.seed == 7
        assert config.epochs == 3
        assert config.lam == 0.25
        assert config.estimator == "exact"
        assert config.soft_targets is True

    def test_file_with_unknown_key(self, tmp_path):
        path = tmp_path / "train.env"
        path.write_text("seed=1\nmomentum=0.9\n")
        with pytest.raises(FormatError, match="momentum"):
            TrainConfig.from_file(path)

    def test_file_with_bad_value(self, tmp_path):
        path = tmp_path / "train.env"
        path.write_text("seed=1\nepochs=ten\n")
        with pytest.raises(FormatError):
            TrainConfig.from_file(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FormatError):
            TrainConfig.from_file(tmp_path / "absent.env")

    @pytest.mark.parametrize("field,value", [
        ("lam", -1.0), ("estimator", "mcmc"), ("optimizer", "lbfgs"), ("epochs", -1), ("samples", 0),
    ])
    def test_validate_rejects(self, field, value):
        config = TrainConfig(seed=0)
        setattr(config, field, value)
        with pytest.raises(ContractError):
            config.validate()


class TestEnvironmentConfig:
    def test_defaults(self, monkeypatch):
        for name in ("HIDDEN_SIZE", "FRAMES", "PERMUTATIONS", "THETA_F", "LOG_LEVEL"):
            monkeypatch.delenv(f"NOUN2VERB_{name}", raising=False)
        config = Config.load()
        assert config.model.hidden_size == 128
        assert config.model.frames == 16
        assert config.changepoint.permutations == 1000
        assert config.changepoint.theta_f == 500
        assert config.logging.level == "INFO"

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("NOUN2VERB_FRAMES", "4")
        monkeypatch.setenv("NOUN2VERB_THETA_F_PER_YEAR", "true")
        assert ModelConfig.from_env().frames == 4
        assert ChangePointConfig.from_env().per_year is True

    def test_out_of_range_value(self, monkeypatch):
        monkeypatch.setenv("NOUN2VERB_FRAMES", "0")
        with pytest.raises(ContractError):
            Config.load()

    def test_invalid_log_level(self):
        with pytest.raises(ContractError):
            LoggingConfig(level="LOUD").validate()

    def test_global_accessors(self, monkeypatch):
        monkeypatch.setenv("NOUN2VERB_FRAMES", "3")
        config = reload_config()
        assert config.model.frames == 3
        assert get_config() is config
        monkeypatch.setenv("NOUN2VERB_FRAMES", "5")
        assert get_config().model.frames == 3
        assert reload_config().model.frames == 5
