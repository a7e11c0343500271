import json

import numpy as np
import pytest

from src.autodiff.optim import OptimizerConfig, build_optimizer
from src.autodiff.tensor import backward, neg
from src.config import ModelConfig, TrainConfig
from src.data.records import Dataset
from src.errors import ContractError
from src.evaluation.baselines import FrequencyBaseline
from src.evaluation.protocols import evaluate_model
from src.models import bound_for_posterior, build_model, elbo, exact_speaker_posterior, log_marginal_likelihood
from src.models.heads import HeadSpec
from src.synthetic import (
    dataset_spec,
    dataset_tokens,
    frame_interaction_benchmark,
    random_embeddings,
    relation_deterministic_dataset,
    toy_speaker,
    toy_speaker_dataset,
)
from src.training import cross_validate, mean_metrics, remove_leakage, train


def quick_config(**changes) -> TrainConfig:
    values = dict(seed=0, epochs=3, learning_rate=0.01, supervised_batch_size=2, unsupervised_batch_size=2,
                  estimator="exact")
    values.update(changes)
    return TrainConfig(**values)


def snapshot(model):
    return {p.name: p.values.copy() for p in model.params}


class TestTrain:
    def test_zero_epochs_leave_parameters_untouched(self, make_model, toy_dataset):
        model = make_model("full")
        before = snapshot(model)
        report = train(model, toy_dataset, quick_config(epochs=0))
        assert report.epochs == []
        for name, values in snapshot(model).items():
            np.testing.assert_array_equal(values, before[name])

    @pytest.mark.parametrize("kind", ["discriminative", "partial", "full"])
    def test_loss_decreases(self, make_model, toy_dataset, kind):
        model = make_model(kind, seed=1)
        report = train(model, toy_dataset, quick_config(epochs=40, learning_rate=0.05))
        assert len(report.epochs) == 40
        assert report.losses[-1] < report.losses[0]

    def test_same_seed_same_run(self, make_model, toy_dataset):
        first, second = make_model("partial"), make_model("partial")
        losses_a = train(first, toy_dataset, quick_config(estimator="score", samples=8)).losses
        losses_b = train(second, toy_dataset, quick_config(estimator="score", samples=8)).losses
        assert losses_a == losses_b
        for name, values in snapshot(first).items():
            np.testing.assert_array_equal(values, second.params[name].values)

    def test_discriminative_ignores_unsupervised_set(self, make_model, toy_dataset):
        with_unlabelled, without = make_model("discriminative"), make_model("discriminative")
        train(with_unlabelled, toy_dataset, quick_config())
        train(without, Dataset(toy_dataset.supervised, ()), quick_config())
        for name, values in snapshot(with_unlabelled).items():
            np.testing.assert_array_equal(values, without.params[name].values)

    def test_discriminative_needs_supervision(self, make_model, toy_dataset):
        with pytest.raises(ContractError):
            train(make_model("discriminative"), Dataset((), toy_dataset.unsupervised), quick_config())

    def test_generative_trains_on_unlabelled_data_alone(self, make_model, toy_dataset):
        report = train(make_model("full"), Dataset((), toy_dataset.unsupervised), quick_config())
        assert all(e.supervised == 0.0 for e in report.epochs)
        assert all(e.unsupervised > 0.0 for e in report.epochs)

    def test_checkpoints(self, make_model, toy_dataset, tmp_path):
        seen = []
        report = train(make_model("partial"), toy_dataset, quick_config(epochs=4, checkpoint_every=2),
                       on_checkpoint=lambda epoch, model: seen.append(epoch), checkpoint_dir=tmp_path)
        assert seen == [2, 4]
        assert (tmp_path / "epoch-0002.ckpt.json").is_file()
        assert report.checkpoint == str(tmp_path / "model.ckpt.json")

    def test_metrics_log(self, make_model, toy_dataset, tmp_path):
        report = train(make_model("partial"), toy_dataset, quick_config(epochs=2))
        lines = report.to_jsonl(tmp_path / "metrics.jsonl").read_text().splitlines()
        assert [json.loads(line)["epoch"] for line in lines[:2]] == [1, 2]
        assert json.loads(lines[-1])["summary"] is True


class TestSemiSupervisedConvergence:
    def test_listener_approaches_speaker_posterior(self):
        speaker, data = toy_speaker_dataset(8, seed=0)
        spec = HeadSpec(speaker.spec.denominals, speaker.spec.contexts, speaker.spec.verbs, 2)
        tokens = list(spec.denominals + spec.contexts + spec.verbs)
        embeddings = random_embeddings(tokens, dim=8, seed=0)
        model = build_model("full", spec, embeddings, ModelConfig(hidden_size=16, frames=2, embedding_dim=8),
                            priors=speaker.priors(frames=2))
        utterances = list(data.unsupervised)
        assert utterances

        def gap():
            return sum(log_marginal_likelihood(model, u) - bound_for_posterior(model, u) for u in utterances)

        before = gap()
        listener = set(model.parameter_groups()["listener"])
        optimizer = build_optimizer(model.params, OptimizerConfig(kind="adam", learning_rate=0.05))
        for _ in range(150):
            optimizer.zero_grad()
            backward(neg(elbo(model, utterances)))
            for param in model.params:
                if param.name not in listener:
                    param.tensor.zero_grad()
            optimizer.step()
        after = gap()
        assert after >= -1e-9
        assert after < before

    def test_joint_training_matches_the_exact_posterior(self):
        speaker = toy_speaker(n_denominals=100, n_contexts=100, seed=0)
        data = Dataset((), tuple(speaker.sample(8, seed=0)))
        spec = HeadSpec(speaker.spec.denominals, speaker.spec.contexts, speaker.spec.verbs, 2)
        embeddings = random_embeddings(list(spec.denominals + spec.contexts + spec.verbs), dim=8, seed=0)
        model = build_model("full", spec, embeddings, ModelConfig(hidden_size=16, frames=2, embedding_dim=8),
                            priors=speaker.priors(frames=2))
        distances = []

        def total_variation(epoch, trained):
            gaps = [0.5 * np.abs(trained.listener_posterior(u).joint().ravel()
                                 - exact_speaker_posterior(trained, u)).sum() for u in data.unsupervised]
            distances.append(float(np.mean(gaps)))

        config = TrainConfig(seed=0, epochs=500, learning_rate=0.05, optimizer="adam", estimator="exact",
                             unsupervised_batch_size=8, checkpoint_every=50)
        report = train(model, data, config, on_checkpoint=total_variation)
        assert len(distances) == 10
        assert distances[-1] < 0.1
        assert report.losses[-1] < 0.5 * report.losses[0]

    @pytest.mark.parametrize("kind", ["partial", "full"])
    def test_full_batch_descent_settles(self, make_model, toy_dataset, kind):
        config = TrainConfig(seed=0, epochs=300, learning_rate=0.01, optimizer="sgd", estimator="exact",
                             supervised_batch_size=64, unsupervised_batch_size=64)
        report = train(make_model(kind, seed=1), toy_dataset, config)
        assert np.all(np.diff(report.losses[100:]) <= 1e-8)


class TestRelationAccuracy:
    @pytest.mark.parametrize("kind", ["discriminative", "partial", "full"])
    def test_relation_determined_by_context(self, kind):
        dataset = relation_deterministic_dataset(n_denominals=12, n_contexts=16, seed=0)
        cut = len(dataset.supervised) * 3 // 4
        train_set = Dataset(dataset.supervised[:cut], ())
        test_set = Dataset(dataset.supervised[cut:], ())
        embeddings = random_embeddings(dataset_tokens(dataset), dim=16, seed=0)
        model = build_model(kind, dataset_spec(dataset, frames=2), embeddings,
                            ModelConfig(hidden_size=32, frames=2, embedding_dim=16, init_seed=0))
        train(model, train_set, TrainConfig(seed=0, epochs=120, learning_rate=0.03, estimator="exact"))
        accuracy = evaluate_model(model, test_set).metric("relation_accuracy").value
        assert accuracy >= 0.96


class TestCrossValidation:
    def test_folds(self, make_model, toy_dataset):
        results = cross_validate(lambda fold, data: make_model("partial", seed=fold), toy_dataset, 2,
                                 quick_config(epochs=2))
        assert [r.fold for r in results] == [0, 1]
        assert sum(r.test_size for r in results) == len(toy_dataset.supervised)
        means = mean_metrics(results)
        assert 0.0 <= means["comprehension_top1"][0] <= 1.0

    def test_target_verbs_stay_out_of_training_folds(self, make_model, toy_dataset):
        seen = []

        def factory(fold, data):
            seen.append(data)
            return make_model("partial", seed=fold)

        results = cross_validate(factory, toy_dataset, 2, quick_config(epochs=1), exclude_verbs=["v1"])
        assert sum(r.test_size for r in results) == len(toy_dataset.supervised)
        for data in seen:
            assert all("v1" not in e.gold_verbs for e in data.supervised)

    def test_fold_failures_name_the_fold(self, toy_dataset):
        def broken(fold, data):
            raise ContractError("no model")

        with pytest.raises(ContractError, match="fold 0"):
            cross_validate(broken, toy_dataset, 2, quick_config())

    def test_remove_leakage(self, toy_dataset):
        test = Dataset(toy_dataset.supervised[:1], ())
        train_set = Dataset(toy_dataset.supervised, toy_dataset.unsupervised)
        cleaned = remove_leakage(train_set, test)
        assert all(e.utterance.denominal != "d0" for e in cleaned.supervised)
        assert cleaned.unsupervised == toy_dataset.unsupervised


def _held_out(utterance) -> bool:
    """One denominal per context: d == (c + cluster) mod 4."""
    cluster, c = int(utterance.context[-2]), int(utterance.context[-1])
    return int(utterance.denominal[-1]) == (c + cluster) % 4


class TestModelOrdering:
    """Held-out pairs stay unlabelled in X_u; every token has labelled pairs."""

    @pytest.fixture(scope="class")
    def split(self):
        dataset = frame_interaction_benchmark()
        test = tuple(e for e in dataset.supervised if _held_out(e.utterance))
        train_set = Dataset(tuple(e for e in dataset.supervised if not _held_out(e.utterance)),
                            tuple(e.utterance for e in test))
        return train_set, Dataset(test, ())

    @pytest.fixture(scope="class")
    def trained(self, split):
        train_set, _ = split
        embeddings = random_embeddings(dataset_tokens(train_set), dim=4, seed=0)
        spec = dataset_spec(train_set, frames=2)
        config = TrainConfig(seed=0, epochs=300, learning_rate=0.02, estimator="exact", soft_targets=True,
                             supervised_batch_size=64, unsupervised_batch_size=64)
        models = {}
        for kind in ("discriminative", "partial", "full"):
            models[kind] = []
            for seed in range(3):
                model = build_model(kind, spec, embeddings,
                                    ModelConfig(hidden_size=16, frames=2, embedding_dim=4, init_seed=seed))
                train(model, train_set, config)
                models[kind].append(model)
        return models

    def test_split(self, split):
        train_set, test_set = split
        assert len(test_set.supervised) == 12
        assert len(train_set.supervised) == 36
        labelled = {u for e in train_set.supervised for u in (e.utterance.denominal, e.utterance.context)}
        assert all(u.denominal in labelled and u.context in labelled for u in train_set.unsupervised)

    def test_comprehension_kl_ordering(self, split, trained):
        _, test_set = split
        kl = {kind: np.mean([evaluate_model(m, test_set).metric("comprehension_kl").value for m in runs])
              for kind, runs in trained.items()}
        assert kl["full"] <= kl["partial"] <= kl["discriminative"]

    def test_every_model_beats_frequency_production(self, split, trained):
        train_set, test_set = split
        floor = evaluate_model(FrequencyBaseline(train_set), test_set).metric("production_top1").value
        assert floor == 0.5
        for kind, runs in trained.items():
            for model in runs:
                assert evaluate_model(model, test_set).metric("production_top1").value > floor, kind
