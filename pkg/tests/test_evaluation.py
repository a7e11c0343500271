import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.data.records import AnnotationDistribution, Dataset, Interpretation, SupervisedExample, Utterance
from src.data.relations import RelationType
from src.errors import ContractError, NumericalError
from src.evaluation import (
    ExampleScore,
    FrequencyBaseline,
    FrequencyUsageBaseline,
    RandomBaseline,
    decade_precision,
    evaluate_model,
    grouped_report,
    kl_divergence,
    mean_and_se,
    roc_auc,
    subset_kl_protocol,
    topk_accuracy,
    topk_hit,
)

ON = RelationType.LOCATUM_ON


def example(d, c, votes, relation=ON, **kwargs):
    return SupervisedExample(Utterance(d, c), tuple((Interpretation(v, relation), n) for v, n in votes), **kwargs)


@pytest.fixture
def frequency_data():
    return Dataset((
        example("carpet", "floor", [("put", 5), ("lay", 1)]),
        example("paper", "wall", [("put", 2)], source="child"),
        example("butter", "bread", [("spread", 3)], relation=RelationType.INSTRUMENT, source="adult"),
    ), (Utterance("carpet", "stair"),))


class TestKL:
    def test_golden_value(self):
        p = [0.5, 0.13, 0.31, 0.02]
        q = [0.41, 0.08, 0.16, 0.01]
        assert kl_divergence(p, q, epsilon=0.0, normalize=False) == pytest.approx(0.3812, abs=5e-4)

    def test_golden_value_with_heavier_tail(self):
        p = [0.5, 0.13, 0.31, 0.06]
        q = [0.41, 0.08, 0.16, 0.01]
        assert kl_divergence(p, q, epsilon=0.0, normalize=False) == pytest.approx(0.4749, abs=5e-4)

    def test_identical_distributions(self):
        dist = AnnotationDistribution(("a", "b"), (0.25, 0.75))
        assert kl_divergence(dist, {"a": 0.25, "b": 0.75}) == pytest.approx(0.0, abs=1e-12)

    def test_q_restricted_to_support_of_p(self):
        dist = AnnotationDistribution(("a",), (1.0,))
        assert kl_divergence(dist, {"a": 0.5, "b": 0.5}) == pytest.approx(0.0, abs=1e-12)

    def test_smoothing_handles_missing_mass(self):
        dist = AnnotationDistribution(("a", "b"), (0.5, 0.5))
        value = kl_divergence(dist, {"a": 1.0}, epsilon=1e-6)
        assert math.isfinite(value) and value > 0

    def test_zero_mass_without_smoothing(self):
        with pytest.raises(NumericalError):
            kl_divergence([0.5, 0.5], [1.0, 0.0], epsilon=0.0)

    @given(st.lists(st.tuples(st.floats(0.01, 1.0), st.floats(0.0, 1.0)), min_size=1, max_size=8))
    def test_never_negative(self, pairs):
        p = np.array([a for a, _ in pairs])
        q = np.array([b for _, b in pairs])
        assert kl_divergence(p / p.sum(), q) >= 0.0
        assert kl_divergence(p / p.sum(), p) == pytest.approx(0.0, abs=1e-9)

    def test_p_must_sum_to_one(self):
        with pytest.raises(ContractError):
            kl_divergence([0.5, 0.2], [0.5, 0.5])


class TestRankingMetrics:
    def test_topk_hit(self):
        assert topk_hit(["a", "b", "c"], {"b"}, 1) == 0
        assert topk_hit(["a", "b", "c"], {"b"}, 2) == 1
        with pytest.raises(ContractError):
            topk_hit(["a"], set(), 1)

    def test_topk_accuracy(self):
        report = topk_accuracy([["a", "b"], ["b", "a"]], [{"a"}, {"a"}], 1)
        assert report.value == 0.5
        assert report.sample_size == 2

    def test_roc_auc(self):
        curve = roc_auc([["x", "g", "y"], ["z", "g", "w"]], [{"g"}, {"g"}], k_max=3)
        assert [acc for _, acc in curve.points] == [0.0, 1.0, 1.0]
        assert curve.auc == pytest.approx(0.75)

    def test_roc_single_k_is_top1(self):
        curve = roc_auc([["g"], ["x", "g"]], [{"g"}, {"g"}], k_max=1)
        assert curve.auc == 0.5

    def test_perfect_ranking(self):
        assert roc_auc([["g", "x"]], [{"g"}], k_max=4).auc == pytest.approx(1.0)

    def test_mean_and_se(self):
        assert mean_and_se([2.0]) == (2.0, 0.0)
        mean, se = mean_and_se([1.0, 3.0])
        assert mean == 2.0
        assert se == pytest.approx(1.0)


class TestBaselines:
    def test_frequency_ranks_by_votes(self, frequency_data):
        baseline = FrequencyBaseline(frequency_data)
        assert baseline.rank_verbs(Utterance("any", "thing")).items[0] == "put"
        assert baseline.rank_relations(Utterance("any", "thing")).items[0] is ON
        assert baseline.rank_denominals(Interpretation("put", ON)).items[0] == "carpet"

    def test_frequency_top1(self, frequency_data):
        bundle = evaluate_model(FrequencyBaseline(frequency_data), frequency_data)
        assert bundle.metric("comprehension_top1").value == pytest.approx(2 / 3)
        assert bundle.metric("relation_accuracy").value == pytest.approx(2 / 3)

    def test_random_is_seeded(self):
        first = RandomBaseline(["a", "b", "c", "d"], ["x", "y"], seed=3)
        second = RandomBaseline(["a", "b", "c", "d"], ["x", "y"], seed=3)
        query = Utterance("p", "q")
        assert first.rank_verbs(query).items == second.rank_verbs(query).items

    def test_frequency_usage(self, frequency_data):
        ranking = FrequencyUsageBaseline(frequency_data).predict("carpet", 5)
        assert ranking.items == (Utterance("carpet", "floor"), Utterance("carpet", "stair"))
        assert len(FrequencyUsageBaseline(frequency_data).predict("unknown", 2)) == 0


class TestProtocols:
    def test_bundle_for_trained_model(self, make_model, toy_dataset):
        bundle = evaluate_model(make_model("full", seed=2), Dataset(toy_dataset.supervised, ()))
        names = {r.metric for r in bundle.reports}
        for task in ("comprehension", "production"):
            assert {f"{task}_top1", f"{task}_top5", f"{task}_auc", f"{task}_kl"} <= names
        assert "relation_accuracy" in names
        assert set(bundle.rocs) == {"comprehension", "production"}
        assert list(bundle.roc_frame().columns) == ["task", "k", "fraction", "accuracy"]
        for report in bundle.reports:
            if not report.metric.endswith("_kl"):
                assert 0.0 <= report.value <= 1.0

    def test_lemma_normalizer(self, frequency_data):
        test = Dataset((example("carpet", "floor", [("putting", 1)]),), ())
        plain = evaluate_model(FrequencyBaseline(frequency_data), test)
        lemmatized = evaluate_model(FrequencyBaseline(frequency_data), test,
                                    normalizer=lambda t: "put" if t == "putting" else t)
        assert plain.metric("comprehension_top1").value == 0.0
        assert lemmatized.metric("comprehension_top1").value == 1.0

    def test_grouped_by_source(self, frequency_data):
        bundle = evaluate_model(FrequencyBaseline(frequency_data), frequency_data)
        groups = grouped_report(bundle.scores["comprehension_top1"], "comprehension_top1", "source")
        assert [g.group for g in groups] == ["adult", "child", "corpus"]
        assert [g.value for g in groups] == [0.0, 1.0, 1.0]

    def test_grouped_report_needs_key(self):
        with pytest.raises(ContractError):
            grouped_report([ExampleScore(1.0, {"source": "adult"})], "m", "decade")

    def test_subset_kl(self, frequency_data):
        baseline = FrequencyBaseline(frequency_data)
        report = subset_kl_protocol(frequency_data, baseline, subset_size=2, n_subsets=10, seed=0)
        assert report.sample_size == 10
        assert report.value >= 0.0
        with pytest.raises(ContractError):
            subset_kl_protocol(frequency_data, baseline, subset_size=4)

    def test_decade_precision(self):
        a, b, c = Utterance("w", "a"), Utterance("w", "b"), Utterance("w", "c")
        gold = {"w": [(a, 1960), (b, 1990)]}
        predictions = {"w": [a, b, c, Utterance("w", "d")]}
        nxt = decade_precision(predictions, gold, {"w": 1950}, "next-decade")
        future = decade_precision(predictions, gold, {"w": 1950}, "any-future")
        assert (nxt[0].group, nxt[0].value) == ("1950", 0.25)
        assert future[0].value == 0.5

    def test_decade_precision_skips_late_words(self):
        predictions = {"w": [Utterance("w", "a")]}
        assert decade_precision(predictions, {"w": []}, {"w": 1990}) == []

    def test_empty_test_set(self, frequency_data):
        with pytest.raises(ContractError):
            evaluate_model(FrequencyBaseline(frequency_data), Dataset((), (Utterance("a", "b"),)))
