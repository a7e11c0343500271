import numpy as np
import pytest

from src.data.records import Interpretation, Utterance
from src.data.relations import RelationType
from src.errors import ContractError
from src.inference import (
    FrameSampleConfig,
    RankedList,
    comprehend,
    export_frame_posteriors,
    merge_rankings,
    predict_future_usage,
    produce,
)
from src.inference.tasks import comprehension_scores, production_scores

ON = RelationType.LOCATUM_ON
PORCH = Utterance("d1", "c2")


class TestRankedList:
    def test_ties_broken_lexicographically(self):
        ranked = RankedList.from_scores(["b", "a", "c"], [0.25, 0.25, 0.5])
        assert ranked.items == ("c", "a", "b")
        assert ranked.rank_of("b") == 3
        assert ranked.rank_of("z") == 0

    def test_top(self):
        ranked = RankedList.from_scores(["x", "y"], [0.1, 0.9])
        assert ranked.top(1).items == ("y",)
        with pytest.raises(ContractError):
            ranked.top(0)

    def test_merge_keeps_maximum_score(self):
        first = RankedList.from_scores(["a", "b"], [0.5, 0.2])
        second = RankedList.from_scores(["b", "c"], [0.6, 0.1])
        merged = merge_rankings([first, second], limit=2)
        assert merged.items == ("b", "a")
        assert merged.scores == (0.6, 0.5)

    def test_to_frame(self):
        frame = RankedList.from_scores(["x", "y"], [0.1, 0.9]).to_frame()
        assert list(frame.columns) == ["rank", "item", "score"]
        assert frame["item"].tolist() == ["y", "x"]


class TestComprehension:
    def test_returns_k_interpretations(self, make_model):
        ranking = comprehend(make_model("partial", seed=2), PORCH, 5)
        assert len(ranking) == 5
        assert all(isinstance(i, Interpretation) for i in ranking.items)
        assert list(ranking.scores) == sorted(ranking.scores, reverse=True)

    def test_scores_form_a_distribution(self, make_model):
        scores = comprehension_scores(make_model("full", frames=3, seed=1), PORCH)
        assert scores.shape == (3, 8)
        assert scores.sum() == pytest.approx(1.0)

    def test_single_frame_reduces_to_listener_product(self, make_model):
        model = make_model("full", frames=1, seed=5)
        posterior = model.listener_posterior(PORCH)
        np.testing.assert_allclose(comprehension_scores(model, PORCH),
                                   np.outer(posterior.verb, posterior.relation), atol=1e-12)

    def test_k_larger_than_space(self, make_model):
        assert len(comprehend(make_model("partial"), PORCH, 100)) == 3 * 8

    def test_invalid_k(self, make_model):
        with pytest.raises(ContractError):
            comprehend(make_model("partial"), PORCH, 0)


class TestProduction:
    def test_scores_form_a_distribution(self, make_model):
        for kind in ("discriminative", "partial", "full"):
            scores = production_scores(make_model(kind, seed=3), Interpretation("v0", ON))
            assert scores.shape == (4, 4)
            assert scores.sum() == pytest.approx(1.0)

    def test_top_k(self, make_model):
        model = make_model("full", seed=3)
        interp = Interpretation("v2", RelationType.INSTRUMENT)
        ranking = produce(model, interp, 3)
        assert len(ranking) == 3
        scores = production_scores(model, interp)
        assert ranking.scores[0] == pytest.approx(scores.max())

    def test_candidates_restrict_the_pool(self, make_model):
        pool = [Utterance("d0", "c0"), Utterance("d3", "c1")]
        ranking = produce(make_model("partial"), Interpretation("v1", ON), 5, candidates=pool)
        assert set(ranking.items) == set(pool)

    def test_empty_candidates(self, make_model):
        with pytest.raises(ContractError):
            produce(make_model("partial"), Interpretation("v1", ON), 2, candidates=[])

    def test_sampled_frames(self, make_model):
        model = make_model("full", frames=2, seed=3)
        frames = FrameSampleConfig(mode="sampled", n_samples=200, seed=1)
        weights = frames.weights(model.frame_prior)
        assert weights.sum() == pytest.approx(1.0)
        scores = production_scores(model, Interpretation("v0", ON), frames)
        assert scores.sum() == pytest.approx(1.0)

    def test_invalid_frame_mode(self):
        with pytest.raises(ContractError):
            FrameSampleConfig(mode="gibbs")


class TestFutureUsage:
    def test_union_is_deduplicated(self, make_model):
        model = make_model("partial", seed=7)
        interps = [Interpretation("v0", ON), Interpretation("v1", ON), Interpretation("v0", RelationType.GOAL)]
        ranking = predict_future_usage(model, interps, 6)
        assert len(ranking) == len(set(ranking.items)) <= 6

    def test_no_interpretations(self, make_model):
        assert len(predict_future_usage(make_model("partial"), [], 3)) == 0

    def test_invalid_m(self, make_model):
        with pytest.raises(ContractError):
            predict_future_usage(make_model("partial"), [Interpretation("v0", ON)], 0)


class TestFramePosteriors:
    def test_export(self, make_model):
        frame = export_frame_posteriors(make_model("full", frames=3), [PORCH, Utterance("d0", "c0")])
        assert list(frame.columns) == ["denominal", "context", "frame_0", "frame_1", "frame_2"]
        np.testing.assert_allclose(frame[["frame_0", "frame_1", "frame_2"]].sum(axis=1), 1.0)

    def test_only_full_models(self, make_model):
        with pytest.raises(ContractError):
            export_frame_posteriors(make_model("partial"), [PORCH])
