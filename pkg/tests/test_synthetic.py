import numpy as np

from src.data.relations import RELATION_ORDER, RelationType
from src.synthetic import (
    dataset_spec,
    dataset_tokens,
    frame_structured_benchmark,
    random_embeddings,
    relation_deterministic_dataset,
    step_series,
    toy_speaker,
)


def test_random_embeddings_cover_relation_words():
    table = random_embeddings(["porch"], dim=4, seed=1)
    assert table.dim == 4
    assert all(r.head_word in table for r in RELATION_ORDER)
    np.testing.assert_array_equal(table.embed("porch"), random_embeddings(["porch"], dim=4, seed=1).embed("porch"))


def test_relation_is_fixed_by_context():
    dataset = relation_deterministic_dataset(n_denominals=3, n_contexts=16, seed=2)
    assert len(dataset.supervised) == 48
    for example in dataset.supervised:
        index = int(example.utterance.context[3:]) % 8
        assert example.relation is RELATION_ORDER[index]
        assert example.gold_verbs == [f"verb{index}"]


def test_frame_benchmark_layout():
    dataset = frame_structured_benchmark(n_denominals=4, contexts_per_cluster=2, seed=0)
    assert len(dataset.supervised) + len(dataset.unsupervised) == 2 * 2 * 2 * 4
    for example in dataset.supervised:
        assert sorted(votes for _, votes in example.gold) == [1, 3]
        expected = RelationType.LOCATUM_ON if example.utterance.context.startswith("c0") else RelationType.INSTRUMENT
        assert example.relation is expected
    assert frame_structured_benchmark(n_denominals=4, contexts_per_cluster=2, unsupervised_share=0.0).unsupervised == ()


def test_dataset_spec_and_tokens():
    dataset = frame_structured_benchmark(n_denominals=2, contexts_per_cluster=1, unsupervised_share=0.0)
    spec = dataset_spec(dataset, frames=3)
    assert spec.frames == 3
    assert spec.denominals == ("n0", "n1")
    assert set(spec.verbs) <= set(dataset_tokens(dataset))


def test_toy_speaker_samples_are_distinct():
    speaker = toy_speaker(seed=4)
    np.testing.assert_allclose(speaker.denominal_table.sum(axis=1), 1.0)
    sample = speaker.sample(4, seed=4)
    assert len(sample) == len(set(sample)) == 4
    assert len(speaker.interpretations) == 3 * 2


def test_step_series_counts():
    series = step_series(n_years=10, change_at=5, per_year=100, seed=0)
    np.testing.assert_array_equal(series.noun_counts + series.verb_counts, np.full(10, 100))
    assert series.years[0] == 1800
