import numpy as np
import pytest

from src.errors import FormatError
from src.lexicon.embeddings import EmbeddingTable, load_embeddings
from src.lexicon.lemmas import LemmaNormalizer, load_lemma_map
from src.lexicon.vocabulary import Role, Vocabulary


class TestEmbeddings:
    def test_load_with_header(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("2 3\nPorch 1 0 0\nnewspaper 0 1 0\n")
        table = load_embeddings(path)
        assert table.dim == 3
        np.testing.assert_array_equal(table.embed("porch"), [1, 0, 0])
        assert "PORCH" in table

    def test_unknown_token_gets_mean_vector(self):
        table = EmbeddingTable(["a", "b"], np.array([[1.0, 0.0], [3.0, 2.0]]))
        np.testing.assert_array_equal(table.embed("zzz"), [2.0, 1.0])

    def test_first_duplicate_wins(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("a 1 1\na 2 2\n")
        np.testing.assert_array_equal(load_embeddings(path).embed("a"), [1, 1])

    def test_vocab_filter(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("a 1 1\nb 2 2\n")
        vocab = Vocabulary()
        vocab.add("b", Role.NOUN)
        assert load_embeddings(path, vocab_filter=vocab).tokens == ["b"]

    @pytest.mark.parametrize("content", ["", "a 1 2\nb 1\n", "a 1 x\n", "a\n"])
    def test_malformed(self, tmp_path, content):
        path = tmp_path / "vec.txt"
        path.write_text(content)
        with pytest.raises(FormatError):
            load_embeddings(path)


class TestVocabulary:
    def test_from_dataset_assigns_roles(self, toy_dataset):
        vocab = Vocabulary.from_dataset(toy_dataset)
        assert vocab.tokens_with_role(Role.NOUN) == ["d0", "d1", "d2", "d3"]
        assert vocab.tokens_with_role(Role.VERB) == ["v0", "v1", "v2"]
        assert vocab.has_role("with", Role.RELATION_WORD)
        assert vocab.token_of(vocab.id_of("c2")) == "c2"

    def test_exclude_verbs(self, toy_dataset):
        vocab = Vocabulary.from_dataset(toy_dataset, exclude_verbs=["v1"])
        assert vocab.tokens_with_role(Role.VERB) == ["v0", "v2"]
        assert "v1" in vocab


class TestLemmas:
    def test_normalizer(self):
        normalize = LemmaNormalizer({"Dropped": "drop"})
        assert normalize("dropped") == "drop"
        assert normalize("Throw") == "throw"
        assert normalize.normalize_all(["dropped", "drop"]) == {"drop"}

    def test_load_lemma_map(self, tmp_path):
        path = tmp_path / "lemmas.tsv"
        path.write_text("# comment\ndropped\tdrop\n")
        assert load_lemma_map(path)("dropped") == "drop"

    def test_load_lemma_map_malformed(self, tmp_path):
        path = tmp_path / "lemmas.tsv"
        path.write_text("dropped drop\n")
        with pytest.raises(FormatError):
            load_lemma_map(path)
