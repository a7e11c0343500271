"""Vocabulary management and pre-trained embedding ingestion."""

from src.lexicon.embeddings import EmbeddingTable, load_embeddings
from src.lexicon.lemmas import LemmaNormalizer, load_lemma_map
from src.lexicon.vocabulary import Role, Vocabulary

__all__ = ["EmbeddingTable", "LemmaNormalizer", "Role", "Vocabulary", "load_embeddings", "load_lemma_map"]
