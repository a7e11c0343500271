"""Corpus-driven construction of supervised and unsupervised sets."""

from src.harvest.corpus import Token, TokenizedCorpus, load_corpus, parse_token
from src.harvest.paraphrases import harvest_dataset, harvest_paraphrases
from src.harvest.synonyms import SynonymLexicon, augment_with_synonyms, load_synonyms
from src.harvest.templates import ParaphraseTemplate, instantiate_template, template_for

__all__ = [
    "ParaphraseTemplate",
    "SynonymLexicon",
    "Token",
    "TokenizedCorpus",
    "augment_with_synonyms",
    "harvest_dataset",
    "harvest_paraphrases",
    "instantiate_template",
    "load_corpus",
    "load_synonyms",
    "parse_token",
    "template_for",
]
