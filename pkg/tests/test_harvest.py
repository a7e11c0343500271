import pytest

from src.data.records import Interpretation, SupervisedExample, Utterance
from src.data.relations import RelationType
from src.errors import ContractError, FormatError
from src.harvest import (
    SynonymLexicon,
    TokenizedCorpus,
    augment_with_synonyms,
    harvest_dataset,
    harvest_paraphrases,
    instantiate_template,
    load_corpus,
    load_synonyms,
    parse_token,
    template_for,
)

PUT = "put/VERB the/DET carpet/NOUN on/ADP the/DET floor/NOUN"
LAY = "lay/VERB the/DET carpet/NOUN on/ADP the/DET floor/NOUN"
CARPET = Utterance("carpet", "floor")


@pytest.fixture
def carpet_corpus():
    return TokenizedCorpus.from_lines([PUT, PUT, PUT, LAY])


class TestCorpus:
    def test_parse_token(self):
        token = parse_token("Dropped/verb/drop")
        assert (token.surface, token.pos, token.lemma, token.form) == ("Dropped", "VERB", "drop", "drop")
        assert parse_token("The/DET").form == "the"

    @pytest.mark.parametrize("raw", ["word", "word/", "a/b/c/d", "word/VERBISH"])
    def test_malformed_token(self, raw):
        with pytest.raises(FormatError):
            parse_token(raw)

    def test_load_corpus_reports_line(self, tmp_path):
        path = tmp_path / "corpus.txt"
        path.write_text(f"# header\n{PUT}\nbroken\n")
        with pytest.raises(FormatError) as excinfo:
            load_corpus(path)
        assert excinfo.value.line_number == 3

    def test_load_corpus_skips_blank_and_comment_lines(self, tmp_path):
        path = tmp_path / "corpus.txt"
        path.write_text(f"# header\n\n{PUT}\n{LAY}\n")
        assert len(load_corpus(path)) == 2


class TestTemplates:
    def test_locatum_pattern(self):
        template = instantiate_template(CARPET, RelationType.LOCATUM_ON)
        assert template.pattern == "⟨VERB⟩ the carpet on|onto|in|into|to|at the floor"

    def test_location_pattern_swaps_noun_and_context(self):
        template = instantiate_template(Utterance("porch", "newspaper"), RelationType.LOCATION_IN)
        assert template.pattern.startswith("⟨VERB⟩ the newspaper on|")
        assert template.pattern.endswith("the porch")

    def test_every_relation_has_a_template(self):
        for relation in RelationType:
            assert template_for(relation).startswith("⟨VERB⟩")

    def test_articles_are_dropped_for_chinese(self):
        template = instantiate_template(CARPET, RelationType.LOCATUM_ON, language="zh")
        assert template.pattern == "⟨VERB⟩ carpet on|onto|in|into|to|at floor"

    def test_optional_articles_and_lemmas(self):
        sentence = TokenizedCorpus.from_lines(["Placed/VERB/place carpet/NOUN onto/ADP floor/NOUN"]).sentences[0]
        assert instantiate_template(CARPET, RelationType.LOCATUM_ON).find_matches(sentence) == ["place"]

    def test_multiword_relational_phrase(self):
        sentence = TokenizedCorpus.from_lines(
            ["took/VERB/take the/DET carpet/NOUN out/ADP of/ADP the/DET floor/NOUN"]).sentences[0]
        assert instantiate_template(CARPET, RelationType.LOCATUM_OUT).find_matches(sentence) == ["take"]

    @pytest.mark.parametrize("line", [
        "put/VERB the/DET red/ADJ carpet/NOUN on/ADP the/DET floor/NOUN",
        "put/VERB the/DET carpet/NOUN near/ADP the/DET floor/NOUN",
        "put/NOUN the/DET carpet/NOUN on/ADP the/DET floor/NOUN",
        "put/VERB the/DET carpet/NOUN on/ADP",
    ])
    def test_non_matches(self, line):
        sentence = TokenizedCorpus.from_lines([line]).sentences[0]
        assert instantiate_template(CARPET, RelationType.LOCATUM_ON).find_matches(sentence) == []


class TestHarvest:
    def test_counts_ranked(self, carpet_corpus):
        assert harvest_paraphrases(carpet_corpus, CARPET, RelationType.LOCATUM_ON) == [("put", 3), ("lay", 1)]

    def test_top_n(self, carpet_corpus):
        assert harvest_paraphrases(carpet_corpus, CARPET, RelationType.LOCATUM_ON, top_n=1) == [("put", 3)]

    def test_ties_broken_lexicographically(self):
        corpus = TokenizedCorpus.from_lines([PUT, LAY])
        assert harvest_paraphrases(corpus, CARPET, RelationType.LOCATUM_ON) == [("lay", 1), ("put", 1)]

    def test_empty_corpus(self):
        assert harvest_paraphrases(TokenizedCorpus([]), CARPET, RelationType.LOCATUM_ON) == []

    def test_invalid_top_n(self, carpet_corpus):
        with pytest.raises(ContractError):
            harvest_paraphrases(carpet_corpus, CARPET, RelationType.LOCATUM_ON, top_n=0)

    def test_harvest_dataset(self, carpet_corpus):
        dataset = harvest_dataset(carpet_corpus, [CARPET, Utterance("porch", "newspaper"), CARPET])
        assert len(dataset.supervised) == 1
        example = dataset.supervised[0]
        assert example.relation is RelationType.LOCATUM_ON
        assert example.gold == ((Interpretation("put", RelationType.LOCATUM_ON), 3),
                                (Interpretation("lay", RelationType.LOCATUM_ON), 1))
        assert dataset.unsupervised == (Utterance("porch", "newspaper"),)


class TestSynonyms:
    def test_lexicon_excludes_self(self):
        lexicon = SynonymLexicon({"mail": ["post", "mail", "email"]})
        assert lexicon.synonyms("mail") == ["email", "post"]
        assert lexicon.synonyms("unknown") == []

    def test_augment(self):
        gold = ((Interpretation("send", RelationType.INSTRUMENT), 2),)
        examples = [
            SupervisedExample(Utterance("mail", "letter"), gold),
            SupervisedExample(Utterance("email", "letter"), gold),
        ]
        lexicon = SynonymLexicon({"mail": ["email", "post"], "email": ["mail", "post"]})
        assert augment_with_synonyms(examples, lexicon) == [Utterance("post", "letter")]

    def test_load_synonyms(self, tmp_path):
        path = tmp_path / "syn.tsv"
        path.write_text("# synonyms\nmail\temail, post\n")
        assert load_synonyms(path).synonyms("mail") == ["email", "post"]

    def test_load_synonyms_malformed(self, tmp_path):
        path = tmp_path / "syn.tsv"
        path.write_text("mail email\n")
        with pytest.raises(FormatError):
            load_synonyms(path)
