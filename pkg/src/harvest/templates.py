"""Paraphrase templates: token patterns with one verb hole per relation type.

A template is a sequence of elements. ``Hole`` matches any token tagged VERB
and yields its lemma (or lowercased surface). ``Words`` matches one of several
literal word sequences and may be optional. Matches are contiguous and stay
inside one sentence.
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

from src.data.records import Utterance
from src.data.relations import RelationType
from src.harvest.corpus import Sentence

ARTICLES = frozenset({"the", "a", "an"})
VERB_HOLE = "⟨VERB⟩"


@dataclass(frozen=True)
class Hole:
    name: str = "VERB"


@dataclass(frozen=True)
class Words:
    options: Tuple[Tuple[str, ...], ...]
    optional: bool = False

    @classmethod
    def of(cls, *alternatives: str, optional: bool = False) -> "Words":
        return cls(tuple(tuple(a.split()) for a in alternatives), optional)

    def render(self) -> str:
        text = "|".join(" ".join(o) for o in self.options)
        if self.optional and len(self.options) > 1:
            return f"[{text}]"
        return text


Element = Union[Hole, Words, str]

NOUN, CONTEXT = "NOUN", "CONTEXT"


def _the() -> Words:
    return Words.of("the", optional=True)


def _shape(relation: RelationType) -> List[Element]:
    rel = Words.of(*relation.relational_words)
    if relation in (RelationType.LOCATUM_ON, RelationType.LOCATUM_OUT):
        return [Hole(), _the(), NOUN, rel, _the(), CONTEXT]
    if relation in (RelationType.LOCATION_IN, RelationType.LOCATION_OUT):
        return [Hole(), _the(), CONTEXT, rel, _the(), NOUN]
    if relation is RelationType.DURATION:
        return [Hole(), Words.of("in", "at", "on", optional=True), _the(), CONTEXT, rel, _the(), NOUN]
    if relation is RelationType.AGENT:
        return [Hole(), _the(), CONTEXT, rel, Words.of("a", "an", "the", optional=True), NOUN]
    if relation is RelationType.GOAL:
        return [Hole(), _the(), CONTEXT, rel, NOUN]
    return [Hole(), Words.of("to", optional=True), _the(), CONTEXT, rel, Words.of("the", "a", optional=True), NOUN]


def _drop_articles(elements: Sequence[Element]) -> List[Element]:
    out: List[Element] = []
    for element in elements:
        if isinstance(element, Words) and element.optional:
            options = tuple(o for o in element.options if not (len(o) == 1 and o[0] in ARTICLES))
            if not options:
                continue
            element = Words(options, element.optional)
        out.append(element)
    return out


@dataclass(frozen=True)
class ParaphraseTemplate:
    """A relation's pattern with the noun and context filled in."""

    relation: RelationType
    elements: Tuple[Union[Hole, Words], ...]

    @property
    def pattern(self) -> str:
        return " ".join(VERB_HOLE if isinstance(e, Hole) else e.render() for e in self.elements)

    def __str__(self) -> str:
        return self.pattern

    def _match_from(self, sentence: Sentence, position: int, index: int) -> bool:
        if index == len(self.elements):
            return True
        element = self.elements[index]
        if isinstance(element, Hole):
            return (position < len(sentence) and sentence[position].pos == "VERB"
                    and self._match_from(sentence, position + 1, index + 1))
        for option in element.options:
            end = position + len(option)
            if end <= len(sentence) and all(sentence[position + j].is_word(w) for j, w in enumerate(option)):
                if self._match_from(sentence, end, index + 1):
                    return True
        return element.optional and self._match_from(sentence, position, index + 1)

    def find_matches(self, sentence: Sentence) -> List[str]:
        """Verb forms filling the hole, one per matching start position."""
        return [sentence[i].form for i in range(len(sentence)) if self._match_from(sentence, i, 0)]


def instantiate_template(utterance: Utterance, relation: RelationType, language: str = "en") -> ParaphraseTemplate:
    """Fill ``relation``'s pattern with the utterance's noun D and context C."""
    fills = {NOUN: utterance.denominal.lower(), CONTEXT: utterance.context.lower()}
    elements = _shape(relation)
    if language == "zh":
        elements = _drop_articles(elements)
    filled: List[Union[Hole, Words]] = [
        Words(((fills[e],),)) if isinstance(e, str) else e for e in elements
    ]
    return ParaphraseTemplate(relation, tuple(filled))


def template_for(relation: RelationType, language: str = "en") -> str:
    """Unfilled pattern with NOUN and CONTEXT placeholders, for display."""
    return instantiate_template(Utterance("⟨NOUN⟩", "⟨CONTEXT⟩"), relation, language).pattern
