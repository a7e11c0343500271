"""The eight semantic relation types linking a denominal verb to its parent noun."""

from enum import Enum
from typing import Dict, Tuple

from src.errors import FormatError


class RelationType(str, Enum):
    LOCATUM_ON = "LOCATUM_ON"
    LOCATUM_OUT = "LOCATUM_OUT"
    LOCATION_IN = "LOCATION_IN"
    LOCATION_OUT = "LOCATION_OUT"
    DURATION = "DURATION"
    AGENT = "AGENT"
    GOAL = "GOAL"
    INSTRUMENT = "INSTRUMENT"

    @property
    def relational_words(self) -> Tuple[str, ...]:
        return RELATIONAL_WORDS[self]

    @property
    def head_word(self) -> str:
        """First relational word, used to embed the relation."""
        return self.relational_words[0]

    @property
    def template(self) -> str:
        return PARAPHRASE_TEMPLATES[self]

    @property
    def index(self) -> int:
        return RELATION_ORDER.index(self)

    @classmethod
    def parse(cls, raw: str) -> "RelationType":
        symbol = raw.strip().upper().replace(" ", "_").replace("-", "_")
        try:
            return cls(symbol)
        except ValueError:
            raise FormatError(f"unknown relation symbol '{raw}'") from None


RELATION_ORDER: Tuple[RelationType, ...] = tuple(RelationType)

_INSIDE = ("on", "onto", "in", "into", "to", "at")
_OUTSIDE = ("out", "out of", "from", "of")

RELATIONAL_WORDS: Dict[RelationType, Tuple[str, ...]] = {
    RelationType.LOCATUM_ON: _INSIDE,
    RelationType.LOCATUM_OUT: _OUTSIDE,
    RelationType.LOCATION_IN: _INSIDE,
    RelationType.LOCATION_OUT: _OUTSIDE,
    RelationType.DURATION: ("during",),
    RelationType.AGENT: ("as", "like"),
    RelationType.GOAL: ("become", "look like", "to be", "into"),
    RelationType.INSTRUMENT: ("with", "by", "using", "via", "through"),
}

# Human-readable paraphrase shapes: <N> is the denominal noun, <C> the context.
PARAPHRASE_TEMPLATES: Dict[RelationType, str] = {
    RelationType.LOCATUM_ON: "<V> the <N> on the <C>",
    RelationType.LOCATUM_OUT: "<V> the <N> from the <C>",
    RelationType.LOCATION_IN: "<V> the <C> on the <N>",
    RelationType.LOCATION_OUT: "<V> the <C> out of the <N>",
    RelationType.DURATION: "<V> in the <C> during the <N>",
    RelationType.AGENT: "<V> the <C> as a <N>",
    RelationType.GOAL: "<V> the <C> become <N>",
    RelationType.INSTRUMENT: "<V> the <C> by <N>",
}
