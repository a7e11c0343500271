"""POS-tagged corpora: one sentence per line, tokens as ``surface/POS[/lemma]``."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional, Tuple, Union

from src.errors import FormatError

logger = logging.getLogger(__name__)

# Universal POS tag set
TAGSET = frozenset({
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM", "PART",
    "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
})


@dataclass(frozen=True)
class Token:
    surface: str
    pos: str
    lemma: Optional[str] = None

    @property
    def form(self) -> str:
        """Lemma when present, else the lowercased surface."""
        return self.lemma if self.lemma else self.surface.lower()

    def is_word(self, word: str) -> bool:
        return self.surface.lower() == word or self.lemma == word


Sentence = Tuple[Token, ...]


def parse_token(raw: str) -> Token:
    parts = raw.split("/")
    if len(parts) not in (2, 3) or not all(parts):
        raise FormatError(f"token '{raw}' is not surface/POS[/lemma]")
    pos = parts[1].upper()
    if pos not in TAGSET:
        raise FormatError(f"token '{raw}' has unknown tag '{parts[1]}'")
    return Token(parts[0], pos, parts[2].lower() if len(parts) == 3 else None)


class TokenizedCorpus:
    """An immutable sequence of tagged sentences."""

    def __init__(self, sentences: Iterable[Sentence]):
        self.sentences: Tuple[Sentence, ...] = tuple(tuple(s) for s in sentences)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[Sentence]:
        return iter(self.sentences)

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "TokenizedCorpus":
        return cls(tuple(parse_token(t) for t in line.split()) for line in lines if line.strip())


def load_corpus(path: Union[str, Path]) -> TokenizedCorpus:
    path = Path(path)
    sentences = []
    with path.open("r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip() or line.startswith("#"):
                continue
            try:
                sentences.append(tuple(parse_token(t) for t in line.split()))
            except FormatError as e:
                raise FormatError(str(e), path=str(path), line_number=line_number) from e
    logger.info(f"Loaded {len(sentences)} tagged sentences from {path}")
    return TokenizedCorpus(sentences)
