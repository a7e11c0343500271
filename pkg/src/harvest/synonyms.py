"""Synonym substitution for building the unsupervised set."""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Set, Union

from src.data.records import SupervisedExample, Utterance
from src.errors import FormatError

logger = logging.getLogger(__name__)


class SynonymLexicon:
    """token -> synonyms. A token never lists itself."""

    def __init__(self, mapping: Mapping[str, Iterable[str]] = None):
        self._synonyms: Dict[str, Set[str]] = {}
        for token, synonyms in (mapping or {}).items():
            self._synonyms[token] = {s for s in synonyms if s and s != token}

    def __len__(self) -> int:
        return len(self._synonyms)

    def synonyms(self, token: str) -> List[str]:
        return sorted(self._synonyms.get(token, ()))


def load_synonyms(path: Union[str, Path]) -> SynonymLexicon:
    path = Path(path)
    mapping: Dict[str, Set[str]] = {}
    with path.open("r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].strip():
                raise FormatError("expected token<TAB>syn1,syn2", path=str(path), line_number=line_number)
            token = parts[0].strip()
            mapping.setdefault(token, set()).update(s.strip() for s in parts[1].split(",") if s.strip())
    logger.info(f"Loaded synonyms for {len(mapping)} tokens from {path}")
    return SynonymLexicon(mapping)


def augment_with_synonyms(examples: Iterable[SupervisedExample], lexicon: SynonymLexicon) -> List[Utterance]:
    """(s, C) for each synonym s of each example's D, minus the supervised pairs."""
    examples = list(examples)
    originals = {e.utterance for e in examples}
    out: Dict[Utterance, None] = {}
    for example in examples:
        for synonym in lexicon.synonyms(example.utterance.denominal):
            candidate = Utterance(synonym, example.utterance.context)
            if candidate not in originals:
                out.setdefault(candidate, None)
    return list(out)
