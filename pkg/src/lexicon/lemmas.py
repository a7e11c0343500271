"""Lemma normalization for gold matching (dropped → drop)."""

import logging
from pathlib import Path
from typing import Dict, Iterable, Optional, Set, Union

from src.errors import FormatError

logger = logging.getLogger(__name__)


class LemmaNormalizer:
    """Maps inflected forms to lemmas; unknown tokens map to themselves."""

    def __init__(self, mapping: Optional[Dict[str, str]] = None):
        self.mapping = {k.lower(): v.lower() for k, v in (mapping or {}).items()}

    def __call__(self, token: str) -> str:
        return self.mapping.get(token.lower(), token.lower())

    def normalize_all(self, tokens: Iterable[str]) -> Set[str]:
        return {self(t) for t in tokens}


def load_lemma_map(path: Union[str, Path]) -> LemmaNormalizer:
    """Read ``inflected<TAB>lemma`` lines; ``#`` starts a comment."""
    path = Path(path)
    mapping: Dict[str, str] = {}
    with path.open("r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2 or not all(fields):
                raise FormatError("expected 'inflected<TAB>lemma'", path=str(path), line_number=line_number)
            mapping[fields[0]] = fields[1]
    logger.info(f"Loaded {len(mapping)} lemma mappings from {path}")
    return LemmaNormalizer(mapping)
