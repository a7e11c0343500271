"""Loading pre-trained word vectors from the common text format.

Each line is a token followed by ``d`` whitespace-separated decimals. An
optional word2vec header (``<count> <dim>``) on the first line is skipped.
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from src.errors import FormatError
from src.lexicon.vocabulary import Vocabulary

logger = logging.getLogger(__name__)


class EmbeddingTable:
    """Immutable token → vector table with a mean-of-rows OOV vector."""

    def __init__(self, tokens: Sequence[str], rows: np.ndarray):
        rows = np.asarray(rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[0] != len(tokens) or rows.shape[0] == 0:
            raise FormatError(f"embedding rows {rows.shape} do not match {len(tokens)} tokens")
        if not np.all(np.isfinite(rows)):
            raise FormatError("embedding rows must be finite")
        self._index: Dict[str, int] = {}
        for i, token in enumerate(tokens):
            self._index.setdefault(token, i)
        self.tokens: List[str] = list(tokens)
        self.rows = rows
        self.rows.setflags(write=False)
        self.oov_vector = rows.mean(axis=0)
        self.oov_vector.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token.lower() in self._index

    def embed(self, token: str) -> np.ndarray:
        """Stored row for known tokens, the OOV vector otherwise."""
        index = self._index.get(token.lower())
        if index is None:
            return self.oov_vector.copy()
        return self.rows[index].copy()

    def embed_sequence(self, tokens: Iterable[str]) -> np.ndarray:
        vectors = [self.embed(t) for t in tokens]
        if not vectors:
            return np.zeros(0)
        return np.concatenate(vectors)

    def embed_matrix(self, tokens: Sequence[str]) -> np.ndarray:
        if not tokens:
            return np.zeros((0, self.dim))
        return np.stack([self.embed(t) for t in tokens])


def _is_header(parts: List[str]) -> bool:
    return len(parts) == 2 and all(p.isdigit() for p in parts)


def load_embeddings(path: Union[str, Path], vocab_filter: Optional[Vocabulary] = None) -> EmbeddingTable:
    """Read a text embedding file, optionally keeping only vocabulary tokens.

    Raises:
        FormatError: empty file, inconsistent dimension, or unparsable values.
    """
    path = Path(path)
    tokens: List[str] = []
    rows: List[List[float]] = []
    dim: Optional[int] = None
    seen = set()
    with path.open("r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            parts = line.rstrip("\n").split()
            if not parts:
                continue
            if line_number == 1 and _is_header(parts):
                continue
            token, raw = parts[0].lower(), parts[1:]
            if dim is None:
                dim = len(raw)
                if dim == 0:
                    raise FormatError("embedding line has no values", path=str(path), line_number=line_number)
            elif len(raw) != dim:
                raise FormatError(f"expected {dim} values, found {len(raw)}", path=str(path),
                                  line_number=line_number)
            if token in seen:
                continue
            if vocab_filter is not None and token not in vocab_filter:
                continue
            try:
                rows.append([float(v) for v in raw])
            except ValueError as e:
                raise FormatError(f"non-numeric embedding value: {e}", path=str(path),
                                  line_number=line_number) from e
            tokens.append(token)
            seen.add(token)
    if dim is None:
        raise FormatError("embedding file is empty", path=str(path))
    if not tokens:
        raise FormatError("no embedding tokens overlap the vocabulary filter", path=str(path))
    logger.info(f"Loaded {len(tokens)} embeddings of dimension {dim} from {path}")
    return EmbeddingTable(tokens, np.asarray(rows))
