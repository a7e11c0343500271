"""Token ↔ id vocabulary with role tags."""

import logging
from enum import Enum
from typing import Dict, Iterable, List, Set, TYPE_CHECKING

from src.errors import ContractError

if TYPE_CHECKING:
    from src.data.records import Dataset

logger = logging.getLogger(__name__)


class Role(str, Enum):
    NOUN = "noun-candidate"
    CONTEXT = "context-candidate"
    VERB = "verb-candidate"
    RELATION_WORD = "relation-word"


class Vocabulary:
    """Dense ids in [0, size) and a set of role tags per token."""

    def __init__(self) -> None:
        self._ids: Dict[str, int] = {}
        self._tokens: List[str] = []
        self._roles: Dict[str, Set[Role]] = {}

    def add(self, token: str, role: Role) -> int:
        if not token:
            raise ContractError("tokens must be non-empty")
        if token not in self._ids:
            self._ids[token] = len(self._tokens)
            self._tokens.append(token)
            self._roles[token] = set()
        self._roles[token].add(role)
        return self._ids[token]

    def __len__(self) -> int:
        return len(self._tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._ids

    def __iter__(self):
        return iter(self._tokens)

    def id_of(self, token: str) -> int:
        return self._ids[token]

    def token_of(self, index: int) -> str:
        return self._tokens[index]

    def roles_of(self, token: str) -> Set[Role]:
        return set(self._roles.get(token, set()))

    def has_role(self, token: str, role: Role) -> bool:
        return role in self._roles.get(token, set())

    def remove_role(self, token: str, role: Role) -> None:
        if token in self._roles:
            self._roles[token].discard(role)

    def tokens_with_role(self, role: Role) -> List[str]:
        return sorted(t for t in self._tokens if role in self._roles[t])

    def exclude_verbs(self, tokens: Iterable[str]) -> None:
        """Strip the verb-candidate tag from target denominal verbs."""
        for token in tokens:
            if self.has_role(token, Role.VERB):
                logger.info(f"Excluding '{token}' from verb candidates")
            self.remove_role(token, Role.VERB)

    @classmethod
    def from_dataset(cls, dataset: "Dataset", exclude_verbs: Iterable[str] = ()) -> "Vocabulary":
        from src.data.relations import RelationType

        vocab = cls()
        for example in dataset.supervised:
            vocab.add(example.utterance.denominal, Role.NOUN)
            vocab.add(example.utterance.context, Role.CONTEXT)
            for interpretation, _ in example.gold:
                vocab.add(interpretation.verb, Role.VERB)
        for utterance in dataset.unsupervised:
            vocab.add(utterance.denominal, Role.NOUN)
            vocab.add(utterance.context, Role.CONTEXT)
        for relation in RelationType:
            vocab.add(relation.head_word, Role.RELATION_WORD)
        vocab.exclude_verbs(exclude_verbs)
        logger.info(
            f"Vocabulary: {len(vocab)} tokens, {len(vocab.tokens_with_role(Role.NOUN))} nouns, "
            f"{len(vocab.tokens_with_role(Role.VERB))} verbs"
        )
        return vocab
