"""Reading and writing the tab-separated record format.

Supervised:   D<TAB>C<TAB>RELATION<TAB>verb:count,verb:count[<TAB>source[<TAB>decade]]
Unsupervised: D<TAB>C

Blank lines are skipped and ``#`` starts a comment line.
"""

import logging
from pathlib import Path
from typing import List, Optional, Tuple, Union

from src.data.records import SOURCE_TAGS, Dataset, Interpretation, SupervisedExample, Utterance
from src.data.relations import RelationType
from src.errors import ContractError, FormatError

logger = logging.getLogger(__name__)


def _parse_gold(raw: str, relation: RelationType) -> Tuple[Tuple[Interpretation, int], ...]:
    gold = []
    seen = set()
    for item in raw.split(","):
        verb, sep, count = item.strip().rpartition(":")
        if not sep or not verb:
            raise FormatError(f"gold entry '{item}' is not 'verb:count'")
        try:
            votes = int(count)
        except ValueError:
            raise FormatError(f"vote count '{count}' is not an integer") from None
        if votes < 0:
            raise FormatError(f"negative vote count for '{verb}'")
        if verb in seen:
            raise FormatError(f"verb '{verb}' listed twice")
        seen.add(verb)
        gold.append((Interpretation(verb, relation), votes))
    if not any(votes for _, votes in gold):
        raise FormatError("vote counts are all zero")
    return tuple(gold)


def _parse_decade(raw: str) -> Optional[int]:
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise FormatError(f"decade '{raw}' is not an integer") from None


def parse_record(line: str, language: str = "en") -> Union[SupervisedExample, Utterance]:
    """Parse one non-comment line into a supervised example or a bare utterance."""
    fields = line.split("\t")
    if len(fields) < 2 or len(fields) > 6:
        raise FormatError(f"expected 2 or 4-6 tab-separated fields, found {len(fields)}")
    denominal, context = fields[0].strip(), fields[1].strip()
    if not denominal or not context:
        raise FormatError("empty denominal or context token")
    if len(fields) == 2:
        return Utterance(denominal, context)
    if len(fields) == 3:
        # unsupervised record with a decade stamp
        _parse_decade(fields[2].strip())
        return Utterance(denominal, context)
    relation = RelationType.parse(fields[2])
    gold = _parse_gold(fields[3], relation)
    source = fields[4].strip() if len(fields) > 4 and fields[4].strip() else "corpus"
    if source not in SOURCE_TAGS:
        raise FormatError(f"unknown source tag '{source}'")
    decade = _parse_decade(fields[5].strip()) if len(fields) > 5 else None
    return SupervisedExample(Utterance(denominal, context), gold, source=source, decade=decade,
                             language=language)


def load_dataset(path: Union[str, Path], language: str = "en") -> Dataset:
    """Load a record file into a Dataset.

    Raises:
        FormatError: malformed line (with its line number), duplicate pair, or empty file.
    """
    path = Path(path)
    supervised: List[SupervisedExample] = []
    unsupervised: List[Utterance] = []
    seen_supervised, seen_unsupervised = set(), set()
    with path.open("r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            try:
                record = parse_record(line, language=language)
            except FormatError as e:
                raise FormatError(str(e), path=str(path), line_number=line_number) from e
            except ContractError as e:
                raise FormatError(str(e), path=str(path), line_number=line_number) from e
            if isinstance(record, SupervisedExample):
                if record.utterance in seen_supervised:
                    raise FormatError(f"duplicate pair '{record.utterance}'", path=str(path),
                                      line_number=line_number)
                seen_supervised.add(record.utterance)
                supervised.append(record)
            else:
                if record in seen_unsupervised:
                    raise FormatError(f"duplicate pair '{record}'", path=str(path), line_number=line_number)
                seen_unsupervised.add(record)
                unsupervised.append(record)
    if not supervised and not unsupervised:
        raise FormatError("dataset file contains no records", path=str(path))
    logger.info(f"Loaded {len(supervised)} supervised and {len(unsupervised)} unsupervised records from {path}")
    return Dataset(tuple(supervised), tuple(unsupervised), language=language)


def format_example(example: SupervisedExample) -> str:
    gold = ",".join(f"{interp.verb}:{votes}" for interp, votes in example.gold)
    fields = [example.utterance.denominal, example.utterance.context, example.relation.value, gold]
    if example.source != "corpus" or example.decade is not None:
        fields.append(example.source)
    if example.decade is not None:
        fields.append(str(example.decade))
    return "\t".join(fields)


def dump_dataset(dataset: Dataset, path: Union[str, Path]) -> Path:
    """Write ``dataset`` back in the record grammar ``load_dataset`` reads."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [format_example(e) for e in dataset.supervised]
    lines += [f"{u.denominal}\t{u.context}" for u in dataset.unsupervised]
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return path
