"""Dataset model: relations, utterances, interpretations and splits."""

from src.data.io import dump_dataset, load_dataset, parse_record
from src.data.records import (
    AnnotationDistribution,
    Dataset,
    Interpretation,
    SupervisedExample,
    Utterance,
    empirical_distribution,
    group_by_interpretation,
)
from src.data.relations import RELATION_ORDER, RelationType
from src.data.splits import kfold_split

__all__ = [
    "AnnotationDistribution",
    "Dataset",
    "Interpretation",
    "RELATION_ORDER",
    "RelationType",
    "SupervisedExample",
    "Utterance",
    "dump_dataset",
    "empirical_distribution",
    "group_by_interpretation",
    "kfold_split",
    "load_dataset",
    "parse_record",
]
