"""``harvest``: mine paraphrase verbs from a tagged corpus and write a dataset file."""

import argparse
import logging

from src.commands.common import out_path, require_file, write_lines
from src.data.io import dump_dataset, load_dataset
from src.data.records import Dataset
from src.data.relations import RelationType
from src.harvest.corpus import load_corpus
from src.harvest.paraphrases import harvest_dataset, harvest_paraphrases
from src.harvest.synonyms import augment_with_synonyms, load_synonyms
from src.manifest import RunManifest

logger = logging.getLogger(__name__)


def run(args: argparse.Namespace, manifest: RunManifest) -> None:
    corpus = load_corpus(require_file(args.corpus, "corpus"))
    utterances = load_dataset(require_file(args.utterances, "utterance file"), language=args.language).utterances()
    relations = [RelationType.parse(r) for r in args.relation] if args.relation else None

    if relations and len(relations) == 1:
        lines = []
        for utterance in utterances:
            for verb, count in harvest_paraphrases(corpus, utterance, relations[0], args.top, args.language):
                lines.append(f"{utterance.denominal}\t{utterance.context}\t{verb}\t{count}")
        manifest.add_output(write_lines(out_path(args, "paraphrases.tsv"), lines))

    dataset = harvest_dataset(corpus, utterances, relations, args.top, source=args.source, language=args.language)
    if args.synonyms:
        lexicon = load_synonyms(require_file(args.synonyms, "synonym lexicon"))
        taken = set(dataset.utterances())
        extra = [u for u in augment_with_synonyms(dataset.supervised, lexicon) if u not in taken]
        logger.info(f"Synonym substitution added {len(extra)} unsupervised utterances")
        dataset = Dataset(dataset.supervised, dataset.unsupervised + tuple(extra), language=args.language)
    manifest.add_output(dump_dataset(dataset, out_path(args, "harvested.tsv")))


def register_command(subparsers) -> None:
    parser = subparsers.add_parser("harvest", help="Build supervised records from template matches in a corpus")
    parser.add_argument("--corpus", required=True, help="Tagged corpus, tokens as surface/POS[/lemma]")
    parser.add_argument("--utterances", required=True, help="Dataset file listing the (D, C) pairs to label")
    parser.add_argument("--relation", action="append", help="Restrict to these relation types (repeatable)")
    parser.add_argument("--top", type=int, default=3, help="Verbs kept per utterance")
    parser.add_argument("--synonyms", help="token<TAB>syn1,syn2 lexicon for unsupervised augmentation")
    parser.add_argument("--source", default="corpus", choices=["adult", "child", "corpus", "historical"])
    parser.add_argument("--language", default="en", choices=["en", "zh"])
    parser.set_defaults(handler=run, inputs=lambda a: [a.corpus, a.utterances, a.synonyms])
