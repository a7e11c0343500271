"""``produce``: rank denominal utterances for an intended interpretation."""

import argparse

from src.commands.common import add_model_arguments, open_model, out_path, require_file, write_lines
from src.commands.comprehend import add_frame_arguments, frame_sampling
from src.data.io import load_dataset
from src.data.records import Interpretation
from src.data.relations import RelationType
from src.inference.tasks import produce
from src.manifest import RunManifest


def run(args: argparse.Namespace, manifest: RunManifest) -> None:
    model = open_model(args)
    interpretation = Interpretation(args.verb, RelationType.parse(args.relation))
    candidates = None
    if args.candidates:
        candidates = load_dataset(require_file(args.candidates, "candidate file")).utterances()
    ranking = produce(model, interpretation, args.top, frame_sampling(args, args.seed or 0), candidates)
    lines = [f"{u.denominal}\t{u.context}\t{score:.6g}" for u, score in ranking]
    for line in lines:
        print(line)
    manifest.add_output(write_lines(out_path(args, "production.tsv"), lines))


def register_command(subparsers) -> None:
    parser = subparsers.add_parser("produce", help="Rank (denominal, context) utterances for a paraphrase")
    parser.add_argument("--verb", required=True, help="The paraphrase verb V")
    parser.add_argument("--relation", required=True, help="Relation type, e.g. LOCATUM_ON")
    parser.add_argument("--top", type=int, default=5)
    parser.add_argument("--candidates", help="Dataset file whose utterances form the candidate pool")
    add_model_arguments(parser)
    add_frame_arguments(parser)
    parser.set_defaults(handler=run, inputs=lambda a: [a.model, a.embeddings, a.candidates])
