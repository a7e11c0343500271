"""``comprehend``: rank interpretations of one denominal utterance."""

import argparse

from src.commands.common import add_model_arguments, open_model, out_path, write_lines
from src.data.records import Utterance
from src.inference.tasks import FrameSampleConfig, comprehend
from src.manifest import RunManifest


def frame_sampling(args: argparse.Namespace, seed: int) -> FrameSampleConfig:
    return FrameSampleConfig(mode=args.frame_mode, n_samples=args.frame_samples, seed=seed)


def add_frame_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--frame-mode", choices=["auto", "exact", "sampled"], default="auto",
                        help="Sum over frames exactly or with Monte Carlo samples from the prior")
    parser.add_argument("--frame-samples", type=int, default=1000)


def run(args: argparse.Namespace, manifest: RunManifest) -> None:
    model = open_model(args)
    utterance = Utterance(args.verb, args.context)
    ranking = comprehend(model, utterance, args.top, frame_sampling(args, args.seed or 0))
    lines = [f"{interp.verb}\t{interp.relation.value}\t{score:.6g}" for interp, score in ranking]
    for line in lines:
        print(line)
    manifest.add_output(write_lines(out_path(args, "comprehension.tsv"), lines))


def register_command(subparsers) -> None:
    parser = subparsers.add_parser("comprehend", help="Rank (verb, relation) paraphrases of a denominal utterance")
    parser.add_argument("--verb", required=True, help="The denominal verb D")
    parser.add_argument("--context", required=True, help="The context word C")
    parser.add_argument("--top", type=int, default=5)
    add_model_arguments(parser)
    add_frame_arguments(parser)
    parser.set_defaults(handler=run, inputs=lambda a: [a.model, a.embeddings])
