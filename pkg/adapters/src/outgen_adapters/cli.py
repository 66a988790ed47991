"""Command-line front for the two adapters.

    outgen-adapters parse      --input stories.jsonl --output parses.conllu
    outgen-adapters paraphrase --input stories.jsonl --output candidates.jsonl -n 8

Exit status: 0 success, 1 environment failure (I/O, tool unavailable —
no partial output is left behind), 2 invalid input.
"""
from __future__ import annotations

import argparse
import sys

from ._io import AdapterInputError
from .paraphrasing import ReplayParaphraser, SimbertParaphraser, paraphrase_stories
from .parsing import HanlpParser, ReplayParser, ToolUnavailableError, parse_stories


def _parser_backend(args):
    if args.backend == "hanlp":
        return HanlpParser(model=args.model)
    if args.replay_file is None:
        raise AdapterInputError("--backend replay needs --replay-file")
    return ReplayParser(args.replay_file)


def _paraphrase_backend(args):
    if args.backend == "simbert":
        return SimbertParaphraser(model=args.model)
    if args.replay_file is None:
        raise AdapterInputError("--backend replay needs --replay-file")
    return ReplayParaphraser(args.replay_file)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="outgen-adapters",
        description="Batch adapters emitting CoNLL-U parses and paraphrase candidates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="dependency-parse stories into CoNLL-U blocks")
    p.add_argument("--input", required=True, help="example or story JSONL")
    p.add_argument("--output", required=True, help="CoNLL-U output path")
    p.add_argument("--backend", choices=["hanlp", "replay"], default="hanlp")
    p.add_argument("--model", help="hanlp model identifier")
    p.add_argument("--replay-file", help="recorded parses for --backend replay")
    p.set_defaults(make_backend=_parser_backend, run="parse")

    p = sub.add_parser("paraphrase", help="generate paraphrase candidates per story")
    p.add_argument("--input", required=True, help="example or story JSONL")
    p.add_argument("--output", required=True, help="candidate JSONL output path")
    p.add_argument("-n", "--n-candidates", type=int, default=8,
                   help="candidates per story (>= 6; default 8)")
    p.add_argument("--backend", choices=["simbert", "replay"], default="simbert")
    p.add_argument("--model", help="paraphrase model identifier")
    p.add_argument("--replay-file", help="recorded candidates for --backend replay")
    p.set_defaults(make_backend=_paraphrase_backend, run="paraphrase")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        backend = args.make_backend(args)
        if args.run == "parse":
            manifest = parse_stories(args.input, args.output, backend)
        else:
            manifest = paraphrase_stories(args.input, args.output, args.n_candidates, backend)
    except ToolUnavailableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (AdapterInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"{manifest.tool} {manifest.version}: {manifest.record_count} records -> {manifest.output_path}")
    return 0


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
