"""Single executable exposing the pipeline as subcommands.

    outgenkit tag           insert dependency markers into parsed stories
    outgenkit augment       merge paraphrase candidates into training pairs
    outgenkit evaluate      score generated stories against a reference split
    outgenkit stats         dataset statistics for a split
    outgenkit emit-training write model-ready {src, tgt} files

Configuration may come from a JSON file (--config); command-line flags
override config fields one for one.  Every subcommand is deterministic:
identical inputs produce byte-identical outputs.  Exit status is 0 on
success, 1 on I/O failure, 2 on validation failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .augment import (
    AugmentError,
    AugmentedPair,
    FilterPolicy,
    ORIGIN_ORIGINAL,
    SourceRule,
    assemble_source,
    build_augmented_corpus,
    filter_paraphrases,
    write_augmented_corpus,
)
from .corpus import (
    CorpusError,
    DEFAULT_MAX_UNITS,
    DatasetSplit,
    load_conllu,
    read_examples,
    read_paraphrase_file,
    write_training_pairs,
)
from .metrics import WEIGHT_PRESETS, MetricWeights, evaluate_corpus, overall, render_table
from .stats import StatsError, dataset_stats
from .tagger import (
    DEFAULT_LABEL_ALIASES,
    TargetRelationSet,
    relation_counts,
    tag_story,
    write_tagged_stories,
)

# paraphrase parse blocks are keyed by this id pattern (1-based over the
# accepted list); the parser adapter must follow the same convention
PARAPHRASE_ID_FORMAT = "{example_id}#p{index}"

_CONFIG_KEYS = {
    "examples", "parses", "paraphrases", "generated", "output", "report",
    "targets", "aliases", "weights", "min_length_ratio", "max_length_ratio",
    "max_accepted", "include_title", "phrase_separator", "title_separator",
    "max_units", "strict", "split", "random_seed",
}


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, encoding="utf-8") as fh:
        config = json.load(fh)
    if not isinstance(config, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    unknown = set(config) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"{path}: unknown config keys {sorted(unknown)}")
    return config


def _setting(args: argparse.Namespace, config: dict, key: str, default):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config and config[key] is not None:
        return config[key]
    return default


def _resolve_weights(spec) -> MetricWeights:
    if isinstance(spec, MetricWeights):
        return spec
    if isinstance(spec, str):
        if spec not in WEIGHT_PRESETS:
            raise ValueError(f"unknown weight preset {spec!r}; choose from {sorted(WEIGHT_PRESETS)}")
        return WEIGHT_PRESETS[spec]
    if isinstance(spec, (list, tuple)) and len(spec) == 6:
        return MetricWeights(*[float(v) for v in spec])
    raise ValueError("weights must be a preset name or a list of 6 numbers")


def _resolve_targets(args: argparse.Namespace, config: dict) -> TargetRelationSet:
    labels = _setting(args, config, "targets", None)
    aliases = _setting(args, config, "aliases", None)
    if aliases is None:
        aliases = dict(DEFAULT_LABEL_ALIASES)
    elif isinstance(aliases, list):  # command line k=v pairs
        aliases = dict(pair.split("=", 1) for pair in aliases)
    if labels is None:
        return TargetRelationSet(aliases=aliases)
    return TargetRelationSet(frozenset(labels), aliases)


def _require_path(value, flag: str) -> Path:
    if value is None:
        raise ValueError(f"missing required input: {flag}")
    return Path(value)


def _load_split_examples(args, config):
    path = _require_path(_setting(args, config, "examples", None), "--examples")
    strict = _setting(args, config, "strict", True)
    examples, report = read_examples(path, strict=strict)
    if strict and not examples:
        raise CorpusError(f"{path}: no examples loaded")
    if report.skipped or report.relaxed:
        print(f"loaded {report.loaded} examples from {path} "
              f"({report.skipped} skipped, {report.relaxed} with relaxed outline size)")
    return examples, strict


def _read_generated(path: Path) -> dict[str, str]:
    """Model outputs: JSONL {id, story}; stories may be empty strings."""
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}: line {lineno}: malformed JSON ({exc.msg})") from exc
            if (
                not isinstance(record, dict)
                or not isinstance(record.get("id"), str)
                or not record["id"]
                or not isinstance(record.get("story"), str)
            ):
                raise CorpusError(f"{path}: line {lineno}: need string fields 'id' and 'story'")
            if record["id"] in out:
                raise CorpusError(f"{path}: line {lineno}: duplicate id {record['id']!r}")
            out[record["id"]] = record["story"]
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_tag(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    examples, strict = _load_split_examples(args, config)
    targets = _resolve_targets(args, config)
    parses_path = _require_path(_setting(args, config, "parses", None), "--parses")
    output = _require_path(_setting(args, config, "output", None), "--output")

    parses = load_conllu(parses_path, examples=examples)
    known = {ex.id for ex in examples}
    unknown = [p.example_id for p in parses if p.example_id not in known]
    if unknown and strict:
        raise CorpusError(f"parse file contains ids without examples: {unknown[:5]}")
    kept = [p for p in parses if p.example_id in known]

    tagged = [tag_story(p, targets) for p in kept]
    write_tagged_stories(tagged, output)
    counts = relation_counts(kept, targets)
    total = sum(counts.values())
    summary = "  ".join(f"{label}={n}" for label, n in sorted(counts.items()))
    print(f"tagged {len(tagged)} stories -> {output}")
    print(f"markers: total={total}  {summary}")
    if unknown and not strict:
        print(f"skipped {len(unknown)} parse(s) without examples")
    return 0


def _paraphrase_sets(examples, args, config):
    paraphrases_path = _require_path(_setting(args, config, "paraphrases", None), "--paraphrases")
    policy = FilterPolicy(
        min_length_ratio=float(_setting(args, config, "min_length_ratio", 0.5)),
        max_length_ratio=float(_setting(args, config, "max_length_ratio", 2.0)),
        max_accepted=int(_setting(args, config, "max_accepted", 6)),
    )
    by_id = {ex.id: ex for ex in examples}
    sets = []
    for example_id, candidates in read_paraphrase_file(paraphrases_path):
        if example_id not in by_id:
            raise AugmentError(f"paraphrase file references unknown example id {example_id!r}")
        sets.append(filter_paraphrases(by_id[example_id], candidates, policy))
    return sets


def _source_rule(args, config) -> SourceRule:
    return SourceRule(
        include_title=bool(_setting(args, config, "include_title", True)),
        phrase_separator=str(_setting(args, config, "phrase_separator", "#")),
        title_separator=str(_setting(args, config, "title_separator", ":")),
    )


def cmd_augment(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    examples, _strict = _load_split_examples(args, config)
    targets = _resolve_targets(args, config)
    output = _require_path(_setting(args, config, "output", None), "--output")
    max_units = int(_setting(args, config, "max_units", DEFAULT_MAX_UNITS))

    psets = [] if args.originals_only else _paraphrase_sets(examples, args, config)
    corpus = build_augmented_corpus(examples, psets, _source_rule(args, config))

    if args.emit_accepted:
        with open(args.emit_accepted, "w", encoding="utf-8") as fh:
            for pset in psets:
                for k, text in enumerate(pset.accepted, 1):
                    pid = PARAPHRASE_ID_FORMAT.format(example_id=pset.example_id, index=k)
                    fh.write(json.dumps({"id": pid, "story": text}, ensure_ascii=False) + "\n")

    if args.tag:
        parses_path = _require_path(_setting(args, config, "parses", None), "--parses")
        parses = {p.example_id: p for p in load_conllu(parses_path, examples=examples)}
        retagged = []
        indices: dict[str, int] = {}
        for pair in corpus.pairs:
            if pair.origin == ORIGIN_ORIGINAL:
                key = pair.example_id
            else:
                indices[pair.example_id] = indices.get(pair.example_id, 0) + 1
                key = PARAPHRASE_ID_FORMAT.format(
                    example_id=pair.example_id, index=indices[pair.example_id]
                )
            parse = parses.get(key)
            if parse is None:
                raise CorpusError(f"no parse for story id {key!r}; cannot tag")
            flat = "".join(ch for ch in parse.text if not ch.isspace())
            want = "".join(ch for ch in pair.tgt if not ch.isspace())
            if flat != want:
                raise CorpusError(f"parse for {key!r} does not reconstruct its story text")
            tagged = tag_story(parse, targets)
            retagged.append(AugmentedPair(pair.example_id, pair.src, tagged.text, pair.origin))
        corpus.pairs = retagged

    report = write_augmented_corpus(corpus, output, max_units, targets.labels)
    accepted_total = sum(corpus.accepted_counts.values())
    print(f"wrote {report.pairs} pairs -> {output} "
          f"({len(examples)} originals + {accepted_total} paraphrases, "
          f"{report.truncated} truncated)")
    report_path = _setting(args, config, "report", None)
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            json.dump({
                "pairs": report.pairs,
                "truncated": report.truncated,
                "accepted_counts": corpus.accepted_counts,
            }, fh, ensure_ascii=False, indent=2)
            fh.write("\n")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    weights = _resolve_weights(_setting(args, config, "weights", "lot-val"))

    if args.aggregate_only:
        scores = [float(v) for v in args.aggregate_only]
        print(render_table(tuple(scores) + (overall(scores, weights),)))
        return 0

    examples, _strict = _load_split_examples(args, config)
    generated_path = _require_path(_setting(args, config, "generated", None), "--generated")
    targets = _resolve_targets(args, config)

    generated = _read_generated(generated_path)
    want = [ex.id for ex in examples]
    want_set = set(want)
    missing = [i for i in want if i not in generated]
    extra = [i for i in generated if i not in want_set]
    if missing or extra:
        raise CorpusError(
            f"generated ids do not match the reference split: "
            f"missing={missing[:10]} extra={extra[:10]}"
        )

    report = evaluate_corpus(
        [generated[i] for i in want],
        [ex.story for ex in examples],
        [ex.phrases for ex in examples],
        weights=weights,
        targets=targets,
    )
    print(report.table())
    output = _setting(args, config, "output", None)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
        print(f"report -> {output}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    examples, _strict = _load_split_examples(args, config)
    split = DatasetSplit(_setting(args, config, "split", "val"), tuple(examples))
    parses_path = _setting(args, config, "parses", None)
    parses = load_conllu(parses_path, examples=examples) if parses_path else None
    report = dataset_stats(split, parses)
    print(report.table())
    output = _setting(args, config, "output", None)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
        print(f"report -> {output}")
    return 0


def cmd_emit_training(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    examples, _strict = _load_split_examples(args, config)
    targets = _resolve_targets(args, config)
    output = _require_path(_setting(args, config, "output", None), "--output")
    max_units = int(_setting(args, config, "max_units", DEFAULT_MAX_UNITS))
    rule = _source_rule(args, config)

    if args.tagged:
        parses_path = _require_path(_setting(args, config, "parses", None), "--parses")
        parses = {p.example_id: p for p in load_conllu(parses_path, examples=examples)}
        missing = [ex.id for ex in examples if ex.id not in parses]
        if missing:
            raise CorpusError(f"no parses for example ids {missing[:5]}")
        targets_of = {ex.id: tag_story(parses[ex.id], targets).text for ex in examples}
    else:
        targets_of = {ex.id: ex.story for ex in examples}

    pairs = [(assemble_source(ex, rule), targets_of[ex.id]) for ex in examples]
    report = write_training_pairs(pairs, output, max_units, targets.labels)
    print(f"wrote {report.pairs} pairs -> {output} ({report.truncated} truncated)")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its fields")
    parser.add_argument("--examples", help="example JSONL file (id/title/outline/story)")
    strictness = parser.add_mutually_exclusive_group()
    strictness.add_argument("--strict", dest="strict", action="store_true", default=None,
                            help="abort on any invariant violation (default)")
    strictness.add_argument("--permissive", dest="strict", action="store_false",
                            help="skip violating records and report them")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="outgenkit",
        description="Corpus augmentation and evaluation for outline-conditioned story generation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tag", help="insert dependency markers into parsed stories")
    _add_common(p)
    p.add_argument("--parses", help="CoNLL-U parse file")
    p.add_argument("--output", help="tagged-corpus JSONL output")
    p.add_argument("--targets", nargs="+", help="target relation labels")
    p.add_argument("--aliases", nargs="*", metavar="SEEN=CANONICAL",
                   help="label alias pairs, e.g. obj=dobj")
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("augment", help="merge paraphrases into an augmented corpus")
    _add_common(p)
    p.add_argument("--paraphrases", help="paraphrase-candidate JSONL file")
    p.add_argument("--output", help="augmented-corpus JSONL output")
    p.add_argument("--report", help="write acceptance report JSON here")
    p.add_argument("--originals-only", action="store_true",
                   help="emit one pair per example, no paraphrases")
    p.add_argument("--tag", action="store_true",
                   help="tag targets with dependency markers (needs --parses covering "
                        "originals and accepted paraphrases)")
    p.add_argument("--parses", help="CoNLL-U parses for --tag")
    p.add_argument("--emit-accepted", metavar="PATH",
                   help="write accepted paraphrases as {id, story} JSONL for the parser adapter")
    p.add_argument("--targets", nargs="+")
    p.add_argument("--aliases", nargs="*")
    p.add_argument("--max-units", dest="max_units", type=int)
    p.add_argument("--max-accepted", dest="max_accepted", type=int)
    p.add_argument("--min-length-ratio", dest="min_length_ratio", type=float)
    p.add_argument("--max-length-ratio", dest="max_length_ratio", type=float)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("evaluate", help="score generated stories against a reference split")
    _add_common(p)
    p.add_argument("--generated", help="generated-story JSONL ({id, story})")
    p.add_argument("--output", help="metric report JSON output")
    p.add_argument("--weights", help="lot-val, lot-test, or 6 comma-separated numbers")
    p.add_argument("--aggregate-only", nargs=6, type=float,
                   metavar=("B1", "B2", "D1", "D2", "COVER", "ORDER"),
                   help="just aggregate six given scores into Overall")
    p.add_argument("--targets", nargs="+")
    p.add_argument("--aliases", nargs="*")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("stats", help="dataset statistics for a split")
    _add_common(p)
    p.add_argument("--split", choices=["train", "val", "test"])
    p.add_argument("--parses", help="CoNLL-U parses enabling word-level statistics")
    p.add_argument("--output", help="stats report JSON output")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("emit-training", help="write model-ready training pairs")
    _add_common(p)
    p.add_argument("--output", help="training-pair JSONL output")
    p.add_argument("--tagged", action="store_true", help="use dependency-tagged targets")
    p.add_argument("--parses", help="CoNLL-U parses for --tagged")
    p.add_argument("--targets", nargs="+")
    p.add_argument("--aliases", nargs="*")
    p.add_argument("--max-units", dest="max_units", type=int)
    p.set_defaults(func=cmd_emit_training)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "weights", None) and "," in str(args.weights):
        args.weights = [float(v) for v in str(args.weights).split(",")]
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CorpusError, AugmentError, StatsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
