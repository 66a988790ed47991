"""Paraphrase filtering and augmented-corpus assembly.

Externally generated paraphrase candidates are merged into a training
corpus of up to 1 original + 6 accepted paraphrases per outline.  All of
the filtering is deterministic and greedy in candidate order, so a rerun
on the same inputs reproduces the same corpus byte for byte.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import (
    DEFAULT_MAX_UNITS,
    DEFAULT_TARGET_LABELS,
    OutlineExample,
    ParaphraseSet,
    WriteReport,
    truncate_units,
)

ORIGIN_ORIGINAL = "original"
ORIGIN_PARAPHRASE = "paraphrase"


class AugmentError(ValueError):
    """Paraphrase sets and examples do not line up."""


@dataclass(frozen=True)
class FilterPolicy:
    """Acceptance rules for paraphrase candidates."""

    min_length_ratio: float = 0.5
    max_length_ratio: float = 2.0
    max_accepted: int = 6
    reject_exact_duplicates: bool = True

    def __post_init__(self):
        if not 0 < self.min_length_ratio <= 1 <= self.max_length_ratio:
            raise ValueError(
                "length ratios must satisfy 0 < min <= 1 <= max, got "
                f"{self.min_length_ratio}/{self.max_length_ratio}"
            )
        if self.max_accepted < 1:
            raise ValueError("max_accepted must be >= 1")


@dataclass(frozen=True)
class SourceRule:
    """How the model input is assembled from an example."""

    include_title: bool = True
    phrase_separator: str = "#"
    title_separator: str = ":"


@dataclass(frozen=True)
class AugmentedPair:
    example_id: str
    src: str
    tgt: str
    origin: str  # ORIGIN_ORIGINAL or ORIGIN_PARAPHRASE


@dataclass
class AugmentedCorpus:
    """Training pairs plus per-example acceptance counts."""

    pairs: list[AugmentedPair]
    accepted_counts: dict[str, int]


def assemble_source(example: OutlineExample, rule: SourceRule = SourceRule()) -> str:
    """Join the outline phrases (in given order) into one source string."""
    body = rule.phrase_separator.join(example.phrases)
    if rule.include_title:
        return example.title + rule.title_separator + body
    return body


def filter_paraphrases(
    example: OutlineExample,
    candidates: Sequence[str],
    policy: FilterPolicy = FilterPolicy(),
) -> ParaphraseSet:
    """Accept the first max_accepted candidates that pass the policy.

    A candidate passes when its length is within the ratio bounds of the
    original story and (by default) it differs from the original and from
    every previously accepted text by exact string comparison.
    """
    original_len = len(example.story)
    lo = policy.min_length_ratio * original_len
    hi = policy.max_length_ratio * original_len
    accepted: list[str] = []
    for candidate in candidates:
        if len(accepted) >= policy.max_accepted:
            break
        if policy.reject_exact_duplicates and (
            candidate == example.story or candidate in accepted
        ):
            continue
        if not lo <= len(candidate) <= hi:
            continue
        accepted.append(candidate)
    return ParaphraseSet(example.id, tuple(candidates), tuple(accepted))


def build_augmented_corpus(
    examples: Sequence[OutlineExample],
    paraphrases: Iterable[ParaphraseSet] = (),
    source_rule: SourceRule = SourceRule(),
) -> AugmentedCorpus:
    """One pair per original story plus one per accepted paraphrase.

    Pair order is example order with the original first; every pair of an
    example shares the same source string.
    """
    known = {ex.id for ex in examples}
    by_id: dict[str, ParaphraseSet] = {}
    for pset in paraphrases:
        if pset.example_id not in known:
            raise AugmentError(f"paraphrase set references unknown example id {pset.example_id!r}")
        if pset.example_id in by_id:
            raise AugmentError(f"duplicate paraphrase set for example id {pset.example_id!r}")
        by_id[pset.example_id] = pset

    pairs: list[AugmentedPair] = []
    counts: dict[str, int] = {}
    for ex in examples:
        src = assemble_source(ex, source_rule)
        pairs.append(AugmentedPair(ex.id, src, ex.story, ORIGIN_ORIGINAL))
        accepted = by_id[ex.id].accepted if ex.id in by_id else ()
        for text in accepted:
            pairs.append(AugmentedPair(ex.id, src, text, ORIGIN_PARAPHRASE))
        counts[ex.id] = len(accepted)
    return AugmentedCorpus(pairs, counts)


def write_augmented_corpus(
    corpus: AugmentedCorpus,
    path,
    max_units: int = DEFAULT_MAX_UNITS,
    marker_labels: Sequence[str] = DEFAULT_TARGET_LABELS,
) -> WriteReport:
    """Write {src, tgt, origin} JSONL with the training-file truncation rule."""
    report = WriteReport()
    with open(path, "w", encoding="utf-8") as fh:
        for pair in corpus.pairs:
            tgt, cut = truncate_units(pair.tgt, max_units, marker_labels)
            if cut:
                report.truncated += 1
            fh.write(json.dumps(
                {"src": pair.src, "tgt": tgt, "origin": pair.origin}, ensure_ascii=False
            ) + "\n")
            report.pairs += 1
    return report
