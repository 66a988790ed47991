"""Inline dependency-role tagging of parsed stories, and its inverse.

Segments whose arc carries a target relation (by default nsubj, root,
dobj, pobj) are followed by a literal marker such as ``<root>``, with no
whitespace introduced, e.g.::

    他们<nsubj>游历<root>了所有的国家<dobj>

Raw text that already contains a marker string is escaped on the way in
(``\\<root>``) and unescaped by strip_tags, so tagging stays reversible.
All functions here are pure; stories can be tagged in parallel.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ._marks import marker_pattern, marker_token, normalize_labels, scan_pattern
from .corpus import DEFAULT_TARGET_LABELS, CorpusError, DependencyArc, ParsedStory

# parsers disagree on object labels across versions; fold them together
DEFAULT_LABEL_ALIASES = {"obj": "dobj"}

_LABEL_CHARS = set("abcdefghijklmnopqrstuvwxyz0123456789:_")


def _check_label(label: str) -> None:
    if not label or not set(label) <= _LABEL_CHARS:
        raise CorpusError(f"relation label {label!r} must be lowercase ASCII")


@dataclass(frozen=True)
class TargetRelationSet:
    """The relation labels that receive markers, plus a label-alias map."""

    relations: frozenset[str] = frozenset(DEFAULT_TARGET_LABELS)
    aliases: Mapping[str, str] = field(default_factory=lambda: dict(DEFAULT_LABEL_ALIASES))

    def __post_init__(self):
        object.__setattr__(self, "relations", frozenset(self.relations))
        object.__setattr__(self, "aliases", dict(self.aliases))
        if not self.relations:
            raise CorpusError("target relation set is empty")
        for label in self.relations:
            _check_label(label)
        for label in self.aliases.values():
            _check_label(label)

    def canonical(self, label: str) -> str:
        return self.aliases.get(label, label)

    def matches(self, label: str) -> bool:
        return self.canonical(label) in self.relations

    @property
    def labels(self) -> tuple[str, ...]:
        return normalize_labels(self.relations)


DEFAULT_TARGETS = TargetRelationSet()


@dataclass(frozen=True)
class TaggedStory:
    """Story text with inline markers and provenance to the untagged parse."""

    example_id: str
    text: str
    marker_count: int

    def __post_init__(self):
        if self.marker_count < 0:
            raise CorpusError("negative marker_count")


def select_targets(
    arcs: Iterable[DependencyArc], targets: TargetRelationSet = DEFAULT_TARGETS
) -> list[DependencyArc]:
    """Return exactly the arcs whose relation is targeted, by segment order."""
    return [a for a in sorted(arcs, key=lambda a: a.dependent) if targets.matches(a.relation)]


def escape_markers(text: str, targets: TargetRelationSet = DEFAULT_TARGETS) -> str:
    """Backslash-escape raw occurrences of any target marker string."""
    return marker_pattern(targets.labels).sub(lambda m: "\\" + m.group(0), text)


def tag_story(story: ParsedStory, targets: TargetRelationSet = DEFAULT_TARGETS) -> TaggedStory:
    """Insert a marker directly after each segment with a target relation.

    Segment order, sentence order, and every character of the untagged
    story are preserved; markers use the canonical (alias-resolved) label.
    """
    parts: list[str] = []
    count = 0
    for sentence in story.sentences:
        for segment, arc in zip(sentence.segments, sentence.arcs):
            parts.append(escape_markers(segment.text, targets))
            if targets.matches(arc.relation):
                parts.append(marker_token(targets.canonical(arc.relation)))
                count += 1
    return TaggedStory(story.example_id, "".join(parts), count)


def strip_tags(text: str, targets: TargetRelationSet = DEFAULT_TARGETS) -> str:
    """Remove target markers and unescape escaped ones; leave all else alone."""
    return scan_pattern(targets.labels).sub(
        lambda m: m.group(2) if m.group(1) else "", text
    )


def count_markers(text: str, targets: TargetRelationSet = DEFAULT_TARGETS) -> int:
    """Count live (unescaped) marker occurrences in text."""
    return sum(1 for m in scan_pattern(targets.labels).finditer(text) if not m.group(1))


def relation_counts(
    stories: Iterable[ParsedStory], targets: TargetRelationSet = DEFAULT_TARGETS
) -> dict[str, int]:
    """Marker totals per canonical relation across a corpus."""
    counts = {label: 0 for label in sorted(targets.relations)}
    for story in stories:
        for sentence in story.sentences:
            for arc in select_targets(sentence.arcs, targets):
                counts[targets.canonical(arc.relation)] += 1
    return counts


def write_tagged_stories(tagged: Iterable[TaggedStory], path) -> int:
    """Write the tagged-corpus JSONL file; returns the record count."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for story in tagged:
            fh.write(json.dumps(
                {"id": story.example_id, "tagged_story": story.text, "marker_count": story.marker_count},
                ensure_ascii=False,
            ) + "\n")
            n += 1
    return n
