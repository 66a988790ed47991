"""Inline-marker scanning shared by the tagger and the training-file writer.

A marker is the literal string ``<label>`` appended after a word segment.
Raw story text that happens to contain such a string is written with a
backslash in front (``\\<label>``) so that stripping markers can tell tag
from text.
"""
from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterator, Sequence


def marker_token(label: str) -> str:
    return "<" + label + ">"


def normalize_labels(labels: Sequence[str]) -> tuple[str, ...]:
    """Deduplicate and sort labels so pattern caches hit."""
    return tuple(sorted(set(labels)))


def _alternation(labels: tuple[str, ...]) -> str:
    # longest-first so no label can shadow another that it prefixes
    ordered = sorted(labels, key=len, reverse=True)
    return "|".join(re.escape(marker_token(lbl)) for lbl in ordered)


@lru_cache(maxsize=64)
def marker_pattern(labels: tuple[str, ...]) -> re.Pattern[str]:
    """Matches a bare marker, ignoring any escaping backslash in front."""
    return re.compile("(?:" + _alternation(labels) + ")")


@lru_cache(maxsize=64)
def scan_pattern(labels: tuple[str, ...]) -> re.Pattern[str]:
    """Matches a marker with an optional escaping backslash (group 1)."""
    return re.compile(r"(\\?)(" + _alternation(labels) + ")")


def iter_units(text: str, labels: tuple[str, ...]) -> Iterator[tuple[str, int]]:
    """Yield (chunk, weight) pairs for truncation at unit boundaries.

    A plain character weighs 1 unit, a live marker weighs 1 unit (one
    vocabulary item to a downstream generator), and an escaped marker is
    an indivisible chunk weighing the number of characters it decodes to.
    """
    pos = 0
    for m in scan_pattern(labels).finditer(text):
        for ch in text[pos:m.start()]:
            yield ch, 1
        if m.group(1):
            yield m.group(0), len(m.group(2))
        else:
            yield m.group(0), 1
        pos = m.end()
    for ch in text[pos:]:
        yield ch, 1
