"""Dataset statistics and sanity reporting for corpus files.

Character counts exclude whitespace and count Unicode code points.
Word-level figures need dependency parses (the segmenter's output); when
parses are absent the vocabulary falls back to distinct characters and is
flagged as such, and word averages are omitted.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .corpus import DatasetSplit, ParsedStory

SENTENCE_TERMINATORS = "。！？；"
CLOSING_QUOTES = "”’」』"


class StatsError(ValueError):
    """The split and parses handed to the stats module do not line up."""


def sentence_split(text: str) -> list[str]:
    """Split after 。！？； and any closing quotes glued to them.

    A trailing fragment without a terminator counts as one sentence;
    empty segments are dropped.
    """
    sentences: list[str] = []
    start = 0
    i = 0
    while i < len(text):
        if text[i] in SENTENCE_TERMINATORS:
            i += 1
            while i < len(text) and text[i] in CLOSING_QUOTES:
                i += 1
            chunk = text[start:i]
            if chunk.strip():
                sentences.append(chunk)
            start = i
        else:
            i += 1
    tail = text[start:]
    if tail.strip():
        sentences.append(tail)
    return sentences


def _char_count(text: str) -> int:
    return sum(1 for ch in text if not ch.isspace())


@dataclass
class StatsReport:
    """Split-level means in the benchmark's statistics layout."""

    split: str
    example_count: int
    vocab_size: int
    vocab_is_char_fallback: bool
    avg_outline_phrases: float
    avg_story_chars: float
    avg_story_sents: float
    avg_title_words: float | None = None   # needs a segmented title source
    avg_outline_words: float | None = None  # needs a segmented outline source
    avg_story_words: float | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "split": self.split,
            "example_count": self.example_count,
            "vocab_size": self.vocab_size,
            "vocab_is_char_fallback": self.vocab_is_char_fallback,
            "avg_title_words": self.avg_title_words,
            "avg_outline_words": self.avg_outline_words,
            "avg_outline_phrases": self.avg_outline_phrases,
            "avg_story_chars": self.avg_story_chars,
            "avg_story_words": self.avg_story_words,
            "avg_story_sents": self.avg_story_sents,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)

    def table(self) -> str:
        def fmt(value):
            return "-" if value is None else f"{value:.2f}"

        vocab = f"{self.vocab_size}" + (" (chars)" if self.vocab_is_char_fallback else "")
        rows = [
            ("# Examples", str(self.example_count)),
            ("Vocabulary Size", vocab),
            ("Avg. # Word in Input Title", fmt(self.avg_title_words)),
            ("Avg. # Word in Input Outline", fmt(self.avg_outline_words)),
            ("Avg. # Phrase in Input Outline", fmt(self.avg_outline_phrases)),
            ("Avg. # Char in Output Text", fmt(self.avg_story_chars)),
            ("Avg. # Word in Output Text", fmt(self.avg_story_words)),
            ("Avg. # Sent in Output Text", fmt(self.avg_story_sents)),
        ]
        width = max(len(label) for label, _ in rows)
        return "\n".join(f"{label:<{width}}  {value:>10}" for label, value in rows)


def dataset_stats(split: DatasetSplit, parses: Sequence[ParsedStory] | None = None) -> StatsReport:
    """Compute split statistics; word-level fields require story parses."""
    if not split.examples:
        raise StatsError(f"split {split.name!r} is empty")

    n = len(split.examples)
    char_total = sum(_char_count(ex.story) for ex in split.examples)
    sent_total = sum(len(sentence_split(ex.story)) for ex in split.examples)
    phrase_total = sum(len(ex.phrases) for ex in split.examples)

    notes = ["title/outline word counts need a segmented source and are omitted"]
    avg_story_words = None
    if parses is not None:
        by_id = {p.example_id: p for p in parses}
        missing = [ex.id for ex in split.examples if ex.id not in by_id]
        if missing:
            raise StatsError(
                f"parses do not cover {len(missing)} example(s), e.g. {missing[0]!r}"
            )
        vocab: set[str] = set()
        word_total = 0
        for ex in split.examples:
            for sentence in by_id[ex.id].sentences:
                word_total += len(sentence.segments)
                vocab.update(seg.text for seg in sentence.segments)
        vocab_size = len(vocab)
        fallback = False
        avg_story_words = word_total / n
    else:
        vocab = set()
        for ex in split.examples:
            vocab.update(ch for ch in ex.story if not ch.isspace())
        vocab_size = len(vocab)
        fallback = True
        notes.append("no parses supplied: vocabulary is distinct characters, word averages omitted")

    return StatsReport(
        split=split.name,
        example_count=n,
        vocab_size=vocab_size,
        vocab_is_char_fallback=fallback,
        avg_outline_phrases=phrase_total / n,
        avg_story_chars=char_total / n,
        avg_story_sents=sent_total / n,
        avg_story_words=avg_story_words,
        notes=notes,
    )
