"""Domain types and interchange-file I/O for outline-conditioned story corpora.

Every type in here is immutable and validated on construction, so
downstream code can assume the invariants hold.  Interchange files are
UTF-8 JSONL (examples, paraphrase candidates, training pairs) and
CoNLL-U (dependency parses).  Loaders and writers are single-reader /
single-writer per file; the values they return are safe to share across
threads.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from ._marks import iter_units, normalize_labels

SPLIT_NAMES = ("train", "val", "test")
OUTLINE_SIZE = 8

# Relations whose segments receive inline markers.  Defined here (rather
# than in the tagger) because the training-file writer needs the default
# marker set for unit counting.
DEFAULT_TARGET_LABELS = ("nsubj", "root", "dobj", "pobj")

ROOT = -1  # sentinel head index for the root arc
ROOT_RELATION = "root"

DEFAULT_MAX_UNITS = 512


class CorpusError(ValueError):
    """A corpus file or record violates the format contract."""


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class OutlineExample:
    """One benchmark record: a title, 8 outline phrases, a reference story."""

    id: str
    title: str
    phrases: tuple[str, ...]
    story: str

    def __post_init__(self):
        object.__setattr__(self, "phrases", tuple(self.phrases))

    def validate(self, require_phrase_count: bool = True) -> None:
        if not self.id:
            raise CorpusError("field 'id' is empty")
        if require_phrase_count and len(self.phrases) != OUTLINE_SIZE:
            raise CorpusError(
                f"field 'outline' has {len(self.phrases)} phrases, expected {OUTLINE_SIZE}"
            )
        if any(not p for p in self.phrases):
            raise CorpusError("field 'outline' contains an empty phrase")
        if not self.story:
            raise CorpusError("field 'story' is empty")


@dataclass(frozen=True)
class WordSegment:
    """One word segment; token_count is its length in Unicode code points."""

    text: str
    token_count: int

    def __post_init__(self):
        if not self.text:
            raise CorpusError("segment text is empty")
        if self.token_count != len(self.text):
            raise CorpusError(
                f"token_count {self.token_count} != {len(self.text)} for segment {self.text!r}"
            )

    @classmethod
    def from_text(cls, text: str) -> "WordSegment":
        return cls(text, len(text))


@dataclass(frozen=True)
class DependencyArc:
    """A single-head arc: dependent segment -> head segment, labelled."""

    dependent: int
    head: int  # segment index, or ROOT for the root arc
    relation: str

    def __post_init__(self):
        if self.dependent < 0:
            raise CorpusError(f"negative dependent index {self.dependent}")
        if self.head < ROOT:
            raise CorpusError(f"invalid head index {self.head}")
        if not self.relation:
            raise CorpusError("empty relation label")
        if (self.relation == ROOT_RELATION) != (self.head == ROOT):
            raise CorpusError(
                f"relation {self.relation!r} with head {self.head}: "
                f"'{ROOT_RELATION}' and the ROOT head must occur together"
            )


@dataclass(frozen=True)
class ParsedSentence:
    """An ordered run of segments with exactly one arc per segment."""

    segments: tuple[WordSegment, ...]
    arcs: tuple[DependencyArc, ...]

    def __post_init__(self):
        segments = tuple(self.segments)
        arcs = tuple(sorted(self.arcs, key=lambda a: a.dependent))
        object.__setattr__(self, "segments", segments)
        object.__setattr__(self, "arcs", arcs)
        n = len(segments)
        if n == 0:
            raise CorpusError("empty sentence")
        if [a.dependent for a in arcs] != list(range(n)):
            raise CorpusError("arcs must cover each segment index exactly once")
        for a in arcs:
            if a.head != ROOT and not 0 <= a.head < n:
                raise CorpusError(f"head index {a.head} out of range for {n} segments")
            if a.head == a.dependent:
                raise CorpusError(f"segment {a.dependent} is its own head")
        self._check_acyclic(arcs)

    @staticmethod
    def _check_acyclic(arcs: tuple[DependencyArc, ...]) -> None:
        # every head chain must reach ROOT within n steps
        n = len(arcs)
        for start in range(n):
            node, steps = start, 0
            while node != ROOT:
                node = arcs[node].head
                steps += 1
                if steps > n:
                    raise CorpusError(f"cyclic head chain through segment {start}")

    @property
    def text(self) -> str:
        return "".join(seg.text for seg in self.segments)


@dataclass(frozen=True)
class ParsedStory:
    """A story as parsed sentences; concatenated segments reproduce the text."""

    example_id: str
    sentences: tuple[ParsedSentence, ...]

    def __post_init__(self):
        if not self.example_id:
            raise CorpusError("empty example_id")
        object.__setattr__(self, "sentences", tuple(self.sentences))

    @property
    def text(self) -> str:
        return "".join(sent.text for sent in self.sentences)


@dataclass(frozen=True)
class ParaphraseSet:
    """Raw paraphrase candidates and the accepted subset for one example."""

    example_id: str
    candidates: tuple[str, ...]
    accepted: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(self, "accepted", tuple(self.accepted))
        if not self.example_id:
            raise CorpusError("empty example_id")
        pool = set(self.candidates)
        for text in self.accepted:
            if text not in pool:
                raise CorpusError(
                    f"accepted paraphrase not among candidates for {self.example_id}"
                )


@dataclass(frozen=True)
class DatasetSplit:
    """A named benchmark split (train/val/test) with its examples."""

    name: str
    examples: tuple[OutlineExample, ...]

    def __post_init__(self):
        if self.name not in SPLIT_NAMES:
            raise CorpusError(f"split name must be one of {SPLIT_NAMES}, got {self.name!r}")
        object.__setattr__(self, "examples", tuple(self.examples))
        seen = set()
        for ex in self.examples:
            if ex.id in seen:
                raise CorpusError(f"duplicate example id {ex.id!r} in split {self.name}")
            seen.add(ex.id)


# ---------------------------------------------------------------------------
# example JSONL


@dataclass
class LoadReport:
    """What a permissive load kept, skipped, or relaxed."""

    path: str
    lines: int = 0
    loaded: int = 0
    skipped: int = 0
    relaxed: int = 0  # kept despite a non-standard outline size
    errors: list[str] = field(default_factory=list)


def _parse_example_line(record: object) -> OutlineExample:
    if not isinstance(record, dict):
        raise CorpusError("record is not a JSON object")
    fields = {}
    for key in ("id", "title", "story"):
        value = record.get(key)
        if not isinstance(value, str):
            raise CorpusError(f"field {key!r} missing or not a string")
        fields[key] = value
    outline = record.get("outline")
    if not isinstance(outline, list) or any(not isinstance(p, str) for p in outline):
        raise CorpusError("field 'outline' missing or not an array of strings")
    return OutlineExample(fields["id"], fields["title"], tuple(outline), fields["story"])


def read_examples(path, strict: bool = True) -> tuple[list[OutlineExample], LoadReport]:
    """Load an example JSONL file, returning the examples and a load report.

    In strict mode the first invariant violation aborts with a message
    naming the line and field.  In permissive mode a non-standard outline
    size is tolerated (counted as relaxed); any other violation skips the
    line and is counted in the report.
    """
    path = Path(path)
    report = LoadReport(path=str(path))
    examples: list[OutlineExample] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            report.lines += 1
            try:
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorpusError(f"malformed JSON ({exc.msg})") from exc
                example = _parse_example_line(record)
                if example.id in seen_ids:
                    raise CorpusError(f"duplicate id {example.id!r}")
                try:
                    example.validate(require_phrase_count=True)
                    relaxed = False
                except CorpusError:
                    # phrase count is the one invariant permissive mode relaxes;
                    # everything else must still hold
                    example.validate(require_phrase_count=False)
                    relaxed = True
                    if strict:
                        raise CorpusError(
                            f"field 'outline' has {len(example.phrases)} phrases, "
                            f"expected {OUTLINE_SIZE}"
                        )
            except CorpusError as exc:
                if strict:
                    raise CorpusError(f"{path}: line {lineno}: {exc}") from None
                report.skipped += 1
                report.errors.append(f"line {lineno}: {exc}")
                continue
            seen_ids.add(example.id)
            examples.append(example)
            report.loaded += 1
            if relaxed:
                report.relaxed += 1
    return examples, report


def load_examples(path, strict: bool = True) -> list[OutlineExample]:
    """Load and validate an example JSONL file (see read_examples)."""
    examples, _ = read_examples(path, strict=strict)
    return examples


def write_examples(examples: Iterable[OutlineExample], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for ex in examples:
            fh.write(json.dumps(
                {"id": ex.id, "title": ex.title, "outline": list(ex.phrases), "story": ex.story},
                ensure_ascii=False,
            ) + "\n")


# ---------------------------------------------------------------------------
# CoNLL-U parses

_CONLLU_COLUMNS = 10


def _strip_ws(text: str) -> str:
    return "".join(ch for ch in text if not ch.isspace())


def _first_divergence(a: str, b: str) -> int:
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return i
    return min(len(a), len(b))


def _finish_sentence(rows: list[tuple[int, str, int, str]], context: str) -> ParsedSentence:
    if [row[0] for row in rows] != list(range(1, len(rows) + 1)):
        raise CorpusError(f"{context}: token ids must run 1..n without gaps")
    segments = tuple(WordSegment.from_text(form) for _, form, _, _ in rows)
    n = len(rows)
    arcs = []
    for token_id, _, head, deprel in rows:
        if not 0 <= head <= n:
            raise CorpusError(f"{context}: HEAD {head} out of range for {n} tokens")
        arcs.append(DependencyArc(token_id - 1, head - 1 if head else ROOT, deprel))
    try:
        return ParsedSentence(segments, tuple(arcs))
    except CorpusError as exc:
        raise CorpusError(f"{context}: {exc}") from None


def load_conllu(path, examples: Mapping[str, OutlineExample] | Iterable[OutlineExample] | None = None) -> list[ParsedStory]:
    """Read blank-line-separated CoNLL-U sentences grouped into stories.

    A ``# example_id = <id>`` comment opens each story block.  When
    examples are supplied, each story whose id resolves to an example is
    checked to reconstruct that example's story text (whitespace ignored);
    a mismatch reports the first divergent character offset.
    """
    path = Path(path)
    by_id: dict[str, OutlineExample] = {}
    if examples is not None:
        if isinstance(examples, Mapping):
            by_id = dict(examples)
        else:
            by_id = {ex.id: ex for ex in examples}

    stories: list[ParsedStory] = []
    seen_ids: set[str] = set()
    current_id: str | None = None
    sentences: list[ParsedSentence] = []
    rows: list[tuple[int, str, int, str]] = []

    def flush_sentence(lineno: int) -> None:
        nonlocal rows
        if not rows:
            return
        if current_id is None:
            raise CorpusError(f"{path}: line {lineno}: sentence without an example_id comment")
        sentences.append(_finish_sentence(rows, f"{path}: sentence ending at line {lineno}"))
        rows = []

    def flush_story(lineno: int) -> None:
        nonlocal sentences, current_id
        flush_sentence(lineno)
        if current_id is None:
            return
        if not sentences:
            raise CorpusError(f"{path}: story {current_id!r} has no sentences")
        story = ParsedStory(current_id, tuple(sentences))
        example = by_id.get(current_id)
        if example is not None:
            got, want = _strip_ws(story.text), _strip_ws(example.story)
            if got != want:
                offset = _first_divergence(got, want)
                raise CorpusError(
                    f"{path}: story {current_id!r} does not reconstruct the example story; "
                    f"first divergence at character offset {offset}"
                )
        stories.append(story)
        sentences = []
        current_id = None

    lineno = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line.strip():
                flush_sentence(lineno)
                continue
            if line.startswith("#"):
                comment = line[1:].strip()
                if comment.startswith("example_id"):
                    _, _, value = comment.partition("=")
                    value = value.strip()
                    if not value:
                        raise CorpusError(f"{path}: line {lineno}: empty example_id")
                    flush_story(lineno)
                    if value in seen_ids:
                        raise CorpusError(f"{path}: line {lineno}: duplicate example_id {value!r}")
                    seen_ids.add(value)
                    current_id = value
                continue
            cols = line.split("\t")
            if len(cols) < 8:
                raise CorpusError(f"{path}: line {lineno}: expected {_CONLLU_COLUMNS} columns")
            if "-" in cols[0] or "." in cols[0]:
                raise CorpusError(
                    f"{path}: line {lineno}: multiword-token and empty-node ids are not supported"
                )
            try:
                token_id, head = int(cols[0]), int(cols[6])
            except ValueError:
                raise CorpusError(f"{path}: line {lineno}: ID and HEAD must be integers") from None
            deprel = cols[7]
            if not deprel or deprel == "_":
                raise CorpusError(f"{path}: line {lineno}: DEPREL is not populated")
            rows.append((token_id, cols[1], head, deprel))
    flush_story(lineno)
    return stories


def write_conllu(stories: Iterable[ParsedStory], path) -> None:
    """Serialize stories so that load_conllu reads them back identically."""
    with open(path, "w", encoding="utf-8") as fh:
        for story in stories:
            fh.write(f"# example_id = {story.example_id}\n")
            for i, sent in enumerate(story.sentences, 1):
                fh.write(f"# sent_id = {story.example_id}-{i}\n")
                for seg, arc in zip(sent.segments, sent.arcs):
                    head = 0 if arc.head == ROOT else arc.head + 1
                    fh.write(
                        f"{arc.dependent + 1}\t{seg.text}\t_\t_\t_\t_\t{head}\t{arc.relation}\t_\t_\n"
                    )
                fh.write("\n")


# ---------------------------------------------------------------------------
# paraphrase candidates


def read_paraphrase_file(path) -> list[tuple[str, tuple[str, ...]]]:
    """Read JSONL records {example_id, candidates} in file order."""
    path = Path(path)
    out: list[tuple[str, tuple[str, ...]]] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}: line {lineno}: malformed JSON ({exc.msg})") from exc
            if not isinstance(record, dict) or not isinstance(record.get("example_id"), str):
                raise CorpusError(f"{path}: line {lineno}: field 'example_id' missing or invalid")
            candidates = record.get("candidates")
            if not isinstance(candidates, list) or any(not isinstance(c, str) for c in candidates):
                raise CorpusError(f"{path}: line {lineno}: field 'candidates' must be an array of strings")
            example_id = record["example_id"]
            if example_id in seen:
                raise CorpusError(f"{path}: line {lineno}: duplicate example_id {example_id!r}")
            seen.add(example_id)
            out.append((example_id, tuple(candidates)))
    return out


# ---------------------------------------------------------------------------
# training pairs


@dataclass
class WriteReport:
    """Counts from a training-file write."""

    pairs: int = 0
    truncated: int = 0


def truncate_units(text: str, max_units: int, marker_labels: Sequence[str] = DEFAULT_TARGET_LABELS) -> tuple[str, bool]:
    """Cut text to max_units, never splitting a marker or escape chunk."""
    if max_units < 1:
        raise ValueError("max_units must be >= 1")
    labels = normalize_labels(marker_labels)
    parts: list[str] = []
    used = 0
    for chunk, weight in iter_units(text, labels):
        if used + weight > max_units:
            return "".join(parts), True
        parts.append(chunk)
        used += weight
    return text, False


def count_units(text: str, marker_labels: Sequence[str] = DEFAULT_TARGET_LABELS) -> int:
    return sum(weight for _, weight in iter_units(text, normalize_labels(marker_labels)))


def write_training_pairs(
    pairs: Iterable[tuple[str, str]],
    path,
    max_units: int = DEFAULT_MAX_UNITS,
    marker_labels: Sequence[str] = DEFAULT_TARGET_LABELS,
) -> WriteReport:
    """Emit JSONL {src, tgt} records, truncating long targets at unit boundaries.

    A unit is one Unicode character, except that an inline tag marker
    counts as a single unit.
    """
    if max_units < 1:
        raise ValueError("max_units must be >= 1")
    report = WriteReport()
    with open(path, "w", encoding="utf-8") as fh:
        for src, tgt in pairs:
            tgt, cut = truncate_units(tgt, max_units, marker_labels)
            if cut:
                report.truncated += 1
            fh.write(json.dumps({"src": src, "tgt": tgt}, ensure_ascii=False) + "\n")
            report.pairs += 1
    return report
