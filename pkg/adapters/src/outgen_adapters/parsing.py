"""Dependency-parser adapter: stories in, CoNLL-U blocks out.

Each story becomes one block opened by ``# example_id = <id>``; rows are
(ID, FORM, HEAD, DEPREL) in the 10-column layout with ``_`` placeholders.
Labels follow the Stanford-style scheme of the parser.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Protocol

from ._io import AdapterInputError, atomic_output, file_digest, read_story_records
from .manifest import AdapterManifest, write_manifest

# (form, head, deprel) with 1-based heads and 0 for the sentence root
Row = tuple[str, int, str]


class ToolUnavailableError(RuntimeError):
    """The external tool cannot be imported or its model cannot be loaded."""


class ParserBackend(Protocol):
    tool: str
    version: str
    parameters: dict

    def parse(self, text: str) -> list[list[Row]]:
        """Parse one story into sentences of (form, head, deprel) rows."""


class HanlpParser:
    """Batch parsing through the HanLP multi-task pipeline.

    Needs the hanlp package and a downloadable model; both are checked
    lazily so offline environments fail with a clear error instead of an
    import-time crash.
    """

    DEFAULT_MODEL = "CLOSE_TOK_POS_NER_SRL_DEP_SDP_CON_ELECTRA_SMALL_ZH"

    def __init__(self, model: str | None = None):
        self.tool = "hanlp"
        model = model or self.DEFAULT_MODEL
        self.parameters = {"model": model}
        try:
            import hanlp  # noqa: PLC0415  (deliberate lazy import)
        except ImportError as exc:
            raise ToolUnavailableError(
                "hanlp is not installed; pip install 'outgen-adapters[hanlp]'"
            ) from exc
        self.version = getattr(hanlp, "__version__", "unknown")
        try:
            identifier = getattr(hanlp.pretrained.mtl, model, model)
            self._pipeline = hanlp.load(identifier)
        except Exception as exc:  # model download/load failure
            raise ToolUnavailableError(f"could not load hanlp model {model!r}: {exc}") from exc

    def parse(self, text: str) -> list[list[Row]]:
        result = self._pipeline(text, tasks="dep")
        tokens = result["tok/fine"]
        deps = result["dep"]
        if tokens and not isinstance(tokens[0], list):  # single-sentence result
            tokens, deps = [tokens], [deps]
        sentences = []
        for sent_tokens, sent_deps in zip(tokens, deps):
            sentences.append([
                (form, head, deprel)
                for form, (head, deprel) in zip(sent_tokens, sent_deps)
            ])
        return sentences


class ReplayParser:
    """Replays recorded parses from a JSON file keyed by story text.

    The record/replay pattern keeps test runs deterministic and offline
    while exercising the exact same adapter path as a live tool.
    """

    def __init__(self, replay_file):
        self.tool = "replay-parser"
        self.version = file_digest(replay_file)
        self.parameters = {"replay_file": str(replay_file)}
        with open(replay_file, encoding="utf-8") as fh:
            self._parses = json.load(fh)

    def parse(self, text: str) -> list[list[Row]]:
        try:
            sentences = self._parses[text]
        except KeyError:
            raise AdapterInputError(f"replay file has no parse for story {text[:20]!r}...") from None
        return [[(form, head, deprel) for form, head, deprel in sent] for sent in sentences]


def _write_block(fh, story_id: str, sentences: list[list[Row]]) -> None:
    fh.write(f"# example_id = {story_id}\n")
    for i, sentence in enumerate(sentences, 1):
        fh.write(f"# sent_id = {story_id}-{i}\n")
        for j, (form, head, deprel) in enumerate(sentence, 1):
            fh.write(f"{j}\t{form}\t_\t_\t_\t_\t{head}\t{deprel}\t_\t_\n")
        fh.write("\n")


def parse_stories(input_path, output_path, backend: ParserBackend) -> AdapterManifest:
    """Parse every story in input_path into one CoNLL-U block each."""
    records = read_story_records(input_path)
    count = 0
    with atomic_output(output_path) as fh:
        for story_id, story in records:
            sentences = backend.parse(story)
            if not sentences or any(not s for s in sentences):
                raise AdapterInputError(f"parser returned an empty parse for {story_id!r}")
            _write_block(fh, story_id, sentences)
            count += 1
    manifest = AdapterManifest(
        tool=backend.tool,
        version=backend.version,
        parameters=dict(backend.parameters),
        input_path=str(Path(input_path)),
        output_path=str(Path(output_path)),
        record_count=count,
    )
    write_manifest(manifest)
    return manifest
