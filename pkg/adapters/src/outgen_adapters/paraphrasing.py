"""Paraphrase-generator adapter: stories in, candidate JSONL out.

Each record is {example_id, candidates} with exactly n_candidates
strings, in story order.  Over-generate (n >= 6) so that downstream
filtering can still reach 6 accepted paraphrases.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Protocol

from ._io import AdapterInputError, atomic_output, file_digest, read_story_records
from .manifest import AdapterManifest, write_manifest
from .parsing import ToolUnavailableError

MIN_CANDIDATES = 6


class ParaphraseBackend(Protocol):
    tool: str
    version: str
    parameters: dict

    def generate(self, text: str, n: int) -> list[str]:
        """Produce n candidate paraphrases of text."""


class SimbertParaphraser:
    """Similarity-conditioned paraphrase generation with a SimBERT-style
    seq2seq checkpoint served through transformers."""

    DEFAULT_MODEL = "ZhuiyiTechnology/simbert-base-chinese"

    def __init__(self, model: str | None = None, max_length: int = 512):
        self.tool = "simbert"
        model = model or self.DEFAULT_MODEL
        self.parameters = {"model": model, "max_length": max_length}
        try:
            import transformers  # noqa: PLC0415  (deliberate lazy import)
        except ImportError as exc:
            raise ToolUnavailableError(
                "transformers is not installed; pip install 'outgen-adapters[simbert]'"
            ) from exc
        self.version = transformers.__version__
        try:
            self._generator = transformers.pipeline("text2text-generation", model=model)
        except Exception as exc:  # model download/load failure
            raise ToolUnavailableError(f"could not load paraphrase model {model!r}: {exc}") from exc
        self._max_length = max_length

    def generate(self, text: str, n: int) -> list[str]:
        outputs = self._generator(
            text,
            num_return_sequences=n,
            num_beams=max(n, 4),
            max_length=self._max_length,
        )
        return [out["generated_text"] for out in outputs]


class ReplayParaphraser:
    """Replays recorded candidates from a JSON file keyed by story text."""

    def __init__(self, replay_file):
        self.tool = "replay-paraphraser"
        self.version = file_digest(replay_file)
        self.parameters = {"replay_file": str(replay_file)}
        with open(replay_file, encoding="utf-8") as fh:
            self._candidates = json.load(fh)

    def generate(self, text: str, n: int) -> list[str]:
        try:
            pool = self._candidates[text]
        except KeyError:
            raise AdapterInputError(f"replay file has no candidates for story {text[:20]!r}...") from None
        if len(pool) < n:
            raise AdapterInputError(
                f"replay file holds {len(pool)} candidates, {n} requested"
            )
        return list(pool[:n])


def paraphrase_stories(
    input_path, output_path, n_candidates: int, backend: ParaphraseBackend
) -> AdapterManifest:
    """Emit {example_id, candidates} JSONL with n_candidates per story."""
    if n_candidates < MIN_CANDIDATES:
        raise AdapterInputError(
            f"n_candidates must be >= {MIN_CANDIDATES} so filtering can reach "
            f"{MIN_CANDIDATES} accepted, got {n_candidates}"
        )
    records = read_story_records(input_path)
    count = 0
    with atomic_output(output_path) as fh:
        for story_id, story in records:
            candidates = backend.generate(story, n_candidates)
            if len(candidates) != n_candidates:
                raise AdapterInputError(
                    f"backend returned {len(candidates)} candidates for {story_id!r}, "
                    f"expected {n_candidates}"
                )
            fh.write(json.dumps(
                {"example_id": story_id, "candidates": candidates}, ensure_ascii=False
            ) + "\n")
            count += 1
    manifest = AdapterManifest(
        tool=backend.tool,
        version=backend.version,
        parameters={**backend.parameters, "n_candidates": n_candidates},
        input_path=str(Path(input_path)),
        output_path=str(Path(output_path)),
        record_count=count,
    )
    write_manifest(manifest)
    return manifest
