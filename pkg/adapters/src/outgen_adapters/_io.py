"""Shared input reading and atomic output writing for the adapters."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from contextlib import contextmanager
from pathlib import Path


class AdapterInputError(ValueError):
    """The input file does not follow the interchange contract."""


def read_story_records(path) -> list[tuple[str, str]]:
    """Read (id, story) pairs from example or story JSONL files.

    Accepts full example records ({id, title, outline, story}) as well as
    the bare story lists emitted for accepted paraphrases ({id, story} or
    {example_id, story}).
    """
    records: list[tuple[str, str]] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise AdapterInputError(f"{path}: line {lineno}: malformed JSON ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise AdapterInputError(f"{path}: line {lineno}: record is not an object")
            story_id = record.get("id") or record.get("example_id")
            story = record.get("story")
            if not isinstance(story_id, str) or not story_id:
                raise AdapterInputError(f"{path}: line {lineno}: missing id")
            if not isinstance(story, str) or not story:
                raise AdapterInputError(f"{path}: line {lineno}: missing story")
            if story_id in seen:
                raise AdapterInputError(f"{path}: line {lineno}: duplicate id {story_id!r}")
            seen.add(story_id)
            records.append((story_id, story))
    return records


@contextmanager
def atomic_output(path):
    """Write to a sibling temp file and rename on success, so a failing
    tool never leaves a partial output behind."""
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            yield fh
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def file_digest(path) -> str:
    digest = hashlib.sha256(Path(path).read_bytes()).hexdigest()
    return f"sha256:{digest[:12]}"
