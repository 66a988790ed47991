import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def example_file() -> Path:
    return FIXTURES / "examples.jsonl"


@pytest.fixture
def parse_file() -> Path:
    return FIXTURES / "parses.conllu"


@pytest.fixture
def paraphrase_file() -> Path:
    return FIXTURES / "paraphrases.jsonl"


def write_jsonl(path: Path, records) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    return path


def make_example_record(i: int, phrases=None, story=None) -> dict:
    return {
        "id": f"ex-{i:03d}",
        "title": f"题目{i}",
        "outline": list(phrases) if phrases is not None else [f"短语{i}字{j}" for j in range(8)],
        "story": story if story is not None else f"第{i}个故事，讲了一件事。然后结束了。",
    }
