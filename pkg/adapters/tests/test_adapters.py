"""Adapter round-trip tests: every output must load through the primary
toolkit's loaders with zero strict-mode violations, and manifests must
match what the loaders observe.
"""
import json
from pathlib import Path

import pytest

from outgenkit import filter_paraphrases, load_conllu, load_examples, read_paraphrase_file

from outgen_adapters import (
    ReplayParaphraser,
    ReplayParser,
    ToolUnavailableError,
    paraphrase_stories,
    parse_stories,
    read_manifest,
)
from outgen_adapters.cli import main
from outgen_adapters.parsing import HanlpParser

FIXTURES = Path(__file__).parent / "fixtures"
EXAMPLES = FIXTURES / "examples.jsonl"
REPLAY_PARSES = FIXTURES / "replay_parses.json"
REPLAY_PARAPHRASES = FIXTURES / "replay_paraphrases.json"


# ---------------------------------------------------------------------------
# parse adapter


def test_parse_roundtrip_through_primary_loader(tmp_path):
    output = tmp_path / "parses.conllu"
    manifest = parse_stories(EXAMPLES, output, ReplayParser(REPLAY_PARSES))

    examples = load_examples(EXAMPLES)  # strict mode
    stories = load_conllu(output, examples=examples)  # raises on any violation
    assert len(stories) == len(examples) == 10
    assert manifest.record_count == len(stories)
    assert read_manifest(output).record_count == len(stories)
    assert manifest.tool == "replay-parser"
    assert manifest.version.startswith("sha256:")


def test_parse_demo_sentence_block(tmp_path):
    output = tmp_path / "parses.conllu"
    parse_stories(EXAMPLES, output, ReplayParser(REPLAY_PARSES))
    story = {s.example_id: s for s in load_conllu(output)}["adapt-001"]
    sentence = story.sentences[0]
    assert len(sentence.segments) == 6
    roots = [a for a in sentence.arcs if a.relation == "root"]
    assert len(roots) == 1
    assert sentence.segments[roots[0].dependent].text == "游历"


def test_parse_empty_input(tmp_path):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("", encoding="utf-8")
    output = tmp_path / "parses.conllu"
    manifest = parse_stories(empty, output, ReplayParser(REPLAY_PARSES))
    assert manifest.record_count == 0
    assert load_conllu(output) == []


def test_parse_accepts_bare_story_records(tmp_path):
    # the accepted-paraphrase flow hands the parser {id, story} records
    story = "农夫种地。孩子读书。"
    stories = tmp_path / "stories.jsonl"
    stories.write_text(
        json.dumps({"id": "adapt-002#p1", "story": story}, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    output = tmp_path / "parses.conllu"
    manifest = parse_stories(stories, output, ReplayParser(REPLAY_PARSES))
    assert manifest.record_count == 1
    assert load_conllu(output)[0].example_id == "adapt-002#p1"


def test_parse_missing_replay_entry_is_an_error(tmp_path):
    stories = tmp_path / "stories.jsonl"
    stories.write_text(
        json.dumps({"id": "x", "story": "没有录制过的故事。"}, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    with pytest.raises(ValueError, match="no parse"):
        parse_stories(stories, tmp_path / "out.conllu", ReplayParser(REPLAY_PARSES))
    assert not (tmp_path / "out.conllu").exists()


# ---------------------------------------------------------------------------
# paraphrase adapter


def test_paraphrase_roundtrip_through_primary_loader(tmp_path):
    output = tmp_path / "candidates.jsonl"
    manifest = paraphrase_stories(EXAMPLES, output, 8, ReplayParaphraser(REPLAY_PARAPHRASES))

    records = read_paraphrase_file(output)
    assert len(records) == manifest.record_count == 10
    assert all(len(candidates) == 8 for _, candidates in records)

    # schema oracle: every record must drive the augmenter's filter
    examples = {ex.id: ex for ex in load_examples(EXAMPLES)}
    for example_id, candidates in records:
        pset = filter_paraphrases(examples[example_id], candidates)
        assert pset.example_id == example_id

    # generation sanity: at least one of the 8 differs from the input
    first = load_examples(EXAMPLES)[0]
    by_id = dict(records)
    assert any(c != first.story for c in by_id[first.id])


def test_paraphrase_requires_six_candidates(tmp_path):
    with pytest.raises(ValueError, match=">= 6"):
        paraphrase_stories(EXAMPLES, tmp_path / "c.jsonl", 5,
                           ReplayParaphraser(REPLAY_PARAPHRASES))
    assert not (tmp_path / "c.jsonl").exists()


def test_paraphrase_record_order_follows_input(tmp_path):
    output = tmp_path / "candidates.jsonl"
    paraphrase_stories(EXAMPLES, output, 8, ReplayParaphraser(REPLAY_PARAPHRASES))
    got = [example_id for example_id, _ in read_paraphrase_file(output)]
    assert got == [ex.id for ex in load_examples(EXAMPLES)]


# ---------------------------------------------------------------------------
# CLI and tool availability


def test_cli_parse_and_paraphrase(tmp_path, capsys):
    parses = tmp_path / "p.conllu"
    code = main(["parse", "--input", str(EXAMPLES), "--output", str(parses),
                 "--backend", "replay", "--replay-file", str(REPLAY_PARSES)])
    assert code == 0
    assert "10 records" in capsys.readouterr().out

    candidates = tmp_path / "c.jsonl"
    code = main(["paraphrase", "--input", str(EXAMPLES), "--output", str(candidates),
                 "-n", "8", "--backend", "replay", "--replay-file", str(REPLAY_PARAPHRASES)])
    assert code == 0
    assert len(read_paraphrase_file(candidates)) == 10


def test_cli_runs_are_byte_identical(tmp_path, capsys):
    outputs = []
    for name in ("a", "b"):
        path = tmp_path / f"{name}.conllu"
        assert main(["parse", "--input", str(EXAMPLES), "--output", str(path),
                     "--backend", "replay", "--replay-file", str(REPLAY_PARSES)]) == 0
        outputs.append(path.read_bytes())
    capsys.readouterr()
    assert outputs[0] == outputs[1]


def _hanlp_importable() -> bool:
    try:
        import hanlp  # noqa: F401
        return True
    except ImportError:
        return False


@pytest.mark.skipif(_hanlp_importable(), reason="hanlp installed; unavailability path not testable")
def test_unavailable_tool_exits_nonzero_without_partial_file(tmp_path, capsys):
    output = tmp_path / "parses.conllu"
    code = main(["parse", "--input", str(EXAMPLES), "--output", str(output),
                 "--backend", "hanlp"])
    assert code == 1
    assert "hanlp" in capsys.readouterr().err
    assert not output.exists()


def test_backend_failure_leaves_no_partial_output(tmp_path):
    class ExplodingParser:
        tool = "boom"
        version = "0"
        parameters = {}
        calls = 0

        def parse(self, text):
            self.calls += 1
            if self.calls > 3:
                raise ToolUnavailableError("connection dropped mid-batch")
            return [[(ch, 1 if i else 0, "dep" if i else "root")
                     for i, ch in enumerate(text)]]

    output = tmp_path / "parses.conllu"
    with pytest.raises(ToolUnavailableError):
        parse_stories(EXAMPLES, output, ExplodingParser())
    assert not output.exists()
    assert list(tmp_path.iterdir()) == []  # temp file cleaned up too


def test_hanlp_backend_reports_unavailable_without_install():
    if _hanlp_importable():
        pytest.skip("hanlp installed")
    with pytest.raises(ToolUnavailableError, match="hanlp"):
        HanlpParser()
