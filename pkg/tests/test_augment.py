import random

import pytest

from outgenkit.augment import (
    AugmentError,
    FilterPolicy,
    ORIGIN_ORIGINAL,
    ORIGIN_PARAPHRASE,
    SourceRule,
    assemble_source,
    build_augmented_corpus,
    filter_paraphrases,
    write_augmented_corpus,
)
from outgenkit.corpus import OutlineExample, ParaphraseSet


def example(i=0, story="这是一个不长不短的原始故事文本。"):
    return OutlineExample(
        f"ex-{i:03d}", f"题{i}", tuple(f"短语{j}" for j in range(8)), story
    )


def variants(ex, n):
    # distinct candidates with the same length as the original story
    return [ex.story[:-1] + ch for ch in "甲乙丙丁戊己庚辛壬癸"[:n]]


# ---------------------------------------------------------------------------
# filtering


def test_six_distinct_valid_candidates_all_accepted():
    ex = example()
    candidates = variants(ex, 6)
    ps = filter_paraphrases(ex, candidates)
    assert list(ps.accepted) == candidates


def test_candidate_equal_to_original_is_rejected():
    ex = example()
    ps = filter_paraphrases(ex, [ex.story])
    assert ps.accepted == ()
    assert ps.candidates == (ex.story,)


def test_duplicate_candidate_is_skipped():
    ex = example()
    pool = variants(ex, 7)
    candidates = pool[:2] + [pool[0]] + pool[2:7]  # third duplicates the first
    ps = filter_paraphrases(ex, candidates)
    assert list(ps.accepted) == pool[:6]
    assert len(ps.accepted) == 6


def test_length_ratio_bounds_are_inclusive():
    ex = example(story="四字故事")  # length 4, bounds [2, 8]
    policy = FilterPolicy()
    accepted = filter_paraphrases(ex, ["其他", "另一个故事哦哦", "多", "太长的故事文本啊。", "换一个说法"], policy).accepted
    assert list(accepted) == ["其他", "另一个故事哦哦", "换一个说法"]


def test_duplicates_allowed_when_dedup_disabled():
    ex = example()
    policy = FilterPolicy(reject_exact_duplicates=False)
    ps = filter_paraphrases(ex, [ex.story, ex.story], policy)
    assert list(ps.accepted) == [ex.story, ex.story]


def test_filter_is_idempotent():
    ex = example()
    first = filter_paraphrases(ex, variants(ex, 9))
    again = filter_paraphrases(ex, list(first.accepted))
    assert again.accepted == first.accepted


def test_acceptance_is_stable_under_tail_permutation():
    ex = example()
    rng = random.Random(5)
    pool = variants(ex, 10)
    base = filter_paraphrases(ex, pool).accepted
    for _ in range(20):
        tail = pool[6:]
        rng.shuffle(tail)
        assert filter_paraphrases(ex, pool[:6] + tail).accepted == base


def test_policy_validation():
    with pytest.raises(ValueError):
        FilterPolicy(min_length_ratio=0.0)
    with pytest.raises(ValueError):
        FilterPolicy(min_length_ratio=1.5)
    with pytest.raises(ValueError):
        FilterPolicy(max_accepted=0)


# ---------------------------------------------------------------------------
# corpus assembly


def test_hundred_examples_with_six_each_yield_700_pairs():
    examples = [example(i) for i in range(100)]
    psets = [
        filter_paraphrases(ex, variants(ex, 6)) for ex in examples
    ]
    corpus = build_augmented_corpus(examples, psets)
    assert len(corpus.pairs) == 700
    for ex in examples:
        mine = [p for p in corpus.pairs if p.example_id == ex.id]
        assert len(mine) == 7
        assert mine[0].origin == ORIGIN_ORIGINAL
        assert all(p.origin == ORIGIN_PARAPHRASE for p in mine[1:])
        assert len({p.src for p in mine}) == 1


def test_single_example_without_paraphrases():
    ex = example()
    corpus = build_augmented_corpus([ex])
    assert len(corpus.pairs) == 1
    assert corpus.pairs[0].tgt == ex.story
    assert corpus.accepted_counts == {ex.id: 0}


def test_pair_count_identity():
    examples = [example(i) for i in range(17)]
    rng = random.Random(3)
    psets = [filter_paraphrases(ex, variants(ex, rng.randint(0, 9))) for ex in examples]
    corpus = build_augmented_corpus(examples, psets)
    assert len(corpus.pairs) == len(examples) + sum(len(p.accepted) for p in psets)


def test_dangling_example_id_raises():
    ex = example()
    stray = ParaphraseSet("nobody", ("甲乙丙",), ())
    with pytest.raises(AugmentError, match="nobody"):
        build_augmented_corpus([ex], [stray])


def test_duplicate_paraphrase_set_raises():
    ex = example()
    ps = filter_paraphrases(ex, variants(ex, 2))
    with pytest.raises(AugmentError, match="duplicate"):
        build_augmented_corpus([ex], [ps, ps])


def test_pairs_follow_example_order_with_original_first():
    examples = [example(i) for i in range(3)]
    psets = [filter_paraphrases(examples[2], variants(examples[2], 2))]
    corpus = build_augmented_corpus(examples, psets)
    ids = [(p.example_id, p.origin) for p in corpus.pairs]
    assert ids == [
        ("ex-000", ORIGIN_ORIGINAL),
        ("ex-001", ORIGIN_ORIGINAL),
        ("ex-002", ORIGIN_ORIGINAL),
        ("ex-002", ORIGIN_PARAPHRASE),
        ("ex-002", ORIGIN_PARAPHRASE),
    ]


# ---------------------------------------------------------------------------
# source assembly and writing


def test_default_source_is_title_prefixed_hash_joined():
    ex = example()
    src = assemble_source(ex)
    assert src == "题0:" + "#".join(ex.phrases)


def test_source_without_title():
    ex = example()
    assert assemble_source(ex, SourceRule(include_title=False)) == "#".join(ex.phrases)


def test_write_augmented_corpus_truncates_targets(tmp_path):
    ex = example(story="字" * 40)
    corpus = build_augmented_corpus([ex])
    path = tmp_path / "aug.jsonl"
    report = write_augmented_corpus(corpus, path, max_units=10)
    assert report.pairs == 1
    assert report.truncated == 1
    line = path.read_text(encoding="utf-8").strip()
    assert '"origin": "original"' in line
