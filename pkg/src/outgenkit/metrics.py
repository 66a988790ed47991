"""Automatic evaluation for outline-conditioned story generation.

Implements the benchmark's metric suite over Unicode characters:

* B-1/B-2   corpus-level character BLEU (micro-averaged clipped
            precisions, geometric mean, brevity penalty, no smoothing)
* D-1/D-2   corpus-pooled distinct-n (unique n-grams / n-gram tokens)
* cover     mean LCS recall of each outline phrase inside the story
* order     1 - (positional inversions of phrase anchors / anchored pairs)
* Overall   weighted sum using the published LOT weight vectors

All scores are percentages in [0, 100]; internal arithmetic is double
precision and values are rendered to 2 decimals.  Every function is pure.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .tagger import DEFAULT_TARGETS, TargetRelationSet, strip_tags

MISSING = None  # anchor position when a phrase shares nothing with the text


@dataclass(frozen=True)
class MetricWeights:
    """Per-metric weights for the Overall aggregate."""

    b1: float
    b2: float
    d1: float
    d2: float
    cover: float
    order: float

    def __post_init__(self):
        values = self.as_tuple()
        if any(w < 0 for w in values):
            raise ValueError("metric weights must be non-negative")
        total = sum(values)
        if not 0.99 <= total <= 1.01:
            raise ValueError(f"metric weights sum to {total:.4f}, expected ~1")

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        return (self.b1, self.b2, self.d1, self.d2, self.cover, self.order)


# published LOT benchmark weight vectors
VAL_WEIGHTS = MetricWeights(0.190, 0.405, 0.119, 0.095, 0.095, 0.095)
TEST_WEIGHTS = MetricWeights(0.195, 0.390, 0.122, 0.098, 0.098, 0.098)
WEIGHT_PRESETS = {"lot-val": VAL_WEIGHTS, "lot-test": TEST_WEIGHTS}


@dataclass(frozen=True)
class PhraseAnchor:
    """Best-matching position of one outline phrase inside a text."""

    phrase_index: int
    position: int | None  # MISSING when nothing matches
    match_recall: float

    def __post_init__(self):
        if (self.position is None) != (self.match_recall == 0.0):
            raise ValueError("position must be MISSING exactly when recall is 0")


@dataclass(frozen=True)
class ExampleEval:
    """Per-example BLEU statistics plus cover/order scores."""

    cand_len: int
    ref_len: int
    match1: int
    total1: int
    match2: int
    total2: int
    cover: float
    order: float
    order_pairs: int
    order_flagged: bool  # fewer than 2 phrases anchored in both texts

    def to_dict(self) -> dict:
        return {
            "cand_len": self.cand_len, "ref_len": self.ref_len,
            "match1": self.match1, "total1": self.total1,
            "match2": self.match2, "total2": self.total2,
            "cover": self.cover, "order": self.order,
            "order_pairs": self.order_pairs, "order_flagged": self.order_flagged,
        }


@dataclass(frozen=True)
class MetricReport:
    """Corpus-level scores plus the per-example breakdown."""

    b1: float
    b2: float
    d1: float
    d2: float
    cover: float
    order: float
    overall: float
    weights: MetricWeights
    per_example: tuple[ExampleEval, ...]
    d1_flagged: bool = False  # zero n-gram tokens in the pooled corpus
    d2_flagged: bool = False

    def scores(self) -> tuple[float, float, float, float, float, float]:
        return (self.b1, self.b2, self.d1, self.d2, self.cover, self.order)

    def to_dict(self) -> dict:
        return {
            "b1": self.b1, "b2": self.b2, "d1": self.d1, "d2": self.d2,
            "cover": self.cover, "order": self.order, "overall": self.overall,
            "weights": list(self.weights.as_tuple()),
            "d1_flagged": self.d1_flagged, "d2_flagged": self.d2_flagged,
            "per_example": [ex.to_dict() for ex in self.per_example],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)

    def table(self) -> str:
        return render_table(self.scores() + (self.overall,))


_COLUMNS = ("B-1", "B-2", "D-1", "D-2", "cover", "order", "Overall")


def render_table(row: Sequence[float]) -> str:
    """A two-line fixed-width table in the benchmark's column order."""
    header = "".join(f"{name:>9}" for name in _COLUMNS)
    values = "".join(f"{value:>9.2f}" for value in row)
    return header + "\n" + values


# ---------------------------------------------------------------------------
# n-gram metrics


def char_ngrams(text: str, n: int) -> Counter:
    """All contiguous character n-grams of text, with multiplicity."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Counter(text[i:i + n] for i in range(len(text) - n + 1))


def _clipped(candidate: str, reference: str, n: int) -> tuple[int, int]:
    cand = char_ngrams(candidate, n)
    ref = char_ngrams(reference, n)
    matches = sum(min(count, ref[gram]) for gram, count in cand.items())
    return matches, sum(cand.values())


def bleu_n(candidates: Sequence[str], references: Sequence[str], n: int) -> float:
    """Corpus-level cumulative character BLEU-n as a percentage.

    Modified n-gram precisions are micro-averaged over the corpus, the
    brevity penalty uses corpus-summed lengths, and there is no smoothing:
    a zero precision at any order yields 0.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(candidates) != len(references) or not candidates:
        raise ValueError("candidates and references must be parallel and non-empty")
    matches = [0] * n
    totals = [0] * n
    cand_len = ref_len = 0
    for cand, ref in zip(candidates, references):
        cand_len += len(cand)
        ref_len += len(ref)
        for k in range(1, n + 1):
            m, t = _clipped(cand, ref, k)
            matches[k - 1] += m
            totals[k - 1] += t
    precisions = []
    for m, t in zip(matches, totals):
        if t == 0 or m == 0:
            return 0.0
        precisions.append(m / t)
    geo_mean = math.prod(precisions) ** (1.0 / n)
    penalty = 1.0 if cand_len >= ref_len else math.exp(1.0 - ref_len / cand_len)
    return 100.0 * geo_mean * penalty


def distinct_n(texts: Sequence[str], n: int) -> float:
    """Unique n-grams over total n-gram tokens, pooled across the corpus."""
    if not texts:
        raise ValueError("texts must be non-empty")
    pooled: Counter = Counter()
    for text in texts:
        pooled.update(char_ngrams(text, n))
    total = sum(pooled.values())
    if total == 0:
        return 0.0
    return 100.0 * len(pooled) / total


# ---------------------------------------------------------------------------
# subsequence metrics

def _char_masks(text: str) -> dict[str, int]:
    masks: dict[str, int] = {}
    for i, ch in enumerate(text):
        masks[ch] = masks.get(ch, 0) | (1 << i)
    return masks


def lcs_len(a: str, b: str) -> int:
    """Length of a longest common subsequence of the character sequences.

    Bit-parallel row updates, O(len(b) * len(a)/wordsize); equivalent to
    the classic quadratic dynamic program.
    """
    if not a or not b:
        return 0
    if len(a) > len(b):
        a, b = b, a
    masks = _char_masks(a)
    width = (1 << len(a)) - 1
    row = width  # 1-bits mark positions not yet absorbed into the LCS
    get = masks.get
    for ch in b:
        hit = row & get(ch, 0)
        row = ((row + hit) | (row - hit)) & width
    return len(a) - row.bit_count()


def coverage(story: str, phrases: Sequence[str]) -> float:
    """Mean per-phrase LCS recall of the outline inside the story, x100."""
    if not phrases:
        raise ValueError("phrases must be non-empty")
    recalls = []
    for phrase in phrases:
        if not phrase:
            raise ValueError("empty outline phrase")
        recalls.append(lcs_len(phrase, story) / len(phrase))
    return 100.0 * sum(recalls) / len(recalls)


def anchor_phrase(story: str, phrase: str, phrase_index: int = 0) -> PhraseAnchor:
    """Locate the phrase at the length-len(phrase) window maximizing LCS.

    Ties break to the leftmost window; a phrase sharing no character with
    the story anchors at MISSING.
    """
    if not phrase:
        raise ValueError("empty phrase")
    k = len(phrase)
    if not story:
        return PhraseAnchor(phrase_index, MISSING, 0.0)
    masks = _char_masks(phrase)
    width = (1 << k) - 1
    get = masks.get
    best, best_pos = 0, 0
    for pos in range(max(1, len(story) - k + 1)):
        row = width
        for ch in story[pos:pos + k]:
            hit = row & get(ch, 0)
            row = ((row + hit) | (row - hit)) & width
        length = k - row.bit_count()
        if length > best:
            best, best_pos = length, pos
            if best == k:
                break
    if best == 0:
        return PhraseAnchor(phrase_index, MISSING, 0.0)
    return PhraseAnchor(phrase_index, best_pos, best / k)


# ---------------------------------------------------------------------------
# order metric


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def _pair_inversions(
    gen_pos: Sequence[int | None], ref_pos: Sequence[int | None]
) -> tuple[float, int]:
    """Inversions over phrase pairs anchored in both texts.

    A pair inverts when the position signs disagree; a tie in exactly one
    of the two texts counts as half an inversion (symmetric under swapping
    the texts).
    """
    indices = [
        i for i in range(len(gen_pos)) if gen_pos[i] is not None and ref_pos[i] is not None
    ]
    inversions = 0.0
    pairs = 0
    for ai in range(len(indices)):
        for bi in range(ai + 1, len(indices)):
            a, b = indices[ai], indices[bi]
            sg = _sign(gen_pos[a] - gen_pos[b])
            sr = _sign(ref_pos[a] - ref_pos[b])
            pairs += 1
            if sg == sr:
                continue
            if sg == 0 or sr == 0:
                inversions += 0.5
            else:
                inversions += 1.0
    return inversions, pairs


def order_score(generated: str, reference: str, phrases: Sequence[str]) -> float:
    """Positional-order agreement of phrase anchors, as a percentage.

    Phrases are anchored in both texts; over pairs anchored in both, the
    score is 100 * (1 - inversions/pairs).  With fewer than two anchored
    phrases the example scores 0.
    """
    score, _pairs, _flagged = _order_stats(generated, reference, phrases)
    return score


def _order_stats(
    generated: str, reference: str, phrases: Sequence[str]
) -> tuple[float, int, bool]:
    if len(phrases) < 2:
        raise ValueError("order_score needs at least 2 phrases")
    gen_pos = [anchor_phrase(generated, p, i).position for i, p in enumerate(phrases)]
    ref_pos = [anchor_phrase(reference, p, i).position for i, p in enumerate(phrases)]
    inversions, pairs = _pair_inversions(gen_pos, ref_pos)
    if pairs == 0:
        return 0.0, 0, True
    return 100.0 * (1.0 - inversions / pairs), pairs, False


# ---------------------------------------------------------------------------
# aggregation


def overall(scores: Sequence[float], weights: MetricWeights) -> float:
    """Weighted arithmetic sum of the six metric scores."""
    if len(scores) != 6:
        raise ValueError("expected 6 scores (b1, b2, d1, d2, cover, order)")
    return sum(w * s for w, s in zip(weights.as_tuple(), scores))


def evaluate_corpus(
    generated: Sequence[str],
    references: Sequence[str],
    outlines: Sequence[Sequence[str]],
    weights: MetricWeights = VAL_WEIGHTS,
    targets: TargetRelationSet = DEFAULT_TARGETS,
) -> MetricReport:
    """Score a generated corpus against references and outlines.

    Generated texts are marker-stripped before scoring.  The three input
    lists are parallel; scores are deterministic and order-independent
    under joint permutation of the examples.
    """
    if not generated or not (len(generated) == len(references) == len(outlines)):
        raise ValueError("generated/references/outlines must be parallel and non-empty")
    stripped = [strip_tags(text, targets) for text in generated]

    per_example: list[ExampleEval] = []
    matches = [0, 0]
    totals = [0, 0]
    cand_len = ref_len = 0
    for cand, ref, phrases in zip(stripped, references, outlines):
        stats = []
        for k in (1, 2):
            stats.append(_clipped(cand, ref, k))
            matches[k - 1] += stats[-1][0]
            totals[k - 1] += stats[-1][1]
        cand_len += len(cand)
        ref_len += len(ref)
        cover_score = coverage(cand, phrases)
        o_score, o_pairs, o_flagged = _order_stats(cand, ref, phrases)
        per_example.append(ExampleEval(
            cand_len=len(cand), ref_len=len(ref),
            match1=stats[0][0], total1=stats[0][1],
            match2=stats[1][0], total2=stats[1][1],
            cover=cover_score, order=o_score,
            order_pairs=o_pairs, order_flagged=o_flagged,
        ))

    def corpus_bleu(n: int) -> float:
        precisions = []
        for k in range(n):
            if totals[k] == 0 or matches[k] == 0:
                return 0.0
            precisions.append(matches[k] / totals[k])
        geo_mean = math.prod(precisions) ** (1.0 / n)
        penalty = 1.0 if cand_len >= ref_len else math.exp(1.0 - ref_len / cand_len)
        return 100.0 * geo_mean * penalty

    d_scores = []
    d_flags = []
    for n in (1, 2):
        pooled: Counter = Counter()
        for text in stripped:
            pooled.update(char_ngrams(text, n))
        total = sum(pooled.values())
        d_flags.append(total == 0)
        d_scores.append(0.0 if total == 0 else 100.0 * len(pooled) / total)

    n_examples = len(per_example)
    scores = (
        corpus_bleu(1),
        corpus_bleu(2),
        d_scores[0],
        d_scores[1],
        sum(ex.cover for ex in per_example) / n_examples,
        sum(ex.order for ex in per_example) / n_examples,
    )
    return MetricReport(
        *scores,
        overall=overall(scores, weights),
        weights=weights,
        per_example=tuple(per_example),
        d1_flagged=d_flags[0],
        d2_flagged=d_flags[1],
    )
