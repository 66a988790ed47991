"""Corpus augmentation and evaluation toolkit for outline-conditioned
Chinese story generation: dependency-role tagging, paraphrase-based
training-corpus augmentation, model-ready training files, and the
benchmark metric suite (BLEU-n, Distinct-n, coverage, order, Overall).
"""

from .augment import (
    AugmentedCorpus,
    AugmentedPair,
    AugmentError,
    FilterPolicy,
    SourceRule,
    assemble_source,
    build_augmented_corpus,
    filter_paraphrases,
    write_augmented_corpus,
)
from .corpus import (
    CorpusError,
    DatasetSplit,
    DependencyArc,
    LoadReport,
    OutlineExample,
    ParaphraseSet,
    ParsedSentence,
    ParsedStory,
    ROOT,
    WordSegment,
    WriteReport,
    count_units,
    load_conllu,
    load_examples,
    read_examples,
    read_paraphrase_file,
    truncate_units,
    write_conllu,
    write_examples,
    write_training_pairs,
)
from .metrics import (
    MetricReport,
    MetricWeights,
    PhraseAnchor,
    TEST_WEIGHTS,
    VAL_WEIGHTS,
    WEIGHT_PRESETS,
    anchor_phrase,
    bleu_n,
    char_ngrams,
    coverage,
    distinct_n,
    evaluate_corpus,
    lcs_len,
    order_score,
    overall,
)
from .stats import StatsError, StatsReport, dataset_stats, sentence_split
from .tagger import (
    DEFAULT_TARGETS,
    TaggedStory,
    TargetRelationSet,
    count_markers,
    select_targets,
    strip_tags,
    tag_story,
    write_tagged_stories,
)

__version__ = "0.1.0"
