"""spinsum: split-then-join pipeline for very-long-document summarization.

Long document-summary pairs are cut into model-window-sized parts (summaries
split and greedily matched by ROUGE-L recall, or carried whole, depending on
the variant); at generation time per-part summaries are joined by
concatenation or best-part selection. Ships a from-scratch ROUGE
implementation, streaming corpus tooling, a CLI, and sklearn-style wrappers.
"""

from __future__ import annotations

__version__ = "0.1.0"

from spinsum.corpus import (
    CorpusFormatError,
    CorpusStats,
    LengthAccumulator,
    compute_stats,
    compute_stats_augmented,
    filter_by_length,
    read_augmented,
    read_corpus,
    write_augmented,
    write_corpus,
)
from spinsum.estimators import SpinAugmenter, SplitJoinSummarizer
from spinsum.joiner import (
    JoinResult,
    PartSummary,
    evaluate_joined,
    generate_joined,
    join_parts,
)
from spinsum.rouge import (
    RougeScore,
    lcs_length,
    rouge_l,
    rouge_l_recall,
    rouge_n,
)
from spinsum.splitter import (
    AugmentedPair,
    DocSummaryPair,
    SplitConfig,
    SummarySplitError,
    augment_pair,
    pair_parts_greedy,
    split_document,
    split_summary_fixed,
)
from spinsum.summarizer import (
    ExternalSummarizer,
    ExternalSummarizerError,
    SummarizerPool,
    SummarizerSpec,
    summarize,
)
from spinsum.textcore import TokenSeq, detokenize, tokenize

__all__ = [
    "AugmentedPair",
    "CorpusFormatError",
    "CorpusStats",
    "DocSummaryPair",
    "ExternalSummarizer",
    "ExternalSummarizerError",
    "JoinResult",
    "LengthAccumulator",
    "PartSummary",
    "RougeScore",
    "SpinAugmenter",
    "SplitConfig",
    "SplitJoinSummarizer",
    "SummarizerPool",
    "SummarizerSpec",
    "SummarySplitError",
    "TokenSeq",
    "__version__",
    "augment_pair",
    "compute_stats",
    "compute_stats_augmented",
    "detokenize",
    "evaluate_joined",
    "filter_by_length",
    "generate_joined",
    "join_parts",
    "lcs_length",
    "pair_parts_greedy",
    "read_augmented",
    "read_corpus",
    "rouge_l",
    "rouge_l_recall",
    "rouge_n",
    "split_document",
    "split_summary_fixed",
    "summarize",
    "tokenize",
    "write_augmented",
    "write_corpus",
]
