"""Training-time augmentation: split long document-summary pairs into window-sized parts.

A document longer than the chunk size is cut into consecutive fixed-width
token slices. Under the SPIN1 variant the summary is cut into the same number
of equal slices and each document part is greedily matched to the remaining
summary slice with the highest ROUGE-L recall; under SPIN2/SPIN3 every part
carries the full summary (the variants differ only at join time).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from spinsum.rouge import rouge_l_recall_matrix
from spinsum.textcore import TokenSeq
from spinsum.validation import (
    SHORT_DOC_POLICIES,
    check_choice,
    check_non_negative_int,
    check_positive_int,
    normalize_variant,
)

__all__ = [
    "DEFAULT_CHUNK_SIZE",
    "DEFAULT_MIN_DOC_TOKENS",
    "AugmentedPair",
    "DocSummaryPair",
    "SplitConfig",
    "SummarySplitError",
    "augment_pair",
    "pair_parts_greedy",
    "split_document",
    "split_summary_fixed",
]

# Model input window the paired training parts must fit into.
DEFAULT_CHUNK_SIZE = 4096
# Very-long-document threshold used by corpus filtering (strictly-greater test).
DEFAULT_MIN_DOC_TOKENS = 20_000


@dataclass(frozen=True)
class DocSummaryPair:
    """One training/eval record: unique id, document tokens, gold summary tokens."""

    id: str
    document: TokenSeq
    summary: TokenSeq


@dataclass(frozen=True)
class AugmentedPair:
    """One output record of the augmentation: a document part and its paired summary."""

    source_id: str
    part_index: int
    n_parts: int
    document_part: TokenSeq
    paired_summary: TokenSeq
    variant: str


@dataclass(frozen=True)
class SplitConfig:
    chunk_size: int = DEFAULT_CHUNK_SIZE
    variant: str = "SPIN1"
    min_doc_tokens: int = DEFAULT_MIN_DOC_TOKENS
    short_doc_policy: str = "skip"
    keep_summary_remainder: bool = False

    def __post_init__(self) -> None:
        check_positive_int(self.chunk_size, "chunk_size")
        check_non_negative_int(self.min_doc_tokens, "min_doc_tokens")
        object.__setattr__(self, "variant", normalize_variant(self.variant))
        check_choice(self.short_doc_policy, "short_doc_policy", SHORT_DOC_POLICIES)


class SummarySplitError(ValueError):
    """Summary has fewer tokens than the requested number of parts."""

    def __init__(self, summary_len: int, n_parts: int, source_id: str | None = None):
        detail = f" (source id {source_id!r})" if source_id is not None else ""
        super().__init__(
            f"summary too short to split into {n_parts} parts: {summary_len} tokens{detail}"
        )
        self.summary_len = summary_len
        self.n_parts = n_parts
        self.source_id = source_id

    def __reduce__(self):
        return (type(self), (self.summary_len, self.n_parts, self.source_id))


def split_document(document: Sequence[str], chunk_size: int) -> list[TokenSeq]:
    """Consecutive non-overlapping slices of at most chunk_size tokens.

    The concatenation of the returned parts equals the input exactly; the part
    count is ceil(len(document) / chunk_size). An empty document yields no parts.
    """
    check_positive_int(chunk_size, "chunk_size")
    return [list(document[j : j + chunk_size]) for j in range(0, len(document), chunk_size)]


def split_summary_fixed(
    summary: Sequence[str], n_parts: int, *, keep_remainder: bool = False
) -> list[TokenSeq]:
    """Exactly n_parts consecutive slices of floor(len/n_parts) tokens each.

    The trailing len - step*n_parts tokens are discarded unless
    ``keep_remainder`` is set, in which case they are appended to the final
    slice.

    Raises:
        SummarySplitError: if the summary has fewer tokens than n_parts.
    """
    check_positive_int(n_parts, "n_parts")
    if len(summary) < n_parts:
        raise SummarySplitError(len(summary), n_parts)
    step = len(summary) // n_parts
    parts = [list(summary[j : j + step]) for j in range(0, step * n_parts, step)]
    if keep_remainder and step * n_parts < len(summary):
        parts[-1] = parts[-1] + list(summary[step * n_parts :])
    return parts


def pair_parts_greedy(
    doc_parts: Sequence[Sequence[str]], summary_parts: Sequence[Sequence[str]]
) -> list[tuple[int, int]]:
    """One-to-one greedy matching of document parts to summary parts.

    Document parts are visited in order; each takes the remaining summary part
    with the highest ROUGE-L recall (summary part as the reference), ties
    breaking toward the lowest remaining summary index. The result is a
    bijection over part indices and is deterministic.

    Raises:
        ValueError: on a length mismatch, empty part lists, or an empty
            summary part (recall against it is undefined).
    """
    if len(doc_parts) != len(summary_parts):
        raise ValueError(
            f"part count mismatch: {len(doc_parts)} document parts vs "
            f"{len(summary_parts)} summary parts"
        )
    if not doc_parts:
        raise ValueError("at least one part is required")
    scores = rouge_l_recall_matrix(doc_parts, summary_parts)
    remaining = list(range(len(summary_parts)))
    pairing: list[tuple[int, int]] = []
    for i in range(len(doc_parts)):
        row = scores[i]
        best = remaining[0]
        for j in remaining[1:]:
            if row[j] > row[best]:
                best = j
        pairing.append((i, best))
        remaining.remove(best)
    return pairing


def augment_pair(pair: DocSummaryPair, config: SplitConfig) -> list[AugmentedPair]:
    """Turn one pair into window-sized training records under the configured variant.

    Documents not exceeding the chunk size emit nothing (``skip`` policy, the
    default) or pass through as a single record (``passthrough``). Output is
    ordered by ascending part index and concatenating the document parts
    reproduces the source document exactly.

    Raises:
        SummarySplitError: under SPIN1 when the summary has fewer tokens than
            the number of document parts; carries the source id.
    """
    if len(pair.document) <= config.chunk_size:
        if config.short_doc_policy == "skip":
            return []
        return [
            AugmentedPair(pair.id, 0, 1, list(pair.document), list(pair.summary), config.variant)
        ]

    doc_parts = split_document(pair.document, config.chunk_size)
    n_parts = len(doc_parts)
    if config.variant == "SPIN1":
        if len(pair.summary) < n_parts:
            raise SummarySplitError(len(pair.summary), n_parts, source_id=pair.id)
        summary_parts = split_summary_fixed(
            pair.summary, n_parts, keep_remainder=config.keep_summary_remainder
        )
        matched = dict(pair_parts_greedy(doc_parts, summary_parts))
        return [
            AugmentedPair(pair.id, i, n_parts, doc_parts[i], summary_parts[matched[i]], "SPIN1")
            for i in range(n_parts)
        ]
    return [
        AugmentedPair(pair.id, i, n_parts, doc_parts[i], list(pair.summary), config.variant)
        for i in range(n_parts)
    ]
