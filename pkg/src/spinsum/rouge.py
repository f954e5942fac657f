"""From-scratch ROUGE metrics: token LCS, ROUGE-L recall, and ROUGE-1/2/L scores.

Token matching is case-folded by default (pass ``lowercase=False`` to score
case-sensitively); there is no stemming and no stopword removal. ROUGE-n uses
clipped multiset n-gram counts. All functions are pure and safe to call
concurrently.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "RougeScore",
    "f1_measure",
    "lcs_length",
    "mean_scores",
    "rouge_l",
    "rouge_l_recall",
    "rouge_l_recall_matrix",
    "rouge_n",
]

# Below these sizes the plain-Python row update beats the vectorized one on
# per-call overhead (measured crossover, see tests for the equivalence check).
_VECTOR_MIN_SIDE = 64
_VECTOR_MIN_CELLS = 4096


@dataclass(frozen=True)
class RougeScore:
    """Recall / precision / F1 triple for one metric family, each in [0, 1]."""

    recall: float
    precision: float
    f1: float

    @classmethod
    def from_recall_precision(cls, recall: float, precision: float) -> "RougeScore":
        return cls(recall, precision, f1_measure(recall, precision))

    def as_dict(self) -> dict[str, float]:
        return {"recall": self.recall, "precision": self.precision, "f1": self.f1}


def f1_measure(recall: float, precision: float) -> float:
    """Harmonic mean of recall and precision; 0.0 when both are zero."""
    if recall + precision == 0.0:
        return 0.0
    return 2.0 * recall * precision / (recall + precision)


def _fold(tokens: Sequence[str], lowercase: bool) -> Sequence[str]:
    if not lowercase:
        return tokens
    return [t.lower() for t in tokens]


def _lcs_rows(a: Sequence[str], b: Sequence[str]) -> int:
    """Two-row DP with rows sized by the shorter sequence (O(min) space)."""
    if len(b) > len(a):
        a, b = b, a
    n = len(b)
    prev = [0] * (n + 1)
    for ta in a:
        curr = [0] * (n + 1)
        for j in range(1, n + 1):
            if ta == b[j - 1]:
                curr[j] = prev[j - 1] + 1
            else:
                up = prev[j]
                left = curr[j - 1]
                curr[j] = up if up >= left else left
        prev = curr
    return prev[n]


def _lcs_rows_vectorized(a_ids: np.ndarray, b_ids: Iterable[int]) -> int:
    """Same two-row DP with the inner row update vectorized.

    ``a_ids`` is the longer sequence as integer token ids; ``b_ids`` drives the
    outer loop (id -1 never matches). A candidate cell is prev[j-1]+1 on a
    match; since DP rows are non-decreasing, the current row is the running
    maximum of candidates merged with the previous row, which lets one buffer
    serve as both rows.
    """
    n = len(a_ids)
    row = np.zeros(n + 1, dtype=np.int32)
    cand = np.empty(n, dtype=np.int32)
    for tok in b_ids:
        np.add(row[:n], 1, out=cand)
        np.multiply(cand, a_ids == tok, out=cand)
        np.maximum.accumulate(cand, out=cand)
        np.maximum(row[1:], cand, out=row[1:])
    return int(row[n])


def _use_vectorized(longer: int, shorter: int) -> bool:
    return longer >= _VECTOR_MIN_SIDE and longer * shorter >= _VECTOR_MIN_CELLS


def _token_ids(tokens: Sequence[str], vocab: dict[str, int]) -> np.ndarray:
    return np.fromiter(
        (vocab.setdefault(t, len(vocab)) for t in tokens), dtype=np.int32, count=len(tokens)
    )


def lcs_length(x: Sequence[str], y: Sequence[str], *, lowercase: bool = True) -> int:
    """Length of the longest common subsequence of two token sequences.

    Symmetric in its arguments; returns 0 when either side is empty. Runs the
    two-row dynamic program in O(len(x)*len(y)) time without materializing the
    full table.
    """
    a = _fold(x, lowercase)
    b = _fold(y, lowercase)
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return 0
    if _use_vectorized(len(a), len(b)):
        vocab: dict[str, int] = {}
        a_ids = _token_ids(a, vocab)
        return _lcs_rows_vectorized(a_ids, (vocab.get(t, -1) for t in b))
    return _lcs_rows(a, b)


def rouge_l_recall(candidate: Sequence[str], reference: Sequence[str], *, lowercase: bool = True) -> float:
    """LCS(candidate, reference) / len(reference); the reference must be non-empty."""
    if not reference:
        raise ValueError("undefined: zero-length reference")
    return lcs_length(candidate, reference, lowercase=lowercase) / len(reference)


def rouge_l_recall_matrix(
    candidates: Sequence[Sequence[str]],
    references: Sequence[Sequence[str]],
    *,
    lowercase: bool = True,
) -> list[list[float]]:
    """ROUGE-L recall of every candidate against every reference.

    Equivalent to calling :func:`rouge_l_recall` pairwise but shares the
    case-folding and token-id mapping of each candidate across all references,
    which matters when candidates are model-window-sized parts.
    """
    folded_c = [_fold(c, lowercase) for c in candidates]
    folded_r = [_fold(r, lowercase) for r in references]
    for r in folded_r:
        if not r:
            raise ValueError("undefined: zero-length reference")
    vocab: dict[str, int] = {}
    ids_c = [_token_ids(c, vocab) for c in folded_c]
    ids_r = [[vocab.get(t, -1) for t in r] for r in folded_r]

    matrix: list[list[float]] = []
    for c, c_ids in zip(folded_c, ids_c):
        row: list[float] = []
        for r, r_ids in zip(folded_r, ids_r):
            if len(c) >= len(r) and _use_vectorized(len(c), len(r)):
                lcs = _lcs_rows_vectorized(c_ids, r_ids)
            else:
                lcs = _lcs_rows(c, r) if c and r else 0
            row.append(lcs / len(r))
        matrix.append(row)
    return matrix


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(
    candidate: Sequence[str], reference: Sequence[str], n: int, *, lowercase: bool = True
) -> RougeScore:
    """Clipped n-gram overlap scores.

    recall = matched n-grams / reference n-grams, precision = matched /
    candidate n-grams (0 when the candidate has none). Each reference n-gram
    is creditable at most its reference multiplicity.

    Raises:
        ValueError: if n < 1 or the reference has fewer than n tokens.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if len(reference) < n:
        raise ValueError("undefined: reference has no n-grams")
    ref_counts = _ngram_counts(_fold(reference, lowercase), n)
    cand_counts = _ngram_counts(_fold(candidate, lowercase), n)
    matched = sum((cand_counts & ref_counts).values())
    ref_total = len(reference) - n + 1
    cand_total = max(len(candidate) - n + 1, 0)
    recall = matched / ref_total
    precision = matched / cand_total if cand_total else 0.0
    return RougeScore.from_recall_precision(recall, precision)


def rouge_l(candidate: Sequence[str], reference: Sequence[str], *, lowercase: bool = True) -> RougeScore:
    """LCS-based scores: recall = LCS/|reference|, precision = LCS/|candidate|.

    Raises:
        ValueError: if either sequence is empty.
    """
    if not candidate or not reference:
        raise ValueError("undefined: empty sequence")
    lcs = lcs_length(candidate, reference, lowercase=lowercase)
    return RougeScore.from_recall_precision(lcs / len(reference), lcs / len(candidate))


def mean_scores(scores: Iterable[RougeScore]) -> RougeScore:
    """Unweighted per-field mean; all-zero for an empty input."""
    items = list(scores)
    if not items:
        return RougeScore(0.0, 0.0, 0.0)
    n = len(items)
    return RougeScore(
        sum(s.recall for s in items) / n,
        sum(s.precision for s in items) / n,
        sum(s.f1 for s in items) / n,
    )
