"""scikit-learn style wrappers so the pipeline composes with sklearn tooling.

Both estimators are stateless (``fit`` is a no-op returning self) and follow
the sklearn parameter conventions, so ``get_params`` / ``set_params`` /
``clone`` and pipeline composition work as usual.
"""

from __future__ import annotations

import logging
from typing import Any, Iterable, Mapping, Sequence

from sklearn.base import BaseEstimator, TransformerMixin

from spinsum.joiner import JoinResult, generate_joined
from spinsum.rouge import rouge_l
from spinsum.splitter import (
    DEFAULT_CHUNK_SIZE,
    AugmentedPair,
    DocSummaryPair,
    SplitConfig,
    SummarySplitError,
    augment_pair,
)
from spinsum.summarizer import (
    DEFAULT_LEAD_K,
    DEFAULT_MAX_INPUT_TOKENS,
    DEFAULT_TIMEOUT,
    SummarizerPool,
    SummarizerSpec,
)
from spinsum.textcore import TokenSeq, detokenize
from spinsum.validation import check_choice, ensure_tokens

__all__ = ["SpinAugmenter", "SplitJoinSummarizer", "as_doc_summary_pair"]

log = logging.getLogger(__name__)


def as_doc_summary_pair(record: Any, fallback_id: str) -> DocSummaryPair:
    """Coerce a DocSummaryPair, mapping, or (id, document, summary) triple."""
    if isinstance(record, DocSummaryPair):
        return record
    if isinstance(record, Mapping):
        pair_id = str(record.get("id", fallback_id))
        document = ensure_tokens(record["document"], "document")
        summary = ensure_tokens(record["summary"], "summary")
    elif isinstance(record, Sequence) and not isinstance(record, str) and len(record) == 3:
        pair_id = str(record[0])
        document = ensure_tokens(record[1], "document")
        summary = ensure_tokens(record[2], "summary")
    else:
        raise TypeError(
            "expected DocSummaryPair, mapping with document/summary, or "
            f"(id, document, summary) triple; got {type(record).__name__}"
        )
    if not summary:
        raise ValueError(f"record {pair_id!r} has an empty summary")
    return DocSummaryPair(pair_id, document, summary)


class SpinAugmenter(BaseEstimator, TransformerMixin):
    """Transformer applying the training-time split to document-summary pairs.

    transform(X) takes an iterable of records (DocSummaryPair, mapping, or
    (id, document, summary) triples; texts may be raw strings or token lists)
    and returns the flat list of AugmentedPair records.
    """

    def __init__(
        self,
        chunk_size: int = DEFAULT_CHUNK_SIZE,
        variant: str = "SPIN1",
        short_doc_policy: str = "skip",
        keep_summary_remainder: bool = False,
        on_split_error: str = "skip",
    ):
        self.chunk_size = chunk_size
        self.variant = variant
        self.short_doc_policy = short_doc_policy
        self.keep_summary_remainder = keep_summary_remainder
        self.on_split_error = on_split_error

    def fit(self, X=None, y=None) -> "SpinAugmenter":
        return self

    def _config(self) -> SplitConfig:
        check_choice(self.on_split_error, "on_split_error", ("skip", "raise"))
        return SplitConfig(
            chunk_size=self.chunk_size,
            variant=self.variant,
            short_doc_policy=self.short_doc_policy,
            keep_summary_remainder=self.keep_summary_remainder,
        )

    def transform(self, X: Iterable[Any]) -> list[AugmentedPair]:
        config = self._config()
        out: list[AugmentedPair] = []
        for i, record in enumerate(X):
            pair = as_doc_summary_pair(record, str(i))
            try:
                out.extend(augment_pair(pair, config))
            except SummarySplitError as exc:
                if self.on_split_error == "raise":
                    raise
                log.warning("skipped %r: %s", pair.id, exc)
        return out


class SplitJoinSummarizer(BaseEstimator):
    """Split-summarize-join generation behaving like a predictor over documents.

    predict(X) maps an iterable of documents (raw strings or token lists) to
    final summary strings; generate(X) returns the full JoinResults; score(X, y)
    is the mean ROUGE-L F1 of predictions against reference summaries.
    """

    def __init__(
        self,
        variant: str = "SPIN3",
        chunk_size: int = DEFAULT_CHUNK_SIZE,
        summarizer: str = "lead_k",
        k: int = DEFAULT_LEAD_K,
        command: tuple[str, ...] | None = None,
        max_input_tokens: int = DEFAULT_MAX_INPUT_TOKENS,
        timeout: float = DEFAULT_TIMEOUT,
        spin3_score: str = "recall",
        lowercase: bool = True,
        jobs: int = 1,
    ):
        self.variant = variant
        self.chunk_size = chunk_size
        self.summarizer = summarizer
        self.k = k
        self.command = command
        self.max_input_tokens = max_input_tokens
        self.timeout = timeout
        self.spin3_score = spin3_score
        self.lowercase = lowercase
        self.jobs = jobs

    def fit(self, X=None, y=None) -> "SplitJoinSummarizer":
        return self

    def _spec(self) -> SummarizerSpec:
        return SummarizerSpec(
            kind=self.summarizer,
            k=self.k,
            command=None if self.command is None else tuple(self.command),
            max_input_tokens=self.max_input_tokens,
            timeout=self.timeout,
        )

    def generate(self, X: Iterable[str | Sequence[str]]) -> list[JoinResult]:
        spec = self._spec()
        documents = [ensure_tokens(doc, f"document {i}") for i, doc in enumerate(X)]
        results: list[JoinResult] = []
        with SummarizerPool(spec, size=max(int(self.jobs), 1)) as pool:
            for i, document in enumerate(documents):
                results.append(
                    generate_joined(
                        document,
                        self.variant,
                        spec,
                        self.chunk_size,
                        source_id=str(i),
                        spin3_score=self.spin3_score,
                        lowercase=self.lowercase,
                        pool=pool,
                    )
                )
        return results

    def predict(self, X: Iterable[str | Sequence[str]]) -> list[str]:
        return [detokenize(r.final_summary) for r in self.generate(X)]

    def score(self, X: Iterable[str | Sequence[str]], y: Iterable[str | Sequence[str]]) -> float:
        references = [ensure_tokens(ref, f"reference {i}") for i, ref in enumerate(y)]
        results = self.generate(X)
        if len(references) != len(results):
            raise ValueError(f"{len(results)} documents but {len(references)} references")
        total = 0.0
        for result, reference in zip(results, references):
            final: TokenSeq = result.final_summary
            if not final or not reference:
                continue
            total += rouge_l(final, reference, lowercase=self.lowercase).f1
        return total / len(results) if results else 0.0
