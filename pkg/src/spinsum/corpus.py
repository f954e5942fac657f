"""Streaming JSONL corpus I/O, length filtering, and descriptive length statistics.

Readers hold one record at a time; statistics accumulate into per-length
counters so peak memory is independent of corpus size. Malformed lines are
reported with their line number and skipped unless strict mode is on.

File schemas (all UTF-8, one JSON object per line):
  pairs:          {"id": str (optional, line number if absent),
                   "document": str, "summary": str}
  augmented:      {"source_id": str, "part_index": int, "n_parts": int,
                   "document": str, "summary": str, "variant": "SPIN1"|"SPIN2"|"SPIN3"}
  part summaries: augmented minus "variant" (generated summaries, pre-join)
  join results:   {"source_id": str, "variant": str, "final_summary": str,
                   "part_summaries": [str], "selected_part": int|null,
                   "per_part_scores": [float]|null}
"""

from __future__ import annotations

import json
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator, TextIO

from spinsum.joiner import JoinResult, PartSummary
from spinsum.splitter import AugmentedPair, DocSummaryPair
from spinsum.textcore import detokenize, tokenize
from spinsum.validation import VARIANTS

__all__ = [
    "CorpusFormatError",
    "CorpusStats",
    "LengthAccumulator",
    "RecordCounts",
    "compute_stats",
    "compute_stats_augmented",
    "detect_schema",
    "filter_by_length",
    "read_augmented",
    "read_corpus",
    "read_join_results",
    "read_part_summaries",
    "render_stats_table",
    "write_augmented",
    "write_corpus",
    "write_join_results",
    "write_part_summaries",
]

log = logging.getLogger(__name__)


class CorpusFormatError(ValueError):
    """A corpus line failed schema validation (raised in strict mode)."""


@dataclass
class RecordCounts:
    """Mutable read/written/skipped accounting shared with run manifests."""

    read: int = 0
    written: int = 0
    skipped: int = 0
    skipped_detail: dict[str, int] = field(default_factory=dict)

    def skip(self, reason: str) -> None:
        self.skipped += 1
        self.skipped_detail[reason] = self.skipped_detail.get(reason, 0) + 1


def _require_str(obj: dict, key: str, lineno: int) -> str:
    value = obj.get(key)
    if not isinstance(value, str):
        raise CorpusFormatError(f"line {lineno}: field {key!r} missing or not a string")
    return value


def _require_int(obj: dict, key: str, lineno: int) -> int:
    value = obj.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise CorpusFormatError(f"line {lineno}: field {key!r} missing or not an integer")
    return value


def _parse_pair(obj: dict, lineno: int) -> DocSummaryPair:
    raw_id = obj.get("id", str(lineno))
    if not isinstance(raw_id, str) or not raw_id:
        raise CorpusFormatError(f"line {lineno}: field 'id' must be a non-empty string")
    document = tokenize(_require_str(obj, "document", lineno))
    summary = tokenize(_require_str(obj, "summary", lineno))
    if not summary:
        raise CorpusFormatError(f"line {lineno}: empty summary")
    return DocSummaryPair(raw_id, document, summary)


def _parse_augmented(obj: dict, lineno: int) -> AugmentedPair:
    source_id = _require_str(obj, "source_id", lineno)
    part_index = _require_int(obj, "part_index", lineno)
    n_parts = _require_int(obj, "n_parts", lineno)
    if n_parts < 1 or not 0 <= part_index < n_parts:
        raise CorpusFormatError(
            f"line {lineno}: part_index {part_index} out of range for n_parts {n_parts}"
        )
    variant = _require_str(obj, "variant", lineno)
    if variant not in VARIANTS:
        raise CorpusFormatError(f"line {lineno}: unknown variant {variant!r}")
    return AugmentedPair(
        source_id,
        part_index,
        n_parts,
        tokenize(_require_str(obj, "document", lineno)),
        tokenize(_require_str(obj, "summary", lineno)),
        variant,
    )


def _parse_part_summary(obj: dict, lineno: int) -> PartSummary:
    source_id = _require_str(obj, "source_id", lineno)
    part_index = _require_int(obj, "part_index", lineno)
    n_parts = _require_int(obj, "n_parts", lineno)
    if n_parts < 1 or not 0 <= part_index < n_parts:
        raise CorpusFormatError(
            f"line {lineno}: part_index {part_index} out of range for n_parts {n_parts}"
        )
    return PartSummary(
        source_id,
        part_index,
        n_parts,
        tokenize(_require_str(obj, "document", lineno)),
        tokenize(_require_str(obj, "summary", lineno)),
    )


def _parse_join_result(obj: dict, lineno: int) -> JoinResult:
    source_id = _require_str(obj, "source_id", lineno)
    variant = _require_str(obj, "variant", lineno)
    if variant not in VARIANTS:
        raise CorpusFormatError(f"line {lineno}: unknown variant {variant!r}")
    part_summaries = obj.get("part_summaries")
    if not isinstance(part_summaries, list) or not all(isinstance(s, str) for s in part_summaries):
        raise CorpusFormatError(f"line {lineno}: 'part_summaries' must be a list of strings")
    selected = obj.get("selected_part")
    if selected is not None and (not isinstance(selected, int) or isinstance(selected, bool)):
        raise CorpusFormatError(f"line {lineno}: 'selected_part' must be an integer or null")
    scores = obj.get("per_part_scores")
    if scores is not None and not all(isinstance(s, (int, float)) for s in scores):
        raise CorpusFormatError(f"line {lineno}: 'per_part_scores' must be numbers or null")
    return JoinResult(
        source_id,
        variant,
        tokenize(_require_str(obj, "final_summary", lineno)),
        [tokenize(s) for s in part_summaries],
        selected,
        None if scores is None else [float(s) for s in scores],
    )


def _read_jsonl(
    path: str | Path,
    parse: Callable[[dict, int], object],
    *,
    strict: bool,
    counts: RecordCounts | None,
) -> Iterator:
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            if not line.strip():
                continue
            if counts is not None:
                counts.read += 1
            try:
                obj = json.loads(line)
                if not isinstance(obj, dict):
                    raise CorpusFormatError(f"line {lineno}: record is not a JSON object")
                yield parse(obj, lineno)
            except (json.JSONDecodeError, CorpusFormatError) as exc:
                message = (
                    f"line {lineno}: invalid JSON: {exc}"
                    if isinstance(exc, json.JSONDecodeError)
                    else str(exc)
                )
                if strict:
                    raise CorpusFormatError(f"{path}: {message}") from None
                log.warning("%s: %s (skipped)", path, message)
                if counts is not None:
                    counts.skip("invalid")


def read_corpus(
    path: str | Path, *, strict: bool = False, counts: RecordCounts | None = None
) -> Iterator[DocSummaryPair]:
    """Stream document-summary pairs from a pairs-schema JSONL file."""
    return _read_jsonl(path, _parse_pair, strict=strict, counts=counts)


def read_augmented(
    path: str | Path, *, strict: bool = False, counts: RecordCounts | None = None
) -> Iterator[AugmentedPair]:
    """Stream augmented records (document part + paired summary + variant)."""
    return _read_jsonl(path, _parse_augmented, strict=strict, counts=counts)


def read_part_summaries(
    path: str | Path, *, strict: bool = False, counts: RecordCounts | None = None
) -> Iterator[PartSummary]:
    """Stream generated per-part summaries (the pre-join intermediate)."""
    return _read_jsonl(path, _parse_part_summary, strict=strict, counts=counts)


def read_join_results(
    path: str | Path, *, strict: bool = False, counts: RecordCounts | None = None
) -> Iterator[JoinResult]:
    """Stream assembled final summaries."""
    return _read_jsonl(path, _parse_join_result, strict=strict, counts=counts)


def detect_schema(path: str | Path) -> str:
    """Guess 'pairs' or 'augmented' from the first data line's fields."""
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError:
                return "pairs"
            if isinstance(obj, dict) and "part_index" in obj:
                return "augmented"
            return "pairs"
    return "pairs"


def filter_by_length(
    pairs: Iterable[DocSummaryPair],
    min_doc_tokens: int,
    *,
    counts: RecordCounts | None = None,
) -> Iterator[DocSummaryPair]:
    """Keep pairs whose document is strictly longer than min_doc_tokens tokens."""
    if min_doc_tokens < 0:
        raise ValueError(f"min_doc_tokens must be non-negative, got {min_doc_tokens}")
    for pair in pairs:
        if len(pair.document) > min_doc_tokens:
            yield pair
        elif counts is not None:
            counts.skip("below_min_length")


@dataclass(frozen=True)
class CorpusStats:
    """count / mean / 50% / 75% / max of a token-length distribution."""

    count: int
    mean: float
    p50: int
    p75: int
    max: int
    empty: bool = False

    def as_dict(self) -> dict:
        return {
            "count": self.count,
            "mean": self.mean,
            "p50": self.p50,
            "p75": self.p75,
            "max": self.max,
            "empty": self.empty,
        }


class LengthAccumulator:
    """Mergeable length-distribution accumulator.

    Stores counts per distinct length, so memory is bounded by the length
    range rather than the record count and parallel shards can combine.
    """

    def __init__(self) -> None:
        self._counts: Counter[int] = Counter()

    def add(self, length: int) -> None:
        self._counts[length] += 1

    def merge(self, other: "LengthAccumulator") -> None:
        self._counts.update(other._counts)

    def _nearest_rank(self, p: float, total: int) -> int:
        # ceil(p*n)-th order statistic of the sorted length multiset
        rank = math.ceil(p * total)
        cumulative = 0
        for length in sorted(self._counts):
            cumulative += self._counts[length]
            if cumulative >= rank:
                return length
        return max(self._counts)

    def stats(self) -> CorpusStats:
        total = sum(self._counts.values())
        if total == 0:
            return CorpusStats(0, 0.0, 0, 0, 0, empty=True)
        mean = sum(length * n for length, n in self._counts.items()) / total
        return CorpusStats(
            count=total,
            mean=mean,
            p50=self._nearest_rank(0.50, total),
            p75=self._nearest_rank(0.75, total),
            max=max(self._counts),
        )


def compute_stats(pairs: Iterable[DocSummaryPair]) -> tuple[CorpusStats, CorpusStats]:
    """(document stats, summary stats) over a stream of pairs."""
    docs, sums = LengthAccumulator(), LengthAccumulator()
    for pair in pairs:
        docs.add(len(pair.document))
        sums.add(len(pair.summary))
    return docs.stats(), sums.stats()


def compute_stats_augmented(pairs: Iterable[AugmentedPair]) -> tuple[CorpusStats, CorpusStats]:
    """(document-part stats, paired-summary stats) over augmented records."""
    docs, sums = LengthAccumulator(), LengthAccumulator()
    for pair in pairs:
        docs.add(len(pair.document_part))
        sums.add(len(pair.paired_summary))
    return docs.stats(), sums.stats()


def render_stats_table(doc_stats: CorpusStats, sum_stats: CorpusStats) -> str:
    """Aligned count/mean/50%/75%/max table for document and summary lengths."""
    rows = [
        ("count", f"{doc_stats.count:,}", f"{sum_stats.count:,}"),
        ("mean", f"{doc_stats.mean:,.2f}", f"{sum_stats.mean:,.2f}"),
        ("50%", f"{doc_stats.p50:,}", f"{sum_stats.p50:,}"),
        ("75%", f"{doc_stats.p75:,}", f"{sum_stats.p75:,}"),
        ("max", f"{doc_stats.max:,}", f"{sum_stats.max:,}"),
    ]
    w1 = max(len(r[1]) for r in rows + [("", "|D|", "")])
    w2 = max(len(r[2]) for r in rows + [("", "", "|S|")])
    lines = [f"{'Parameter':<9}  {'|D|':>{w1}}  {'|S|':>{w2}}"]
    for name, d, s in rows:
        lines.append(f"{name:<9}  {d:>{w1}}  {s:>{w2}}")
    if doc_stats.empty:
        lines.append("(empty corpus)")
    return "\n".join(lines)


def _open_out(path: str | Path) -> TextIO:
    return open(path, "w", encoding="utf-8", newline="\n")


def _dump(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False)


def write_corpus(pairs: Iterable[DocSummaryPair], path: str | Path) -> int:
    """Write pairs-schema JSONL; whitespace inside texts is normalized to single spaces."""
    written = 0
    with _open_out(path) as out:
        for pair in pairs:
            out.write(
                _dump(
                    {
                        "id": pair.id,
                        "document": detokenize(pair.document),
                        "summary": detokenize(pair.summary),
                    }
                )
                + "\n"
            )
            written += 1
    return written


def write_augmented(pairs: Iterable[AugmentedPair], path: str | Path) -> int:
    """Write augmented-schema JSONL; re-readable by read_augmented with a lossless token round trip."""
    written = 0
    with _open_out(path) as out:
        for pair in pairs:
            out.write(
                _dump(
                    {
                        "source_id": pair.source_id,
                        "part_index": pair.part_index,
                        "n_parts": pair.n_parts,
                        "document": detokenize(pair.document_part),
                        "summary": detokenize(pair.paired_summary),
                        "variant": pair.variant,
                    }
                )
                + "\n"
            )
            written += 1
    return written


def write_part_summaries(parts: Iterable[PartSummary], path: str | Path) -> int:
    written = 0
    with _open_out(path) as out:
        for part in parts:
            out.write(
                _dump(
                    {
                        "source_id": part.source_id,
                        "part_index": part.part_index,
                        "n_parts": part.n_parts,
                        "document": detokenize(part.document_part),
                        "summary": detokenize(part.summary),
                    }
                )
                + "\n"
            )
            written += 1
    return written


def write_join_results(results: Iterable[JoinResult], path: str | Path) -> int:
    written = 0
    with _open_out(path) as out:
        for result in results:
            out.write(
                _dump(
                    {
                        "source_id": result.source_id,
                        "variant": result.variant,
                        "final_summary": detokenize(result.final_summary),
                        "part_summaries": [detokenize(s) for s in result.part_summaries],
                        "selected_part": result.selected_part,
                        "per_part_scores": result.per_part_scores,
                    }
                )
                + "\n"
            )
            written += 1
    return written
