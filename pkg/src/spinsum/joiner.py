"""Generation step: split an unseen document, summarize each part, join the outputs.

Join rules by variant: SPIN1 and SPIN2 concatenate the per-part summaries in
part order; SPIN3 keeps only the part summary whose ROUGE-L score against its
own source part is highest (ties break toward the lowest part index).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from spinsum._parallel import imap_ordered
from spinsum.rouge import RougeScore, f1_measure, lcs_length, mean_scores, rouge_l, rouge_n
from spinsum.splitter import DocSummaryPair, split_document
from spinsum.summarizer import SummarizerPool, SummarizerSpec, summarize
from spinsum.textcore import TokenSeq
from spinsum.validation import check_choice, check_positive_int, normalize_variant

__all__ = [
    "JoinResult",
    "PartSummary",
    "evaluate_joined",
    "generate_joined",
    "join_parts",
    "render_report_table",
    "score_part_summary",
    "summarize_document_parts",
]

log = logging.getLogger(__name__)

SPIN3_SCORE_MODES = ("recall", "f1")


@dataclass(frozen=True)
class PartSummary:
    """One generated per-part summary, kept with the part it came from."""

    source_id: str
    part_index: int
    n_parts: int
    document_part: TokenSeq
    summary: TokenSeq


@dataclass(frozen=True)
class JoinResult:
    """The final summary assembled for one document."""

    source_id: str
    variant: str
    final_summary: TokenSeq
    part_summaries: list[TokenSeq]
    selected_part: int | None = None
    per_part_scores: list[float] | None = None


def score_part_summary(
    document_part: Sequence[str],
    generated: Sequence[str],
    *,
    mode: str = "recall",
    lowercase: bool = True,
) -> float:
    """Score one generated summary against its source part for best-part selection.

    ``recall`` (default) treats the generated summary as the reference, so the
    score is the fraction of its tokens covered in order by the source part;
    ``f1`` balances that against part coverage. An empty generated summary
    scores 0.0 (it cannot win selection).
    """
    check_choice(mode, "spin3 score mode", SPIN3_SCORE_MODES)
    if not generated:
        log.warning("empty generated summary scored as 0.0")
        return 0.0
    lcs = lcs_length(document_part, generated, lowercase=lowercase)
    recall = lcs / len(generated)
    if mode == "recall":
        return recall
    if not document_part:
        return 0.0
    return f1_measure(recall, lcs / len(document_part))


def join_parts(
    parts: Sequence[PartSummary],
    variant: str,
    *,
    spin3_score: str = "recall",
    lowercase: bool = True,
) -> JoinResult:
    """Assemble one document's per-part summaries into a JoinResult.

    Parts may arrive in any order; they are sorted by part index and must form
    a complete 0..n_parts-1 group for a single source id.
    """
    variant = normalize_variant(variant)
    if not parts:
        raise ValueError("no part summaries to join")
    ordered = sorted(parts, key=lambda p: p.part_index)
    source_id = ordered[0].source_id
    n_parts = ordered[0].n_parts
    indices = [p.part_index for p in ordered]
    if any(p.source_id != source_id for p in ordered):
        raise ValueError(f"parts belong to different documents: {sorted({p.source_id for p in ordered})}")
    if any(p.n_parts != n_parts for p in ordered) or indices != list(range(n_parts)):
        raise ValueError(
            f"incomplete or inconsistent part group for {source_id!r}: "
            f"indices {indices} with n_parts {n_parts}"
        )

    summaries = [list(p.summary) for p in ordered]
    if variant in ("SPIN1", "SPIN2"):
        final: TokenSeq = [tok for s in summaries for tok in s]
        return JoinResult(source_id, variant, final, summaries)

    scores = [
        score_part_summary(p.document_part, p.summary, mode=spin3_score, lowercase=lowercase)
        for p in ordered
    ]
    selected = max(range(n_parts), key=lambda i: (scores[i], -i))
    return JoinResult(source_id, variant, list(summaries[selected]), summaries, selected, scores)


def summarize_document_parts(
    document: Sequence[str],
    spec: SummarizerSpec,
    chunk_size: int,
    *,
    source_id: str = "doc",
    pool: SummarizerPool | None = None,
) -> list[PartSummary]:
    """Split a document and generate one summary per part.

    Documents within the chunk size pass through as a single part (generation
    always yields a summary, unlike training-time augmentation). Request ids
    are ``<source_id>#<part_index>``.
    """
    check_positive_int(chunk_size, "chunk_size")
    if not document:
        raise ValueError("empty document")
    doc_parts = split_document(document, chunk_size)
    ids = [f"{source_id}#{i}" for i in range(len(doc_parts))]
    if pool is not None:
        summaries = pool.summarize_parts(doc_parts, ids)
    else:
        summaries = [summarize(p, spec, request_id=rid) for p, rid in zip(doc_parts, ids)]
    return [
        PartSummary(source_id, i, len(doc_parts), doc_parts[i], summaries[i])
        for i in range(len(doc_parts))
    ]


def generate_joined(
    document: Sequence[str],
    variant: str,
    spec: SummarizerSpec,
    chunk_size: int,
    *,
    source_id: str = "doc",
    spin3_score: str = "recall",
    lowercase: bool = True,
    pool: SummarizerPool | None = None,
) -> JoinResult:
    """Full generation for one document: split, summarize each part, join."""
    parts = summarize_document_parts(
        document, spec, chunk_size, source_id=source_id, pool=pool
    )
    return join_parts(parts, variant, spin3_score=spin3_score, lowercase=lowercase)


_ZERO = RougeScore(0.0, 0.0, 0.0)


def _score_document(candidate: TokenSeq, reference: TokenSeq, lowercase: bool, source_id: str):
    if not candidate:
        log.warning("empty final summary for %r scored 0/0/0", source_id)
        return _ZERO, _ZERO, _ZERO
    scores = []
    for n in (1, 2):
        if len(reference) < n:
            log.warning("gold summary for %r has no %d-grams; scored 0/0/0", source_id, n)
            scores.append(_ZERO)
        else:
            scores.append(rouge_n(candidate, reference, n, lowercase=lowercase))
    scores.append(rouge_l(candidate, reference, lowercase=lowercase))
    return tuple(scores)


def _score_document_task(task):
    return _score_document(*task)


def evaluate_joined(
    results: Sequence[JoinResult],
    gold: Iterable[DocSummaryPair] | Mapping[str, DocSummaryPair],
    *,
    summarizer_label: str = "",
    lowercase: bool = True,
    jobs: int = 1,
) -> dict:
    """Score final summaries against gold and aggregate to corpus level.

    Returns the evaluation report as a dict: variant, summarizer, n_documents,
    corpus-mean rouge1/rouge2/rougeL blocks (unweighted per-document means)
    and a per_document list. The headline table metric is F1, declared in the
    report's ``table_metric`` field. ``jobs`` spreads per-document scoring
    over a process pool without affecting the result.

    Raises:
        ValueError: unknown or duplicate source ids.
    """
    if isinstance(gold, Mapping):
        gold_map = dict(gold)
    else:
        gold_map = {}
        for pair in gold:
            if pair.id in gold_map:
                raise ValueError(f"duplicate gold id {pair.id!r}")
            gold_map[pair.id] = pair

    variants = sorted({r.variant for r in results})
    variant = variants[0] if len(variants) == 1 else "+".join(variants)
    seen: set[str] = set()
    tasks = []
    for result in results:
        if result.source_id in seen:
            raise ValueError(f"duplicate prediction for source id {result.source_id!r}")
        seen.add(result.source_id)
        try:
            pair = gold_map[result.source_id]
        except KeyError:
            raise ValueError(
                f"prediction for unknown source id {result.source_id!r}"
            ) from None
        tasks.append((result.final_summary, pair.summary, lowercase, result.source_id))

    per_document = []
    r1_all: list[RougeScore] = []
    r2_all: list[RougeScore] = []
    rl_all: list[RougeScore] = []
    for result, (r1, r2, rl) in zip(results, imap_ordered(_score_document_task, tasks, jobs)):
        r1_all.append(r1)
        r2_all.append(r2)
        rl_all.append(rl)
        per_document.append(
            {
                "source_id": result.source_id,
                "rouge1": r1.as_dict(),
                "rouge2": r2.as_dict(),
                "rougeL": rl.as_dict(),
            }
        )
    return {
        "variant": variant,
        "summarizer": summarizer_label,
        "table_metric": "f1",
        "n_documents": len(results),
        "rouge1": mean_scores(r1_all).as_dict(),
        "rouge2": mean_scores(r2_all).as_dict(),
        "rougeL": mean_scores(rl_all).as_dict(),
        "per_document": per_document,
    }


def render_report_table(reports: Sequence[dict]) -> str:
    """Aligned plain-text table, one row per report: method x {R1, R2, RL}."""
    rows = []
    for report in reports:
        label = report["variant"]
        if report.get("summarizer"):
            label = f"{label} ({report['summarizer']})"
        rows.append(
            (
                label,
                *(100.0 * report[key]["f1"] for key in ("rouge1", "rouge2", "rougeL")),
            )
        )
    width = max([len("Method"), *(len(r[0]) for r in rows)]) if rows else len("Method")
    lines = [f"{'Method':<{width}}  {'R1':>7}  {'R2':>7}  {'RL':>7}"]
    for label, r1, r2, rl in rows:
        lines.append(f"{label:<{width}}  {r1:>7.2f}  {r2:>7.2f}  {rl:>7.2f}")
    lines.append("(R1/R2/RL: mean F1 x 100)")
    return "\n".join(lines)
