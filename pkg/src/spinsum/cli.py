"""Command-line interface: composable subcommands over the split-then-join pipeline.

Subcommands: filter, stats, split, summarize, join, eval, rouge, pipeline.
Exit codes: 0 success, 1 data errors, 2 usage errors. Identical inputs and
flags produce byte-identical outputs; wall-clock timestamps live only in the
run manifests. SPIN_LOG=debug|info|warning|error controls log verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import shlex
import sys
from argparse import BooleanOptionalAction
from datetime import datetime, timezone
from functools import partial
from itertools import groupby
from pathlib import Path

from spinsum import __version__
from spinsum._parallel import imap_ordered
from spinsum.corpus import (
    CorpusFormatError,
    RecordCounts,
    compute_stats,
    compute_stats_augmented,
    detect_schema,
    filter_by_length,
    read_augmented,
    read_corpus,
    read_join_results,
    read_part_summaries,
    render_stats_table,
    write_augmented,
    write_corpus,
    write_join_results,
    write_part_summaries,
)
from spinsum.joiner import (
    evaluate_joined,
    join_parts,
    render_report_table,
    summarize_document_parts,
)
from spinsum.rouge import rouge_l, rouge_n
from spinsum.splitter import (
    DEFAULT_CHUNK_SIZE,
    DEFAULT_MIN_DOC_TOKENS,
    SplitConfig,
    SummarySplitError,
    augment_pair,
)
from spinsum.summarizer import (
    DEFAULT_LEAD_K,
    DEFAULT_MAX_INPUT_TOKENS,
    DEFAULT_TIMEOUT,
    ExternalSummarizerError,
    SummarizerPool,
    SummarizerSpec,
)
from spinsum.textcore import tokenize
from spinsum.validation import normalize_variant

log = logging.getLogger("spinsum")


class UsageError(Exception):
    """Bad flag/config combination detected after argparse (exit code 2)."""


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _configure_logging() -> None:
    level_name = os.environ.get("SPIN_LOG", "warning").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


# ---------------------------------------------------------------------------
# config resolution: CLI flag > --config JSON > built-in default
# ---------------------------------------------------------------------------

FILTER_DEFAULTS = {"min_tokens": DEFAULT_MIN_DOC_TOKENS, "strict": False}
STATS_DEFAULTS = {"schema": "auto", "format": "table", "strict": False}
SPLIT_DEFAULTS = {
    "variant": "SPIN1",
    "chunk_size": DEFAULT_CHUNK_SIZE,
    "short_doc_policy": "skip",
    "keep_summary_remainder": False,
    "strict": False,
    "jobs": 1,
}
SUMMARIZE_DEFAULTS = {
    "summarizer": "lead_k",
    "k": DEFAULT_LEAD_K,
    "command": None,
    "chunk_size": DEFAULT_CHUNK_SIZE,
    "max_input_tokens": DEFAULT_MAX_INPUT_TOKENS,
    "timeout": DEFAULT_TIMEOUT,
    "strict": False,
    "jobs": 1,
}
JOIN_DEFAULTS = {
    "variant": "SPIN3",
    "spin3_score": "recall",
    "lowercase": True,
    "strict": False,
}
EVAL_DEFAULTS = {
    "summarizer_label": "",
    "lowercase": True,
    "strict": False,
    "jobs": 1,
}
ROUGE_DEFAULTS = {"metrics": "r1,r2,rl", "lowercase": True, "format": "text"}
PIPELINE_DEFAULTS = {
    "mode": "augment",
    "min_tokens": DEFAULT_MIN_DOC_TOKENS,
    "variant": "SPIN1",
    "chunk_size": DEFAULT_CHUNK_SIZE,
    "short_doc_policy": "skip",
    "keep_summary_remainder": False,
    "summarizer": "lead_k",
    "k": DEFAULT_LEAD_K,
    "command": None,
    "max_input_tokens": DEFAULT_MAX_INPUT_TOKENS,
    "timeout": DEFAULT_TIMEOUT,
    "spin3_score": "recall",
    "lowercase": True,
    "strict": False,
    "jobs": 1,
}


def _resolve(args: argparse.Namespace, defaults: dict) -> dict:
    """Merge explicit flags over --config values over built-in defaults."""
    overlay = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as handle:
            overlay = json.load(handle)
        if not isinstance(overlay, dict):
            raise UsageError(f"--config {args.config}: expected a JSON object")
        unknown = sorted(set(overlay) - set(defaults))
        if unknown:
            raise UsageError(f"--config {args.config}: unknown keys {unknown}")
    resolved = {}
    for key, default in defaults.items():
        value = getattr(args, key, None)
        if value is None:
            value = overlay.get(key, default)
        resolved[key] = value
    return resolved


def _write_manifest(
    args: argparse.Namespace,
    subcommand: str,
    config: dict,
    inputs: dict,
    outputs: dict,
    counts: RecordCounts,
    started: str,
    *,
    emitted: int | None = None,
    default_path: Path | None = None,
    extra: dict | None = None,
) -> None:
    path = Path(args.manifest) if getattr(args, "manifest", None) else default_path
    if path is None:
        log.debug("no manifest path for this run; pass --manifest to record one")
        return
    records: dict = {
        "read": counts.read,
        "written": counts.written,
        "skipped": counts.skipped,
        "skipped_detail": counts.skipped_detail,
    }
    if emitted is not None:
        records["emitted"] = emitted
    manifest = {
        "subcommand": subcommand,
        "version": __version__,
        "started": started,
        "finished": _utc_now(),
        "inputs": inputs,
        "outputs": outputs,
        "config": {k: (list(v) if isinstance(v, tuple) else v) for k, v in config.items()},
        "records": records,
    }
    if extra:
        manifest.update(extra)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")


def _emit(text: str, output: str | None) -> None:
    if output and output != "-":
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


# ---------------------------------------------------------------------------
# stage implementations (shared between individual subcommands and pipeline)
# ---------------------------------------------------------------------------


def _stage_filter(input_path: str, output_path: str, min_tokens: int, strict: bool) -> RecordCounts:
    counts = RecordCounts()
    pairs = read_corpus(input_path, strict=strict, counts=counts)
    counts.written = write_corpus(
        filter_by_length(pairs, min_tokens, counts=counts), output_path
    )
    return counts


def _augment_record(config: SplitConfig, pair):
    try:
        return augment_pair(pair, config)
    except SummarySplitError as exc:
        return exc


def _stage_split(
    input_path: str, output_path: str, config: SplitConfig, strict: bool, jobs: int
) -> tuple[RecordCounts, int]:
    counts = RecordCounts()
    pairs = read_corpus(input_path, strict=strict, counts=counts)

    def augmented_records():
        for result in imap_ordered(partial(_augment_record, config), pairs, jobs):
            if isinstance(result, SummarySplitError):
                if strict:
                    raise result
                log.warning("%s (record skipped)", result)
                counts.skip("summary_too_short")
                continue
            if not result:
                counts.skip("short_document")
                continue
            counts.written += 1
            yield from result

    emitted = write_augmented(augmented_records(), output_path)
    return counts, emitted


def _stage_summarize(
    input_path: str,
    output_path: str,
    spec: SummarizerSpec,
    chunk_size: int,
    strict: bool,
    jobs: int,
) -> tuple[RecordCounts, int]:
    counts = RecordCounts()
    pairs = read_corpus(input_path, strict=strict, counts=counts)

    def part_records():
        with SummarizerPool(spec, size=jobs) as pool:
            for pair in pairs:
                try:
                    parts = summarize_document_parts(
                        pair.document, spec, chunk_size, source_id=pair.id, pool=pool
                    )
                except (ValueError, ExternalSummarizerError) as exc:
                    if strict:
                        raise
                    log.warning("document %r skipped: %s", pair.id, exc)
                    counts.skip("summarize_failed")
                    continue
                counts.written += 1
                yield from parts

    emitted = write_part_summaries(part_records(), output_path)
    return counts, emitted


def _stage_join(
    input_path: str,
    output_path: str,
    variant: str,
    spin3_score: str,
    lowercase: bool,
    strict: bool,
) -> tuple[RecordCounts, int]:
    counts = RecordCounts()
    rows = read_part_summaries(input_path, strict=strict, counts=counts)
    seen: set[str] = set()

    def joined():
        for source_id, group_iter in groupby(rows, key=lambda p: p.source_id):
            group = list(group_iter)
            if source_id in seen:
                raise CorpusFormatError(
                    f"part group for {source_id!r} is not contiguous in {input_path}"
                )
            seen.add(source_id)
            try:
                result = join_parts(group, variant, spin3_score=spin3_score, lowercase=lowercase)
            except ValueError as exc:
                if strict:
                    raise
                log.warning("join failed for %r: %s", source_id, exc)
                counts.skipped += len(group)
                detail = counts.skipped_detail
                detail["join_failed"] = detail.get("join_failed", 0) + len(group)
                continue
            counts.written += len(group)
            yield result

    emitted = write_join_results(joined(), output_path)
    return counts, emitted


def _stage_eval(
    prediction_paths: list[str],
    gold_path: str,
    *,
    summarizer_label: str,
    lowercase: bool,
    strict: bool,
    jobs: int,
) -> tuple[list[dict], RecordCounts]:
    counts = RecordCounts()
    gold = list(read_corpus(gold_path, strict=strict, counts=counts))
    reports = []
    for path in prediction_paths:
        results = list(read_join_results(path, strict=strict, counts=counts))
        label = summarizer_label
        if not label and len(prediction_paths) > 1:
            label = Path(path).stem
        report = evaluate_joined(
            results, gold, summarizer_label=label, lowercase=lowercase, jobs=jobs
        )
        counts.written += len(results)
        reports.append(report)
    counts.written += len(gold)
    return reports, counts


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_filter(args: argparse.Namespace) -> int:
    started = _utc_now()
    cfg = _resolve(args, FILTER_DEFAULTS)
    counts = _stage_filter(args.input, args.output, cfg["min_tokens"], cfg["strict"])
    _write_manifest(
        args,
        "filter",
        cfg,
        {"input": args.input},
        {"output": args.output},
        counts,
        started,
        default_path=Path(f"{args.output}.manifest.json"),
    )
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    started = _utc_now()
    cfg = _resolve(args, STATS_DEFAULTS)
    schema = cfg["schema"]
    if schema == "auto":
        schema = detect_schema(args.input)
    counts = RecordCounts()
    if schema == "augmented":
        doc_stats, sum_stats = compute_stats_augmented(
            read_augmented(args.input, strict=cfg["strict"], counts=counts)
        )
    else:
        doc_stats, sum_stats = compute_stats(
            read_corpus(args.input, strict=cfg["strict"], counts=counts)
        )
    counts.written = counts.read - counts.skipped
    if cfg["format"] == "json":
        text = json.dumps(
            {"schema": schema, "document": doc_stats.as_dict(), "summary": sum_stats.as_dict()},
            ensure_ascii=False,
            indent=2,
        )
    else:
        text = render_stats_table(doc_stats, sum_stats)
    _emit(text, args.output)
    default_manifest = (
        Path(f"{args.output}.manifest.json") if args.output and args.output != "-" else None
    )
    _write_manifest(
        args,
        "stats",
        cfg,
        {"input": args.input},
        {"output": args.output or "-"},
        counts,
        started,
        default_path=default_manifest,
    )
    return 0


def _cmd_split(args: argparse.Namespace) -> int:
    started = _utc_now()
    cfg = _resolve(args, SPLIT_DEFAULTS)
    config = SplitConfig(
        chunk_size=cfg["chunk_size"],
        variant=cfg["variant"],
        short_doc_policy=cfg["short_doc_policy"],
        keep_summary_remainder=cfg["keep_summary_remainder"],
    )
    counts, emitted = _stage_split(args.input, args.output, config, cfg["strict"], cfg["jobs"])
    cfg["variant"] = config.variant
    _write_manifest(
        args,
        "split",
        cfg,
        {"input": args.input},
        {"output": args.output},
        counts,
        started,
        emitted=emitted,
        default_path=Path(f"{args.output}.manifest.json"),
    )
    return 0


def _build_spec(cfg: dict) -> SummarizerSpec:
    command = cfg["command"]
    if isinstance(command, str):
        command = tuple(shlex.split(command))
    return SummarizerSpec(
        kind=cfg["summarizer"],
        k=cfg["k"],
        command=command,
        max_input_tokens=cfg["max_input_tokens"],
        timeout=cfg["timeout"],
    )


def _cmd_summarize(args: argparse.Namespace) -> int:
    started = _utc_now()
    cfg = _resolve(args, SUMMARIZE_DEFAULTS)
    spec = _build_spec(cfg)
    counts, emitted = _stage_summarize(
        args.input, args.output, spec, cfg["chunk_size"], cfg["strict"], cfg["jobs"]
    )
    _write_manifest(
        args,
        "summarize",
        cfg,
        {"input": args.input},
        {"output": args.output},
        counts,
        started,
        emitted=emitted,
        default_path=Path(f"{args.output}.manifest.json"),
    )
    return 0


def _cmd_join(args: argparse.Namespace) -> int:
    started = _utc_now()
    cfg = _resolve(args, JOIN_DEFAULTS)
    variant = normalize_variant(cfg["variant"])
    counts, emitted = _stage_join(
        args.input, args.output, variant, cfg["spin3_score"], cfg["lowercase"], cfg["strict"]
    )
    cfg["variant"] = variant
    _write_manifest(
        args,
        "join",
        cfg,
        {"input": args.input},
        {"output": args.output},
        counts,
        started,
        emitted=emitted,
        default_path=Path(f"{args.output}.manifest.json"),
    )
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    started = _utc_now()
    cfg = _resolve(args, EVAL_DEFAULTS)
    reports, counts = _stage_eval(
        args.predictions,
        args.gold,
        summarizer_label=cfg["summarizer_label"],
        lowercase=cfg["lowercase"],
        strict=cfg["strict"],
        jobs=cfg["jobs"],
    )
    payload = reports[0] if len(reports) == 1 else {"reports": reports}
    _emit(json.dumps(payload, ensure_ascii=False, indent=2), args.output)
    table = render_report_table(reports)
    if args.table:
        Path(args.table).write_text(table + "\n", encoding="utf-8")
    elif args.output and args.output != "-":
        print(table)
    default_manifest = (
        Path(f"{args.output}.manifest.json") if args.output and args.output != "-" else None
    )
    _write_manifest(
        args,
        "eval",
        cfg,
        {"predictions": list(args.predictions), "gold": args.gold},
        {"output": args.output or "-", "table": args.table},
        counts,
        started,
        default_path=default_manifest,
    )
    return 0


def _read_text_arg(inline: str | None, file_path: str | None, name: str) -> str:
    if (inline is None) == (file_path is None):
        raise UsageError(f"provide exactly one of --{name} or --{name}-file")
    if inline is not None:
        return inline
    return Path(file_path).read_text(encoding="utf-8")


def _cmd_rouge(args: argparse.Namespace) -> int:
    started = _utc_now()
    cfg = _resolve(args, ROUGE_DEFAULTS)
    candidate = tokenize(_read_text_arg(args.candidate, args.candidate_file, "candidate"))
    reference = tokenize(_read_text_arg(args.reference, args.reference_file, "reference"))
    lowercase = cfg["lowercase"]
    wanted = [m.strip().lower() for m in cfg["metrics"].split(",") if m.strip()]
    unknown = sorted(set(wanted) - {"r1", "r2", "rl"})
    if unknown:
        raise UsageError(f"unknown metrics {unknown}; choose from r1, r2, rl")
    scores = {}
    for metric in wanted:
        if metric == "rl":
            scores["rougeL"] = rouge_l(candidate, reference, lowercase=lowercase)
        else:
            n = int(metric[1])
            scores[f"rouge{n}"] = rouge_n(candidate, reference, n, lowercase=lowercase)
    if cfg["format"] == "json":
        text = json.dumps(
            {name: score.as_dict() for name, score in scores.items()},
            ensure_ascii=False,
            indent=2,
        )
    else:
        lines = [
            f"{name:<7}  recall={score.recall:.4f}  precision={score.precision:.4f}  f1={score.f1:.4f}"
            for name, score in scores.items()
        ]
        text = "\n".join(lines)
    _emit(text, args.output)
    counts = RecordCounts(read=2, written=2)
    default_manifest = (
        Path(f"{args.output}.manifest.json") if args.output and args.output != "-" else None
    )
    _write_manifest(
        args,
        "rouge",
        cfg,
        {"candidate": args.candidate_file or "<inline>", "reference": args.reference_file or "<inline>"},
        {"output": args.output or "-"},
        counts,
        started,
        default_path=default_manifest,
    )
    return 0


def _cmd_pipeline(args: argparse.Namespace) -> int:
    started = _utc_now()
    cfg = _resolve(args, PIPELINE_DEFAULTS)
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    filtered = outdir / "filtered.jsonl"
    stages: dict[str, dict] = {}

    counts = _stage_filter(args.input, str(filtered), cfg["min_tokens"], cfg["strict"])
    stages["filter"] = {"read": counts.read, "written": counts.written, "skipped": counts.skipped}

    if cfg["mode"] == "augment":
        augmented = outdir / "augmented.jsonl"
        config = SplitConfig(
            chunk_size=cfg["chunk_size"],
            variant=cfg["variant"],
            short_doc_policy=cfg["short_doc_policy"],
            keep_summary_remainder=cfg["keep_summary_remainder"],
        )
        counts, emitted = _stage_split(
            str(filtered), str(augmented), config, cfg["strict"], cfg["jobs"]
        )
        stages["split"] = {
            "read": counts.read,
            "written": counts.written,
            "skipped": counts.skipped,
            "emitted": emitted,
        }
        outputs = {"filtered": str(filtered), "augmented": str(augmented)}
    else:
        spec = _build_spec(cfg)
        parts_path = outdir / "parts.jsonl"
        joined_path = outdir / "joined.jsonl"
        report_path = outdir / "report.json"
        table_path = outdir / "report.txt"
        counts, emitted = _stage_summarize(
            str(filtered), str(parts_path), spec, cfg["chunk_size"], cfg["strict"], cfg["jobs"]
        )
        stages["summarize"] = {
            "read": counts.read,
            "written": counts.written,
            "skipped": counts.skipped,
            "emitted": emitted,
        }
        variant = normalize_variant(cfg["variant"])
        counts, emitted = _stage_join(
            str(parts_path),
            str(joined_path),
            variant,
            cfg["spin3_score"],
            cfg["lowercase"],
            cfg["strict"],
        )
        stages["join"] = {
            "read": counts.read,
            "written": counts.written,
            "skipped": counts.skipped,
            "emitted": emitted,
        }
        label = cfg["summarizer"] if cfg["summarizer"] == "lead_k" else " ".join(spec.command or ())
        reports, counts = _stage_eval(
            [str(joined_path)],
            str(filtered),
            summarizer_label=label,
            lowercase=cfg["lowercase"],
            strict=cfg["strict"],
            jobs=cfg["jobs"],
        )
        report_path.write_text(
            json.dumps(reports[0], ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
        table_path.write_text(render_report_table(reports) + "\n", encoding="utf-8")
        stages["eval"] = {"read": counts.read, "written": counts.written, "skipped": counts.skipped}
        outputs = {
            "filtered": str(filtered),
            "parts": str(parts_path),
            "joined": str(joined_path),
            "report": str(report_path),
            "table": str(table_path),
        }

    total = RecordCounts()
    for stage in stages.values():
        total.read += stage["read"]
        total.written += stage["written"]
        total.skipped += stage["skipped"]
    _write_manifest(
        args,
        "pipeline",
        cfg,
        {"input": args.input},
        outputs,
        total,
        started,
        default_path=outdir / "pipeline.manifest.json",
        extra={"stages": stages},
    )
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file of option defaults (flags win)")
    parser.add_argument("--manifest", help="run manifest path (overrides the default)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinsum",
        description="Split-then-join pipeline for very-long-document summarization.",
    )
    parser.add_argument("--version", action="version", version=f"spinsum {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    p = sub.add_parser("filter", help="drop documents at or below a token-length threshold")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--min-tokens", type=int, dest="min_tokens")
    p.add_argument("--strict", action=BooleanOptionalAction)
    _add_common(p)
    p.set_defaults(handler=_cmd_filter)

    p = sub.add_parser("stats", help="count/mean/50%/75%/max token-length report")
    p.add_argument("--input", required=True)
    p.add_argument("--output", help="report destination (default stdout)")
    p.add_argument("--schema", choices=["auto", "pairs", "augmented"])
    p.add_argument("--format", choices=["table", "json"])
    p.add_argument("--strict", action=BooleanOptionalAction)
    _add_common(p)
    p.set_defaults(handler=_cmd_stats)

    p = sub.add_parser("split", help="augment pairs into window-sized training records")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--variant", help="spin1 | spin2 | spin3")
    p.add_argument("--chunk-size", type=int, dest="chunk_size")
    p.add_argument("--short-doc-policy", choices=["skip", "passthrough"], dest="short_doc_policy")
    p.add_argument("--keep-summary-remainder", action=BooleanOptionalAction, dest="keep_summary_remainder")
    p.add_argument("--strict", action=BooleanOptionalAction)
    p.add_argument("--jobs", type=int)
    _add_common(p)
    p.set_defaults(handler=_cmd_split)

    p = sub.add_parser("summarize", help="split documents and generate per-part summaries")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--summarizer", choices=["lead_k", "external"])
    p.add_argument("--k", type=int)
    p.add_argument("--command", help="external summarizer command line (shlex-split)")
    p.add_argument("--chunk-size", type=int, dest="chunk_size")
    p.add_argument("--max-input-tokens", type=int, dest="max_input_tokens")
    p.add_argument("--timeout", type=float)
    p.add_argument("--strict", action=BooleanOptionalAction)
    p.add_argument("--jobs", type=int, help="external summarizer pool size")
    _add_common(p)
    p.set_defaults(handler=_cmd_summarize)

    p = sub.add_parser("join", help="assemble per-part summaries into final summaries")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--variant", help="spin1 | spin2 | spin3")
    p.add_argument("--spin3-score", choices=["recall", "f1"], dest="spin3_score")
    p.add_argument("--lowercase", action=BooleanOptionalAction)
    p.add_argument("--strict", action=BooleanOptionalAction)
    _add_common(p)
    p.set_defaults(handler=_cmd_join)

    p = sub.add_parser("eval", help="score final summaries against gold summaries")
    p.add_argument("--predictions", required=True, nargs="+")
    p.add_argument("--gold", required=True)
    p.add_argument("--output", help="JSON report destination (default stdout)")
    p.add_argument("--table", help="also write the aligned text table here")
    p.add_argument("--summarizer-label", dest="summarizer_label")
    p.add_argument("--lowercase", action=BooleanOptionalAction)
    p.add_argument("--strict", action=BooleanOptionalAction)
    p.add_argument("--jobs", type=int)
    _add_common(p)
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("rouge", help="score two texts or files directly")
    p.add_argument("--candidate")
    p.add_argument("--candidate-file", dest="candidate_file")
    p.add_argument("--reference")
    p.add_argument("--reference-file", dest="reference_file")
    p.add_argument("--metrics", help="comma list from r1,r2,rl (default all)")
    p.add_argument("--lowercase", action=BooleanOptionalAction)
    p.add_argument("--format", choices=["text", "json"])
    p.add_argument("--output", help="default stdout")
    _add_common(p)
    p.set_defaults(handler=_cmd_rouge)

    p = sub.add_parser(
        "pipeline",
        help="fused stages: filter->split (augment) or filter->summarize->join->eval (generate)",
    )
    p.add_argument("--input", required=True)
    p.add_argument("--output-dir", required=True, dest="output_dir")
    p.add_argument("--mode", choices=["augment", "generate"])
    p.add_argument("--min-tokens", type=int, dest="min_tokens")
    p.add_argument("--variant")
    p.add_argument("--chunk-size", type=int, dest="chunk_size")
    p.add_argument("--short-doc-policy", choices=["skip", "passthrough"], dest="short_doc_policy")
    p.add_argument("--keep-summary-remainder", action=BooleanOptionalAction, dest="keep_summary_remainder")
    p.add_argument("--summarizer", choices=["lead_k", "external"])
    p.add_argument("--k", type=int)
    p.add_argument("--command")
    p.add_argument("--max-input-tokens", type=int, dest="max_input_tokens")
    p.add_argument("--timeout", type=float)
    p.add_argument("--spin3-score", choices=["recall", "f1"], dest="spin3_score")
    p.add_argument("--lowercase", action=BooleanOptionalAction)
    p.add_argument("--strict", action=BooleanOptionalAction)
    p.add_argument("--jobs", type=int)
    _add_common(p)
    p.set_defaults(handler=_cmd_pipeline)

    return parser


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"spinsum: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, ExternalSummarizerError) as exc:
        print(f"spinsum: error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
