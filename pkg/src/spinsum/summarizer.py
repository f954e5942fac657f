"""Per-part summarizers: a deterministic lead-k baseline and external processes.

External summarizers are child processes speaking a line-delimited JSON
protocol over stdin/stdout: one request line in, exactly one response line
out, in request order.

    request:  {"id": "<source_id>#<part_index>", "text": "...", "max_tokens": N}
    response: {"id": "<same id>", "summary": "..."}   or
              {"id": "<same id>", "error": "<message>"}

A child that exits before responding fails the pending request. Parallelism
comes from pools of child processes, never from concurrent requests to one
child.
"""

from __future__ import annotations

import json
import logging
import queue
import subprocess
import threading
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from spinsum.textcore import TokenSeq, detokenize, tokenize
from spinsum.validation import check_choice, check_positive_int

__all__ = [
    "DEFAULT_LEAD_K",
    "DEFAULT_MAX_INPUT_TOKENS",
    "DEFAULT_TIMEOUT",
    "ExternalSummarizer",
    "ExternalSummarizerError",
    "SummarizerPool",
    "SummarizerSpec",
    "lead_k",
    "summarize",
]

log = logging.getLogger(__name__)

DEFAULT_LEAD_K = 128
DEFAULT_MAX_INPUT_TOKENS = 4096
DEFAULT_TIMEOUT = 300.0

_STDERR_TAIL_LINES = 50


class ExternalSummarizerError(RuntimeError):
    """External summarizer failed; the message carries the process diagnostics."""


@dataclass(frozen=True)
class SummarizerSpec:
    """Configuration naming which summarizer backs per-part generation."""

    kind: str = "lead_k"
    k: int = DEFAULT_LEAD_K
    command: tuple[str, ...] | None = None
    max_input_tokens: int = DEFAULT_MAX_INPUT_TOKENS
    timeout: float = DEFAULT_TIMEOUT

    def __post_init__(self) -> None:
        check_choice(self.kind, "kind", ("lead_k", "external"))
        check_positive_int(self.k, "k")
        check_positive_int(self.max_input_tokens, "max_input_tokens")
        if self.kind == "external":
            if not self.command:
                raise ValueError("external summarizer requires a non-empty command")
            object.__setattr__(self, "command", tuple(self.command))
        if self.timeout <= 0:
            raise ValueError(f"timeout must be positive, got {self.timeout}")


def lead_k(part: Sequence[str], k: int) -> TokenSeq:
    """First min(k, len(part)) tokens — the deterministic extractive baseline."""
    check_positive_int(k, "k")
    return list(part[:k])


class ExternalSummarizer:
    """Client for one child process speaking the line protocol.

    Holds exactly one in-flight request at a time. Usable as a context
    manager; ``close()`` terminates the child.
    """

    def __init__(self, spec: SummarizerSpec):
        if spec.kind != "external":
            raise ValueError("ExternalSummarizer requires a spec with kind='external'")
        self.spec = spec
        self._proc = subprocess.Popen(
            list(spec.command),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
            encoding="utf-8",
        )
        self._lines: queue.Queue[str | None] = queue.Queue()
        self._stderr_tail: deque[str] = deque(maxlen=_STDERR_TAIL_LINES)
        self._stdout_thread = threading.Thread(target=self._drain_stdout, daemon=True)
        self._stderr_thread = threading.Thread(target=self._drain_stderr, daemon=True)
        self._stdout_thread.start()
        self._stderr_thread.start()

    def _drain_stdout(self) -> None:
        for line in self._proc.stdout:
            self._lines.put(line)
        self._lines.put(None)  # EOF marker

    def _drain_stderr(self) -> None:
        for line in self._proc.stderr:
            self._stderr_tail.append(line.rstrip("\n"))

    def _diagnostics(self) -> str:
        code = self._proc.poll()
        state = f"exit code {code}" if code is not None else "still running"
        tail = "\n".join(self._stderr_tail)
        suffix = f"; stderr tail:\n{tail}" if tail else ""
        return f"command {list(self.spec.command)!r} ({state}){suffix}"

    def summarize(self, part: Sequence[str], request_id: str = "part#0") -> TokenSeq:
        """Send one request and return the tokenized summary from the response.

        Raises:
            ValueError: empty part or part longer than the summarizer window.
            ExternalSummarizerError: child exit/timeout/malformed or error response.
        """
        _check_part(part, self.spec)
        request = {"id": request_id, "text": detokenize(part), "max_tokens": self.spec.max_input_tokens}
        try:
            self._proc.stdin.write(json.dumps(request, ensure_ascii=False) + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise ExternalSummarizerError(
                f"could not send request {request_id!r}: {exc}; {self._diagnostics()}"
            ) from exc
        try:
            line = self._lines.get(timeout=self.spec.timeout)
        except queue.Empty:
            self.close()
            raise ExternalSummarizerError(
                f"request {request_id!r} timed out after {self.spec.timeout}s; {self._diagnostics()}"
            ) from None
        if line is None:
            raise ExternalSummarizerError(
                f"process exited before responding to request {request_id!r}; {self._diagnostics()}"
            )
        return _parse_response(line, request_id, self._diagnostics)

    def close(self) -> None:
        if self._proc.poll() is None:
            try:
                self._proc.stdin.close()
            except OSError:
                pass
            try:
                self._proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._proc.kill()
                self._proc.wait()

    def __enter__(self) -> "ExternalSummarizer":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def _check_part(part: Sequence[str], spec: SummarizerSpec) -> None:
    if not part:
        raise ValueError("empty part")
    if len(part) > spec.max_input_tokens:
        raise ValueError(
            f"part exceeds summarizer window: {len(part)} > {spec.max_input_tokens} tokens"
        )


def _parse_response(line: str, request_id: str, diagnostics) -> TokenSeq:
    try:
        payload = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ExternalSummarizerError(
            f"malformed response line {line.strip()!r}: {exc}; {diagnostics()}"
        ) from exc
    if not isinstance(payload, dict):
        raise ExternalSummarizerError(f"response is not an object: {line.strip()!r}")
    if payload.get("id") != request_id:
        raise ExternalSummarizerError(
            f"response id {payload.get('id')!r} does not match request id {request_id!r}"
        )
    if "error" in payload:
        raise ExternalSummarizerError(f"summarizer error for {request_id!r}: {payload['error']}")
    summary = payload.get("summary")
    if not isinstance(summary, str):
        raise ExternalSummarizerError(f"response for {request_id!r} carries no summary string")
    return tokenize(summary)


class SummarizerPool:
    """Dispatches parts round-robin over N workers, one in-flight request each.

    With kind='external' each worker is its own child process; with
    kind='lead_k' workers are a formality and results are computed in-process.
    Results are returned in part order regardless of completion order, and the
    lowest-indexed failure wins when several parts fail, so outcomes are
    independent of the pool size.
    """

    def __init__(self, spec: SummarizerSpec, size: int = 1):
        check_positive_int(size, "size")
        self.spec = spec
        self.size = size
        self._workers: list[ExternalSummarizer] = []
        if spec.kind == "external":
            self._workers = [ExternalSummarizer(spec) for _ in range(size)]

    def summarize_parts(self, parts: Sequence[Sequence[str]], ids: Sequence[str]) -> list[TokenSeq]:
        if len(parts) != len(ids):
            raise ValueError("parts and ids must have equal length")
        if self.spec.kind == "lead_k":
            for part in parts:
                _check_part(part, self.spec)
            return [lead_k(p, self.spec.k) for p in parts]

        if not parts:
            return []
        results: list[TokenSeq | None] = [None] * len(parts)
        failures: list[tuple[int, Exception]] = []
        lock = threading.Lock()

        def run_worker(worker_idx: int) -> None:
            worker = self._workers[worker_idx]
            for i in range(worker_idx, len(parts), self.size):
                try:
                    results[i] = worker.summarize(parts[i], request_id=ids[i])
                except Exception as exc:  # noqa: BLE001 - reported per part below
                    with lock:
                        failures.append((i, exc))
                    return

        if self.size == 1:
            run_worker(0)
        else:
            with ThreadPoolExecutor(max_workers=self.size) as pool:
                list(pool.map(run_worker, range(min(self.size, len(parts)))))
        if failures:
            index, exc = min(failures, key=lambda item: item[0])
            raise ExternalSummarizerError(
                f"summarization failed for part {ids[index]!r}: {exc}"
            ) from exc
        return [r if r is not None else _missing(ids[i]) for i, r in enumerate(results)]

    def close(self) -> None:
        for worker in self._workers:
            worker.close()

    def __enter__(self) -> "SummarizerPool":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def _missing(request_id: str) -> TokenSeq:
    raise ExternalSummarizerError(f"no response recorded for part {request_id!r}")


def summarize(part: Sequence[str], spec: SummarizerSpec, *, request_id: str = "part#0") -> TokenSeq:
    """Summarize one part per the spec.

    lead_k returns the part's first k tokens; external spawns the configured
    process for a single request (drivers that summarize many parts should
    hold a :class:`SummarizerPool` instead).
    """
    _check_part(part, spec)
    if spec.kind == "lead_k":
        return lead_k(part, spec.k)
    with ExternalSummarizer(spec) as worker:
        return worker.summarize(part, request_id=request_id)
