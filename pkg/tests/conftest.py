from __future__ import annotations

import json
import random
import subprocess
import sys
from pathlib import Path

import pytest

from spinsum.splitter import DocSummaryPair
from spinsum.textcore import detokenize

STUB_PATH = Path(__file__).parent / "stub_summarizer.py"


def stub_command(*flags: str) -> tuple[str, ...]:
    """Command line for the line-protocol stub child process."""
    return (sys.executable, str(STUB_PATH), *flags)


def make_corpus(
    rng: random.Random,
    n: int,
    doc_len: tuple[int, int] = (50, 12_000),
    sum_len: tuple[int, int] = (8, 60),
    vocab: int = 400,
) -> list[DocSummaryPair]:
    """Synthetic pairs with word-like tokens; fully determined by the rng."""
    pairs = []
    for i in range(n):
        dlen = rng.randint(*doc_len)
        slen = rng.randint(*sum_len)
        document = [f"w{rng.randrange(vocab)}" for _ in range(dlen)]
        summary = [f"w{rng.randrange(vocab)}" for _ in range(slen)]
        pairs.append(DocSummaryPair(f"doc{i:04d}", document, summary))
    return pairs


def write_corpus_file(path: Path, pairs: list[DocSummaryPair]) -> Path:
    with open(path, "w", encoding="utf-8") as out:
        for pair in pairs:
            out.write(
                json.dumps(
                    {
                        "id": pair.id,
                        "document": detokenize(pair.document),
                        "summary": detokenize(pair.summary),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    return path


def planted_pair(
    rng: random.Random, n_parts: int, chunk_size: int = 64, step: int = 5, pair_id: str = "planted"
) -> tuple[DocSummaryPair, list[list[str]]]:
    """Pair whose summary chunk i is a verbatim subsequence of document part i.

    Part vocabularies are disjoint across parts, so the greedy matcher has an
    unambiguous identity alignment. Returns the pair and the summary chunks in
    part order; the summary length is exactly step * n_parts.
    """
    assert chunk_size >= step >= 1
    document: list[str] = []
    chunks: list[list[str]] = []
    for part in range(n_parts):
        # last part is shorter so the document is not a multiple of chunk_size
        length = chunk_size if part < n_parts - 1 else rng.randint(step, chunk_size)
        tokens = [f"p{part}w{rng.randrange(50)}" for _ in range(length)]
        positions = sorted(rng.sample(range(length), step))
        document.extend(tokens)
        chunks.append([tokens[j] for j in positions])
    summary = [tok for chunk in chunks for tok in chunk]
    return DocSummaryPair(pair_id, document, summary), chunks


def run_protocol_conformance(
    command: tuple[str, ...], rng: random.Random, n_requests: int = 100
) -> list[dict]:
    """Drive an echo-mode summarizer through the wire protocol.

    Sends n_requests randomized request lines (one with empty text) and checks
    that exactly one response per request comes back, in order, with matching
    ids: non-empty texts echo back as the summary, the empty text yields an
    error response. Returns the parsed responses.
    """
    requests = []
    empty_index = rng.randrange(1, n_requests - 1)
    for i in range(n_requests):
        if i == empty_index:
            text = ""
        else:
            text = " ".join(f"w{rng.randrange(500)}" for _ in range(rng.randint(1, 40)))
        requests.append({"id": f"doc{i:03d}#{i % 7}", "text": text, "max_tokens": 4096})

    proc = subprocess.Popen(
        list(command),
        stdin=subprocess.PIPE,
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        text=True,
        encoding="utf-8",
    )
    stdin_payload = "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in requests)
    out, err = proc.communicate(stdin_payload, timeout=120)
    assert proc.returncode == 0, f"process exited {proc.returncode}; stderr:\n{err}"

    lines = [line for line in out.splitlines() if line.strip()]
    assert len(lines) == n_requests, f"expected {n_requests} response lines, got {len(lines)}"
    responses = [json.loads(line) for line in lines]
    for request, response in zip(requests, responses):
        assert response["id"] == request["id"]
        if request["text"].strip():
            assert response.get("summary") == request["text"]
            assert "error" not in response
        else:
            assert "error" in response
    return responses


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
