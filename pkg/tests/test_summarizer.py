from __future__ import annotations

import json
import random

import pytest

from spinsum.summarizer import (
    ExternalSummarizer,
    ExternalSummarizerError,
    SummarizerPool,
    SummarizerSpec,
    lead_k,
    summarize,
)
from spinsum.textcore import tokenize

from conftest import stub_command


def external_spec(*flags: str, timeout: float = 20.0, **kwargs) -> SummarizerSpec:
    return SummarizerSpec(kind="external", command=stub_command(*flags), timeout=timeout, **kwargs)


class TestSpec:
    def test_external_requires_command(self):
        with pytest.raises(ValueError, match="command"):
            SummarizerSpec(kind="external")

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="kind"):
            SummarizerSpec(kind="magic")

    def test_bad_k(self):
        with pytest.raises(ValueError):
            SummarizerSpec(k=0)

    def test_bad_timeout(self):
        with pytest.raises(ValueError, match="timeout"):
            SummarizerSpec(kind="external", command=("x",), timeout=0)


class TestLeadK:
    def test_prefix(self):
        assert lead_k(["a", "b", "c"], 2) == ["a", "b"]

    def test_shorter_than_k(self):
        assert lead_k(["a", "b"], 10) == ["a", "b"]

    def test_window_sized_part(self):
        part = [f"w{i}" for i in range(4096)]
        assert summarize(part, SummarizerSpec(kind="lead_k", k=128)) == part[:128]

    def test_prefix_property(self, rng):
        for _ in range(50):
            part = [f"w{rng.randrange(100)}" for _ in range(rng.randint(1, 300))]
            k = rng.randint(1, 200)
            out = lead_k(part, k)
            assert len(out) <= k
            assert out == part[: len(out)]

    def test_deterministic(self):
        spec = SummarizerSpec(kind="lead_k", k=3)
        part = ["a", "b", "c", "d"]
        assert summarize(part, spec) == summarize(part, spec)


class TestSummarizeContract:
    def test_empty_part_rejected(self):
        with pytest.raises(ValueError, match="empty part"):
            summarize([], SummarizerSpec())

    def test_oversized_part_rejected(self):
        spec = SummarizerSpec(max_input_tokens=4)
        with pytest.raises(ValueError, match="exceeds summarizer window"):
            summarize(["a"] * 5, spec)


class TestExternalProtocol:
    def test_echo_round_trip(self):
        part = tokenize("the quick brown fox jumps over the lazy dog")
        assert summarize(part, external_spec()) == part

    def test_round_trip_many_random_parts(self, rng):
        spec = external_spec()
        with ExternalSummarizer(spec) as worker:
            for i in range(30):
                part = [f"w{rng.randrange(50)}" for _ in range(rng.randint(1, 60))]
                assert worker.summarize(part, request_id=f"doc#{i}") == part

    def test_uppercase_transform_mode(self):
        with ExternalSummarizer(external_spec("--uppercase")) as worker:
            assert worker.summarize(["abc", "def"]) == ["ABC", "DEF"]

    def test_error_response_raises_with_message(self):
        # the stub reports an error for whitespace-only text
        with ExternalSummarizer(external_spec()) as worker:
            with pytest.raises(ExternalSummarizerError, match="empty text"):
                worker.summarize([" "])  # nbsp token detokenizes to blank-ish text

    def test_child_exit_fails_pending_request(self):
        with ExternalSummarizer(external_spec("--exit-after", "1")) as worker:
            assert worker.summarize(["a"], request_id="x#0") == ["a"]
            with pytest.raises(ExternalSummarizerError, match="exited before responding"):
                worker.summarize(["b"], request_id="x#1")

    def test_timeout_kills_and_raises(self):
        spec = external_spec("--sleep", "30", timeout=0.5)
        with ExternalSummarizer(spec) as worker:
            with pytest.raises(ExternalSummarizerError, match="timed out"):
                worker.summarize(["a"])

    def test_malformed_response_raises(self):
        with ExternalSummarizer(external_spec("--malformed")) as worker:
            with pytest.raises(ExternalSummarizerError, match="malformed response"):
                worker.summarize(["a"])

    def test_nonexistent_command(self):
        spec = SummarizerSpec(kind="external", command=("/nonexistent/summarizer",))
        with pytest.raises(OSError):
            ExternalSummarizer(spec)

    def test_request_wire_format(self):
        # drive the stub manually to pin the request schema
        import subprocess

        proc = subprocess.Popen(
            stub_command(), stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True
        )
        request = {"id": "d9#3", "text": "a b c", "max_tokens": 4096}
        proc.stdin.write(json.dumps(request) + "\n")
        proc.stdin.close()
        response = json.loads(proc.stdout.readline())
        proc.wait(timeout=10)
        assert response == {"id": "d9#3", "summary": "a b c"}


class TestPool:
    @pytest.mark.parametrize("size", [1, 3])
    def test_results_in_part_order(self, size, rng):
        parts = [[f"p{i}w{j}" for j in range(rng.randint(1, 20))] for i in range(7)]
        ids = [f"d#{i}" for i in range(7)]
        with SummarizerPool(external_spec(), size=size) as pool:
            assert pool.summarize_parts(parts, ids) == parts

    def test_serial_equals_parallel(self, rng):
        parts = [[f"p{i}w{j}" for j in range(rng.randint(1, 30))] for i in range(9)]
        ids = [f"d#{i}" for i in range(9)]
        with SummarizerPool(external_spec(), size=1) as serial:
            serial_out = serial.summarize_parts(parts, ids)
        with SummarizerPool(external_spec(), size=4) as parallel:
            parallel_out = parallel.summarize_parts(parts, ids)
        assert serial_out == parallel_out

    def test_lowest_failing_part_reported(self):
        # parts 1 and 3 produce error responses (whitespace-only text)
        parts = [["a"], [" "], ["c"], [" "], ["e"]]
        ids = [f"d#{i}" for i in range(5)]
        with SummarizerPool(external_spec(), size=2) as pool:
            with pytest.raises(ExternalSummarizerError, match=r"d#1"):
                pool.summarize_parts(parts, ids)

    def test_lead_pool_checks_window(self):
        spec = SummarizerSpec(kind="lead_k", k=2, max_input_tokens=3)
        with SummarizerPool(spec) as pool:
            with pytest.raises(ValueError, match="exceeds summarizer window"):
                pool.summarize_parts([["a"] * 4], ["d#0"])

    def test_empty_parts(self):
        with SummarizerPool(SummarizerSpec(kind="lead_k")) as pool:
            assert pool.summarize_parts([], []) == []
