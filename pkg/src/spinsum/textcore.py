"""Whitespace tokenization and the token-sequence type every stage consumes.

A token is a whitespace-delimited word. All lengths reported anywhere in the
pipeline (chunk sizes, corpus statistics, metric denominators) are counts of
these tokens.
"""

from __future__ import annotations

from typing import Sequence

# Ordered sequence of non-empty, whitespace-free word tokens.
TokenSeq = list[str]


def tokenize(text: str) -> TokenSeq:
    """Split on runs of unicode whitespace; no normalization, case preserved."""
    return text.split()


def detokenize(tokens: Sequence[str]) -> str:
    """Join tokens with single spaces. tokenize(detokenize(s)) == s for valid token lists."""
    return " ".join(tokens)
