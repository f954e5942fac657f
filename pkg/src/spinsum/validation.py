"""Input validation helpers shared by the library surface, estimators and CLI."""

from __future__ import annotations

from typing import Any, Iterable, Sequence

from spinsum.textcore import TokenSeq, tokenize

VARIANTS = ("SPIN1", "SPIN2", "SPIN3")
SHORT_DOC_POLICIES = ("skip", "passthrough")


def check_positive_int(value: Any, name: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return value


def check_non_negative_int(value: Any, name: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {value!r}")
    return value


def check_choice(value: Any, name: str, choices: Sequence[str]) -> str:
    if value not in choices:
        raise ValueError(f"{name} must be one of {', '.join(choices)}; got {value!r}")
    return value


def normalize_variant(value: str) -> str:
    """Accept any casing of spin1/spin2/spin3 and return the canonical tag."""
    canonical = str(value).upper().replace(" ", "").replace("-", "").replace("_", "")
    return check_choice(canonical, "variant", VARIANTS)


def ensure_tokens(value: str | Iterable[str], name: str = "value") -> TokenSeq:
    """Coerce raw text or a token iterable into a validated token list.

    Strings are tokenized; iterables are checked against the token invariants
    (non-empty, no internal whitespace) and copied.
    """
    if isinstance(value, str):
        return tokenize(value)
    tokens = list(value)
    for tok in tokens:
        if not isinstance(tok, str) or not tok:
            raise ValueError(f"{name} contains an empty or non-string token: {tok!r}")
        if any(ch.isspace() for ch in tok):
            raise ValueError(f"{name} contains a token with internal whitespace: {tok!r}")
    return tokens
