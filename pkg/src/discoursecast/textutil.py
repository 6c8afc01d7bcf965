"""Tokenization helpers shared by corpus layering and the built-in adapters."""

from __future__ import annotations

import re
from functools import lru_cache

_TOKEN_RE = re.compile(r"[a-z0-9']+")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on whitespace/punctuation boundaries.

    Hashtags and other punctuation are stripped, so "#MeToo" and "MeToo"
    produce the same single token.
    """
    return _TOKEN_RE.findall(text.lower())


@lru_cache(maxsize=4096)
def _phrase_tokens(phrase: str) -> tuple[str, ...]:
    return tuple(tokenize(phrase))


def contains_phrase(tokens: list[str] | tuple[str, ...], phrase: str) -> bool:
    """True when the phrase occurs as a contiguous token run.

    Single-word phrases reduce to membership; multi-word keyphrases must
    match token-for-token in order.
    """
    needle = _phrase_tokens(phrase)
    if not needle:
        return False
    if len(needle) == 1:
        return needle[0] in tokens
    n = len(needle)
    for i in range(len(tokens) - n + 1):
        if tuple(tokens[i : i + n]) == needle:
            return True
    return False
