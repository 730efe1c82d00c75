"""Tokenization and sentence splitting used by embeddings, retrieval and labeling."""

import re

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_SENTENCE_RE = re.compile(r"(?<=[.!?])\s+|\n+")


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens (alphanumeric runs)."""
    return _TOKEN_RE.findall(text.lower())


def split_sentences(text: str) -> list[str]:
    """Split on sentence punctuation and newlines; drops empty fragments."""
    return [s.strip() for s in _SENTENCE_RE.split(text) if s.strip()]
