"""Tokenization and sentence segmentation.

Word tokens are lowercase runs of letters and digits, with apostrophes
kept when they sit inside a word, so contractions stay whole.  Sentences
are split at runs of terminal punctuation; text without any terminator
counts as a single sentence.
"""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)*", re.UNICODE)
_SENTENCE_RE = re.compile(r"[.!?;]+")


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens; "don't" stays a single token."""
    return _TOKEN_RE.findall(text.lower())


def split_sentences(text: str) -> list[str]:
    """Raw sentence strings, empty pieces dropped."""
    return [piece for piece in _SENTENCE_RE.split(text) if piece.strip()]


def sentence_tokens(text: str) -> list[list[str]]:
    """Token lists per sentence; drops sentences with no word tokens."""
    out = []
    for piece in split_sentences(text):
        toks = tokenize(piece)
        if toks:
            out.append(toks)
    return out
