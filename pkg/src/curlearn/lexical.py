"""Native lexical complexity indices.

Everything here works on a deterministic whitespace-free tokenization:
lowercase, split at any non-alphanumeric character, with apostrophes kept
when they sit inside a word so contractions survive as single tokens.
Ratios whose denominator is empty are defined as 0 rather than raised.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .corpus import Dataset, IndexMatrix, concatenate_pair_indices
from .errors import ArgumentError, ParseError, UnsupportedInputError, ValidationError

COARSE_TAGS = ("NOUN", "VERB", "ADJ", "ADV", "OTHER")
LEXICAL_TAGS = frozenset({"NOUN", "VERB", "ADJ", "ADV"})

_TOKEN_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)*", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens; contractions like "don't" stay whole."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class TokenizedText:
    tokens: tuple[str, ...]
    tags: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.tags is not None:
            if len(self.tags) != len(self.tokens):
                raise ValidationError(
                    f"{len(self.tokens)} tokens but {len(self.tags)} tags"
                )
            bad = [t for t in self.tags if t not in COARSE_TAGS]
            if bad:
                raise ValidationError(
                    f"unknown tag {bad[0]!r}; expected one of {COARSE_TAGS}"
                )

    @classmethod
    def from_text(cls, text: str) -> "TokenizedText":
        return cls(tokens=tuple(tokenize(text)))


@dataclass(frozen=True)
class TtrRecord:
    ttr: float
    root_ttr: float
    corrected_ttr: float
    log_ttr: float
    msttr: float


def ttr_family(tokens: list[str] | tuple[str, ...], k_segment: int = 50) -> TtrRecord:
    """Type-token ratio and its root/corrected/log/segmented variants.

    msttr averages the plain ratio over consecutive disjoint windows of
    ``k_segment`` tokens, dropping a final partial window; with no full
    window it falls back to the whole-text ratio.  Empty input yields all
    zeros; a single token defines log_ttr as 1.
    """
    if k_segment < 1:
        raise ArgumentError("k_segment must be a positive integer")
    n = len(tokens)
    if n == 0:
        return TtrRecord(0.0, 0.0, 0.0, 0.0, 0.0)
    u = len(set(tokens))
    ttr = u / n
    root = u / math.sqrt(n)
    corrected = u / math.sqrt(2 * n)
    if n == 1:
        log_ttr = 1.0
    else:
        log_ttr = math.log(u) / math.log(n)
    segments = [tokens[i : i + k_segment] for i in range(0, n - k_segment + 1, k_segment)]
    if segments:
        msttr = sum(len(set(seg)) / len(seg) for seg in segments) / len(segments)
    else:
        msttr = ttr
    return TtrRecord(ttr, root, corrected, log_ttr, msttr)


@dataclass(frozen=True)
class FrequencyList:
    """A ranked word list; words past the first ``cutoff`` count as rare."""

    ranked_words: tuple[str, ...]
    cutoff: int = 2000
    _top: frozenset[str] = field(init=False, repr=False, compare=False, default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if len(set(self.ranked_words)) != len(self.ranked_words):
            raise ValidationError("frequency list contains duplicate words")
        if self.cutoff < 1:
            raise ArgumentError("frequency cutoff must be positive")
        if self.cutoff > len(self.ranked_words):
            raise ArgumentError(
                f"cutoff {self.cutoff} exceeds list length {len(self.ranked_words)}"
            )
        object.__setattr__(self, "_top", frozenset(self.ranked_words[: self.cutoff]))

    def is_common(self, token: str) -> bool:
        return token in self._top


def load_frequency_list(path: str, cutoff: int = 2000) -> FrequencyList:
    """Read a one-word-per-line list ordered most frequent first."""
    words = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word:
                words.append(word)
    return FrequencyList(ranked_words=tuple(words), cutoff=cutoff)


@dataclass(frozen=True)
class SophisticationRecord:
    unique_words: int
    unique_sophisticated: int
    total_sophisticated: int
    lexical_sophistication_total: float
    lexical_sophistication_unique: float
    unique_in_first_k: int


def sophistication_counts(
    tokens: list[str] | tuple[str, ...],
    freq: FrequencyList,
    first_k: int = 50,
) -> SophisticationRecord:
    """Counts of words falling outside the common-word cutoff.

    ``unique_in_first_k`` is the number of distinct words among the first
    ``first_k`` tokens, a cheap proxy for early lexical variety.
    """
    if first_k < 1:
        raise ArgumentError("first_k must be a positive integer")
    n = len(tokens)
    uniq = set(tokens)
    u = len(uniq)
    total_soph = sum(1 for tok in tokens if not freq.is_common(tok))
    unique_soph = sum(1 for tok in uniq if not freq.is_common(tok))
    ls_total = total_soph / n if n else 0.0
    ls_unique = unique_soph / u if u else 0.0
    first = len(set(tokens[:first_k]))
    return SophisticationRecord(
        unique_words=u,
        unique_sophisticated=unique_soph,
        total_sophisticated=total_soph,
        lexical_sophistication_total=ls_total,
        lexical_sophistication_unique=ls_unique,
        unique_in_first_k=first,
    )


@dataclass(frozen=True)
class PosRecord:
    noun_variation: float
    adjective_variation: float
    adverb_variation: float
    verb_variation_unique: float
    verbs_per_token: float
    nouns_per_verb: float
    adverbs_per_sentence_proxy: float


def pos_indices(text: TokenizedText) -> PosRecord:
    """Tag-dependent variation and density measures.

    Variation scores divide unique words of one tag by the count of all
    lexical words (nouns, verbs, adjectives, adverbs); verb variation
    instead divides by the verb count.  Each sample is treated as a single
    sentence, so the per-sentence adverb figure is simply the adverb count.
    """
    if text.tags is None:
        raise UnsupportedInputError(
            "tags are required for noun/adjective/adverb/verb variation, "
            "verbs_per_token, nouns_per_verb and adverbs_per_sentence_proxy"
        )
    n = len(text.tokens)
    by_tag: dict[str, list[str]] = {tag: [] for tag in COARSE_TAGS}
    for tok, tag in zip(text.tokens, text.tags):
        by_tag[tag].append(tok)
    lexical_total = sum(len(by_tag[t]) for t in LEXICAL_TAGS)
    verbs = by_tag["VERB"]
    nouns = by_tag["NOUN"]

    def variation(words: list[str]) -> float:
        return len(set(words)) / lexical_total if lexical_total else 0.0

    return PosRecord(
        noun_variation=variation(nouns),
        adjective_variation=variation(by_tag["ADJ"]),
        adverb_variation=variation(by_tag["ADV"]),
        verb_variation_unique=len(set(verbs)) / len(verbs) if verbs else 0.0,
        verbs_per_token=len(verbs) / n if n else 0.0,
        nouns_per_verb=len(nouns) / max(len(verbs), 1),
        adverbs_per_sentence_proxy=float(len(by_tag["ADV"])),
    )


@dataclass(frozen=True)
class LexicalOptions:
    msttr_segment: int = 50
    first_k: int = 50


TOKEN_ONLY_COLUMNS = (
    "ttr",
    "root_ttr",
    "corrected_ttr",
    "log_ttr",
    "msttr",
    "unique_words",
    "unique_words_in_first_k",
)
SOPHISTICATION_COLUMNS = (
    "unique_sophisticated_words",
    "total_sophisticated_words",
    "lexical_sophistication_total",
    "lexical_sophistication_unique",
)
TAG_COLUMNS = (
    "noun_variation",
    "adjective_variation",
    "adverb_variation",
    "verb_variation",
    "verbs_per_token",
    "nouns_per_verb",
    "adverbs_per_sentence",
)


def _text_row(
    text: TokenizedText,
    freq: FrequencyList | None,
    opts: LexicalOptions,
) -> list[float]:
    tokens = text.tokens
    t = ttr_family(tokens, opts.msttr_segment)
    uniq = set(tokens)
    row = [
        t.ttr,
        t.root_ttr,
        t.corrected_ttr,
        t.log_ttr,
        t.msttr,
        float(len(uniq)),
        float(len(set(tokens[: opts.first_k]))),
    ]
    if freq is not None:
        s = sophistication_counts(tokens, freq, opts.first_k)
        row += [
            float(s.unique_sophisticated),
            float(s.total_sophisticated),
            s.lexical_sophistication_total,
            s.lexical_sophistication_unique,
        ]
    if text.tags is not None:
        p = pos_indices(text)
        row += [
            p.noun_variation,
            p.adjective_variation,
            p.adverb_variation,
            p.verb_variation_unique,
            p.verbs_per_token,
            p.nouns_per_verb,
            p.adverbs_per_sentence_proxy,
        ]
    return row


def compute_index_matrix(
    dataset: Dataset,
    freq: FrequencyList | None = None,
    tags: dict[str, tuple[TokenizedText, TokenizedText | None]] | None = None,
    opts: LexicalOptions = LexicalOptions(),
) -> IndexMatrix:
    """Compute the native indices for every sample, in dataset order.

    Sophistication columns appear only when a frequency list is given, and
    tag-dependent columns only when a tagged file covers every sample.  On
    a pair task both texts are scored and the two blocks are joined with
    the usual (P)/(H) column suffixes; a sample without a second text
    contributes zeros to the (H) block.
    """
    names = list(TOKEN_ONLY_COLUMNS)
    if freq is not None:
        names += list(SOPHISTICATION_COLUMNS)
    if tags is not None:
        missing = [s.id for s in dataset.all_samples if s.id not in tags]
        if missing:
            raise UnsupportedInputError(
                f"tagged file covers {len(dataset) - len(missing)} of "
                f"{len(dataset)} samples (first missing: {missing[0]!r})"
            )
        names += list(TAG_COLUMNS)

    def tokenized(sample_id: str, text: str, pair_side: bool) -> TokenizedText:
        if tags is not None:
            primary, secondary = tags[sample_id]
            tt = secondary if pair_side else primary
            if tt is None:
                raise UnsupportedInputError(
                    f"sample {sample_id!r} has a second text but no pair tags"
                )
            return tt
        return TokenizedText.from_text(text)

    first_rows = []
    for s in dataset.all_samples:
        first_rows.append(_text_row(tokenized(s.id, s.text, False), freq, opts))
    first = IndexMatrix(
        sample_ids=dataset.all_ids,
        index_names=names,
        values=np.array(first_rows, dtype=np.float64),
    )
    if not dataset.has_pairs:
        return first
    second_rows = []
    for s in dataset.all_samples:
        if s.text_pair is None:
            second_rows.append([0.0] * len(names))
        else:
            second_rows.append(_text_row(tokenized(s.id, s.text_pair, True), freq, opts))
    second = IndexMatrix(
        sample_ids=dataset.all_ids,
        index_names=names,
        values=np.array(second_rows, dtype=np.float64),
    )
    return concatenate_pair_indices(first, second)


def load_tagged(
    path: str,
) -> dict[str, tuple[TokenizedText, TokenizedText | None]]:
    """Read a tagged JSONL file: id, tokens, tags, optional *_pair fields."""

    def as_str_list(rec: dict, key: str, lineno: int) -> tuple[str, ...]:
        val = rec[key]
        if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
            raise ParseError(f"{path}:{lineno}: {key!r} must be a list of strings")
        return tuple(val)

    out: dict[str, tuple[TokenizedText, TokenizedText | None]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            for key in ("id", "tokens", "tags"):
                if key not in rec:
                    raise ParseError(f"{path}:{lineno}: missing field {key!r}")
            sid = rec["id"]
            if not isinstance(sid, str):
                raise ParseError(f"{path}:{lineno}: 'id' must be a string")
            if sid in out:
                raise ValidationError(f"{path}:{lineno}: duplicate id {sid!r}")
            try:
                primary = TokenizedText(
                    tokens=as_str_list(rec, "tokens", lineno),
                    tags=as_str_list(rec, "tags", lineno),
                )
                secondary = None
                if "tokens_pair" in rec or "tags_pair" in rec:
                    secondary = TokenizedText(
                        tokens=as_str_list(rec, "tokens_pair", lineno),
                        tags=as_str_list(rec, "tags_pair", lineno),
                    )
            except ValidationError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from None
            out[sid] = (primary, secondary)
    return out
