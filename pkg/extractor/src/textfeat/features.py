"""The feature registry: 241 columns per text, in frozen emission order.

Families are declared as (names, compute) pairs; the module-level COLUMNS
tuple concatenates their names and is the single source of truth for the
CSV header and the manifest.  Every feature is a deterministic function
of the text alone; ratios with an empty denominator are defined as 0.

The first 18 columns mirror the token-level inventory that downstream
training code computes natively (TTR family, sophistication counts, and
coarse-tag variation scores) with identical formulas, so the two
implementations can be cross-checked on shared inputs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .tagger import TAGS, tag_tokens
from .tokens import sentence_tokens, tokenize
from .wordlist import COMMON_WORDS, FUNCTION_WORDS, WORD_RANK

MSTTR_SEGMENT = 50
FIRST_K = 50
MATTR_WINDOW = 25

_VOWEL_RUNS = re.compile(r"[aeiouy]+")

_COORDINATORS = frozenset({"and", "but", "or", "nor", "so", "yet"})
_SUBORDINATORS = frozenset(
    {
        "because", "although", "though", "while", "if", "when", "since",
        "unless", "until", "whether", "whereas", "after", "before", "that",
        "which", "who",
    }
)
_DETERMINERS = frozenset(
    {
        "the", "a", "an", "this", "that", "these", "those", "each", "every",
        "some", "any", "no", "all", "both",
    }
)
_PREPOSITIONS = frozenset(
    {
        "of", "in", "to", "for", "with", "on", "at", "by", "from", "up",
        "about", "into", "over", "after", "under", "between", "through",
        "during", "before", "above", "below", "around", "near", "without",
        "within", "along", "across", "behind", "beyond", "upon", "against",
        "among",
    }
)
_PRONOUNS = frozenset(
    {
        "i", "you", "he", "she", "it", "we", "they", "me", "him", "her",
        "us", "them", "mine", "yours", "hers", "ours", "theirs", "myself",
        "yourself", "himself", "herself", "itself", "ourselves", "themselves",
        "who", "whom", "whose",
    }
)
_NEGATIONS = frozenset(
    {"not", "no", "never", "nothing", "nobody", "none", "neither", "nor", "cannot"}
)
_CONNECTIVES = frozenset(
    {
        "however", "therefore", "moreover", "furthermore", "consequently",
        "meanwhile", "nevertheless", "thus", "hence", "also", "then",
        "finally", "first", "second", "next",
    }
)
_BE_FORMS = frozenset({"be", "am", "is", "are", "was", "were", "been", "being"})


def _div(a: float, b: float) -> float:
    return a / b if b else 0.0


def _entropy(counts) -> float:
    total = sum(counts)
    if total == 0:
        return 0.0
    return -sum((c / total) * math.log2(c / total) for c in counts if c)


def _syllables(token: str) -> int:
    return max(1, len(_VOWEL_RUNS.findall(token)))


@dataclass(frozen=True)
class TextContext:
    """Everything the feature families read, computed once per text."""

    text: str
    tokens: list[str]
    tags: list[str]
    sentences: list[list[str]]

    @classmethod
    def from_text(cls, text: str) -> "TextContext":
        tokens = tokenize(text)
        return cls(
            text=text,
            tokens=tokens,
            tags=tag_tokens(tokens),
            sentences=sentence_tokens(text),
        )


# ---------------------------------------------------------------------------
# native token-level block (formulas shared with the training side)


def _ttr_parts(tokens: list[str]):
    n = len(tokens)
    if n == 0:
        return 0.0, 0.0, 0.0, 0.0, 0.0
    u = len(set(tokens))
    ttr = u / n
    root = u / math.sqrt(n)
    corrected = u / math.sqrt(2 * n)
    log_ttr = 1.0 if n == 1 else math.log(u) / math.log(n)
    segments = [
        tokens[i : i + MSTTR_SEGMENT]
        for i in range(0, n - MSTTR_SEGMENT + 1, MSTTR_SEGMENT)
    ]
    if segments:
        msttr = sum(len(set(seg)) / len(seg) for seg in segments) / len(segments)
    else:
        msttr = ttr
    return ttr, root, corrected, log_ttr, msttr


_NATIVE_TOKEN_NAMES = (
    "ttr",
    "root_ttr",
    "corrected_ttr",
    "log_ttr",
    "msttr",
    "unique_words",
    "unique_words_in_first_k",
)


def _native_token(ctx: TextContext) -> list[float]:
    ttr, root, corrected, log_ttr, msttr = _ttr_parts(ctx.tokens)
    return [
        ttr,
        root,
        corrected,
        log_ttr,
        msttr,
        float(len(set(ctx.tokens))),
        float(len(set(ctx.tokens[:FIRST_K]))),
    ]


_NATIVE_SOPH_NAMES = (
    "unique_sophisticated_words",
    "total_sophisticated_words",
    "lexical_sophistication_total",
    "lexical_sophistication_unique",
)


def _native_soph(ctx: TextContext) -> list[float]:
    n = len(ctx.tokens)
    uniq = set(ctx.tokens)
    total_soph = sum(1 for tok in ctx.tokens if tok not in COMMON_WORDS)
    unique_soph = sum(1 for tok in uniq if tok not in COMMON_WORDS)
    return [
        float(unique_soph),
        float(total_soph),
        total_soph / n if n else 0.0,
        unique_soph / len(uniq) if uniq else 0.0,
    ]


_NATIVE_TAG_NAMES = (
    "noun_variation",
    "adjective_variation",
    "adverb_variation",
    "verb_variation",
    "verbs_per_token",
    "nouns_per_verb",
    "adverbs_per_sentence",
)


def _native_tag(ctx: TextContext) -> list[float]:
    by_tag: dict[str, list[str]] = {tag: [] for tag in TAGS}
    for tok, tag in zip(ctx.tokens, ctx.tags):
        by_tag[tag].append(tok)
    lexical_total = sum(
        len(by_tag[t]) for t in ("NOUN", "VERB", "ADJ", "ADV")
    )
    verbs = by_tag["VERB"]
    nouns = by_tag["NOUN"]
    n = len(ctx.tokens)

    def variation(words: list[str]) -> float:
        return len(set(words)) / lexical_total if lexical_total else 0.0

    return [
        variation(nouns),
        variation(by_tag["ADJ"]),
        variation(by_tag["ADV"]),
        len(set(verbs)) / len(verbs) if verbs else 0.0,
        len(verbs) / n if n else 0.0,
        len(nouns) / max(len(verbs), 1),
        float(len(by_tag["ADV"])),
    ]


# ---------------------------------------------------------------------------
# shape and distribution families


_SHAPE_NAMES = (
    "n_tokens",
    "n_characters",
    "n_sentences",
    "mean_sentence_length",
    "std_sentence_length",
    "max_sentence_length",
    "min_sentence_length",
    "mean_word_length",
    "std_word_length",
    "max_word_length",
)


def _shape(ctx: TextContext) -> list[float]:
    sent_lens = [len(s) for s in ctx.sentences]
    word_lens = [len(t) for t in ctx.tokens]
    return [
        float(len(ctx.tokens)),
        float(len(ctx.text)),
        float(len(ctx.sentences)),
        float(np.mean(sent_lens)) if sent_lens else 0.0,
        float(np.std(sent_lens)) if sent_lens else 0.0,
        float(max(sent_lens)) if sent_lens else 0.0,
        float(min(sent_lens)) if sent_lens else 0.0,
        float(np.mean(word_lens)) if word_lens else 0.0,
        float(np.std(word_lens)) if word_lens else 0.0,
        float(max(word_lens)) if word_lens else 0.0,
    ]


_WORD_LEN_NAMES = tuple(f"prop_word_len_{k:02d}" for k in range(1, 15)) + (
    "prop_word_len_15_plus",
)


def _word_len_hist(ctx: TextContext) -> list[float]:
    n = len(ctx.tokens)
    out = []
    for k in range(1, 15):
        out.append(_div(sum(1 for t in ctx.tokens if len(t) == k), n))
    out.append(_div(sum(1 for t in ctx.tokens if len(t) >= 15), n))
    return out


_LETTER_NAMES = tuple(f"prop_letter_{c}" for c in "abcdefghijklmnopqrstuvwxyz")


def _letters(ctx: TextContext) -> list[float]:
    lowered = ctx.text.lower()
    counts = {c: 0 for c in "abcdefghijklmnopqrstuvwxyz"}
    total = 0
    for ch in lowered:
        if ch in counts:
            counts[ch] += 1
            total += 1
    return [_div(counts[c], total) for c in "abcdefghijklmnopqrstuvwxyz"]


_CHAR_CLASS_NAMES = (
    "prop_alpha_chars",
    "prop_digit_chars",
    "prop_space_chars",
    "prop_punct_chars",
    "prop_upper_words",
    "prop_title_words",
    "digits_per_token",
    "punct_per_sentence",
)


def _char_classes(ctx: TextContext) -> list[float]:
    n_chars = len(ctx.text)
    alpha = sum(1 for c in ctx.text if c.isalpha())
    digit = sum(1 for c in ctx.text if c.isdigit())
    space = sum(1 for c in ctx.text if c.isspace())
    punct = n_chars - alpha - digit - space
    raw_words = ctx.text.split()
    upper = sum(1 for w in raw_words if w.isupper())
    title = sum(1 for w in raw_words if w.istitle())
    return [
        _div(alpha, n_chars),
        _div(digit, n_chars),
        _div(space, n_chars),
        _div(punct, n_chars),
        _div(upper, len(raw_words)),
        _div(title, len(raw_words)),
        _div(digit, len(ctx.tokens)),
        _div(punct, len(ctx.sentences)),
    ]


_FREQ_BAND_NAMES = (
    "prop_freq_rank_001_050",
    "prop_freq_rank_051_100",
    "prop_freq_rank_101_150",
    "prop_freq_rank_151_200",
    "prop_freq_rank_201_250",
    "prop_freq_rank_251_300",
    "prop_in_freq_list",
    "prop_out_of_freq_list",
    "mean_freq_rank",
    "median_freq_rank",
    "mean_log_freq_rank",
    "std_log_freq_rank",
)


def _freq_bands(ctx: TextContext) -> list[float]:
    n = len(ctx.tokens)
    ranks = [WORD_RANK[t] for t in ctx.tokens if t in WORD_RANK]
    bands = [0] * 6
    for r in ranks:
        bands[(r - 1) // 50] += 1
    out = [_div(b, n) for b in bands]
    out.append(_div(len(ranks), n))
    out.append(_div(n - len(ranks), n))
    if ranks:
        logs = np.log(np.array(ranks, dtype=np.float64))
        out += [
            float(np.mean(ranks)),
            float(np.median(ranks)),
            float(np.mean(logs)),
            float(np.std(logs)),
        ]
    else:
        out += [0.0, 0.0, 0.0, 0.0]
    return out


_FW_NAMES = tuple(f"fw_rate_{w}" for w in FUNCTION_WORDS)


def _fw_rates(ctx: TextContext) -> list[float]:
    n = len(ctx.tokens)
    if n == 0:
        return [0.0] * len(FUNCTION_WORDS)
    counts: dict[str, int] = {}
    for tok in ctx.tokens:
        counts[tok] = counts.get(tok, 0) + 1
    return [100.0 * counts.get(w, 0) / n for w in FUNCTION_WORDS]


_POS_STAT_NAMES = (
    "nouns_per_token",
    "adjectives_per_token",
    "adverbs_per_token",
    "others_per_token",
    "lexical_density",
    "nouns_per_sentence",
    "verbs_per_sentence",
    "adjectives_per_sentence",
    "others_per_sentence",
    "lexical_per_sentence",
    "unique_nouns",
    "unique_verbs",
    "unique_adjectives",
    "unique_adverbs",
    "noun_ttr",
)


def _pos_stats(ctx: TextContext) -> list[float]:
    n = len(ctx.tokens)
    n_sent = len(ctx.sentences)
    by_tag: dict[str, list[str]] = {tag: [] for tag in TAGS}
    for tok, tag in zip(ctx.tokens, ctx.tags):
        by_tag[tag].append(tok)
    lexical = sum(len(by_tag[t]) for t in ("NOUN", "VERB", "ADJ", "ADV"))
    nouns = by_tag["NOUN"]
    return [
        _div(len(nouns), n),
        _div(len(by_tag["ADJ"]), n),
        _div(len(by_tag["ADV"]), n),
        _div(len(by_tag["OTHER"]), n),
        _div(lexical, n),
        _div(len(nouns), n_sent),
        _div(len(by_tag["VERB"]), n_sent),
        _div(len(by_tag["ADJ"]), n_sent),
        _div(len(by_tag["OTHER"]), n_sent),
        _div(lexical, n_sent),
        float(len(set(nouns))),
        float(len(set(by_tag["VERB"]))),
        float(len(set(by_tag["ADJ"]))),
        float(len(set(by_tag["ADV"]))),
        _div(len(set(nouns)), len(nouns)),
    ]


_POS_BIGRAM_NAMES = tuple(
    f"pos_bigram_{a.lower()}_{b.lower()}" for a in TAGS for b in TAGS
)


def _pos_bigrams(ctx: TextContext) -> list[float]:
    total = len(ctx.tags) - 1
    counts = {(a, b): 0 for a in TAGS for b in TAGS}
    for a, b in zip(ctx.tags, ctx.tags[1:]):
        counts[(a, b)] += 1
    return [_div(counts[(a, b)], total) for a in TAGS for b in TAGS]


_DIVERSITY_NAMES = (
    "hapax_proportion",
    "dis_legomena_proportion",
    "yule_k",
    "simpson_d",
    "maas_a2",
    "mattr_25",
    "sichel_s",
    "brunet_w",
    "token_entropy",
    "normalized_token_entropy",
)


def _diversity(ctx: TextContext) -> list[float]:
    tokens = ctx.tokens
    n = len(tokens)
    freqs: dict[str, int] = {}
    for tok in tokens:
        freqs[tok] = freqs.get(tok, 0) + 1
    u = len(freqs)
    hapax = sum(1 for c in freqs.values() if c == 1)
    dis = sum(1 for c in freqs.values() if c == 2)
    spectrum: dict[int, int] = {}
    for c in freqs.values():
        spectrum[c] = spectrum.get(c, 0) + 1
    yule = (
        1e4 * (sum(m * m * v for m, v in spectrum.items()) - n) / (n * n)
        if n >= 2
        else 0.0
    )
    simpson = (
        sum(c * (c - 1) for c in freqs.values()) / (n * (n - 1)) if n >= 2 else 0.0
    )
    maas = (math.log(n) - math.log(u)) / (math.log(n) ** 2) if n > 1 else 0.0
    if n == 0:
        mattr = 0.0
    elif n <= MATTR_WINDOW:
        mattr = u / n
    else:
        windows = range(n - MATTR_WINDOW + 1)
        mattr = sum(
            len(set(tokens[i : i + MATTR_WINDOW])) / MATTR_WINDOW for i in windows
        ) / len(windows)
    sichel = _div(dis, u)
    brunet = n ** (u**-0.165) if n and u else 0.0
    ent = _entropy(freqs.values())
    norm_ent = ent / math.log2(u) if u > 1 else 0.0
    return [
        _div(hapax, u),
        _div(dis, u),
        yule,
        simpson,
        maas,
        mattr,
        sichel,
        brunet,
        ent,
        norm_ent,
    ]


_READABILITY_NAMES = (
    "mean_syllables_per_word",
    "prop_polysyllabic_words",
    "prop_monosyllabic_words",
    "flesch_reading_ease_proxy",
    "flesch_kincaid_grade_proxy",
    "gunning_fog_proxy",
    "smog_proxy",
    "automated_readability_proxy",
)


def _readability(ctx: TextContext) -> list[float]:
    n = len(ctx.tokens)
    n_sent = len(ctx.sentences)
    if n == 0 or n_sent == 0:
        return [0.0] * len(_READABILITY_NAMES)
    syls = [_syllables(t) for t in ctx.tokens]
    total_syl = sum(syls)
    poly = sum(1 for s in syls if s >= 3)
    mono = sum(1 for s in syls if s == 1)
    w_per_s = n / n_sent
    syl_per_w = total_syl / n
    chars_in_tokens = sum(len(t) for t in ctx.tokens)
    return [
        syl_per_w,
        poly / n,
        mono / n,
        206.835 - 1.015 * w_per_s - 84.6 * syl_per_w,
        0.39 * w_per_s + 11.8 * syl_per_w - 15.59,
        0.4 * (w_per_s + 100.0 * poly / n),
        1.043 * math.sqrt(poly * 30.0 / n_sent) + 3.1291,
        4.71 * chars_in_tokens / n + 0.5 * w_per_s - 21.43,
    ]


_SYNTAX_NAMES = (
    "clauses_per_sentence",
    "mean_clause_length",
    "t_units_per_sentence",
    "clauses_per_t_unit",
    "dependent_clauses_per_clause",
    "dependent_clauses_per_t_unit",
    "complex_t_unit_ratio",
    "coordinators_per_clause",
    "coordinators_per_t_unit",
    "subordinators_per_clause",
    "subordinators_per_sentence",
    "commas_per_sentence",
    "commas_per_token",
    "conjunctions_per_sentence",
    "pronouns_per_sentence",
    "determiners_per_sentence",
    "prepositions_per_sentence",
    "mean_t_unit_length",
    "verbs_per_t_unit",
    "passive_voice_rate_proxy",
)


def _syntax(ctx: TextContext) -> list[float]:
    """Clause and T-unit measures from a finite-verb counting heuristic.

    Each sentence contributes max(1, verb count) clauses; coordinators
    split clauses into T-units, and subordinators mark clauses dependent.
    """
    n = len(ctx.tokens)
    n_sent = len(ctx.sentences)
    clauses = t_units = dependents = complex_t = verbs_total = 0
    coord_total = subord_total = passives = 0
    for sent in ctx.sentences:
        tags = tag_tokens(sent)
        verbs = sum(1 for t in tags if t == "VERB")
        coord = sum(1 for tok in sent if tok in _COORDINATORS)
        subord = sum(1 for tok in sent if tok in _SUBORDINATORS)
        c = max(1, verbs)
        t_u = min(c, 1 + coord)
        dep = min(subord, c - 1) if c > 1 else 0
        clauses += c
        t_units += t_u
        dependents += dep
        complex_t += min(dep, t_u)
        verbs_total += verbs
        coord_total += coord
        subord_total += subord
        for i, tok in enumerate(sent):
            if tok in _BE_FORMS:
                window = sent[i + 1 : i + 3]
                if any(
                    len(w) >= 4 and w.endswith(("ed", "en")) for w in window
                ):
                    passives += 1
    commas = ctx.text.count(",")
    conjunctions = sum(
        1 for tok in ctx.tokens if tok in _COORDINATORS or tok in _SUBORDINATORS
    )
    pronouns = sum(1 for tok in ctx.tokens if tok in _PRONOUNS)
    determiners = sum(1 for tok in ctx.tokens if tok in _DETERMINERS)
    prepositions = sum(1 for tok in ctx.tokens if tok in _PREPOSITIONS)
    return [
        _div(clauses, n_sent),
        _div(n, clauses),
        _div(t_units, n_sent),
        _div(clauses, t_units),
        _div(dependents, clauses),
        _div(dependents, t_units),
        _div(complex_t, t_units),
        _div(coord_total, clauses),
        _div(coord_total, t_units),
        _div(subord_total, clauses),
        _div(subord_total, n_sent),
        _div(commas, n_sent),
        _div(commas, n),
        _div(conjunctions, n_sent),
        _div(pronouns, n_sent),
        _div(determiners, n_sent),
        _div(prepositions, n_sent),
        _div(n, t_units),
        _div(verbs_total, t_units),
        _div(passives, n_sent),
    ]


_CHAR_ENTROPY_NAMES = (
    "char_unigram_entropy",
    "char_bigram_entropy",
    "char_trigram_entropy",
)


def _char_entropy(ctx: TextContext) -> list[float]:
    chars = ctx.text.lower()
    out = []
    for size in (1, 2, 3):
        grams: dict[str, int] = {}
        for i in range(len(chars) - size + 1):
            g = chars[i : i + size]
            grams[g] = grams.get(g, 0) + 1
        out.append(_entropy(grams.values()))
    return out


_COHESION_NAMES = (
    "pronoun_rate",
    "definite_article_rate",
    "indefinite_article_rate",
    "negation_rate",
    "connective_rate",
    "adjacent_sentence_overlap_mean",
    "adjacent_content_overlap_mean",
    "first_sentence_length",
    "last_sentence_length",
    "question_sentence_ratio",
    "exclamation_sentence_ratio",
)


def _cohesion(ctx: TextContext) -> list[float]:
    n = len(ctx.tokens)
    n_sent = len(ctx.sentences)
    negations = sum(
        1 for tok in ctx.tokens if tok in _NEGATIONS or tok.endswith("n't")
    )

    def jaccard(a: set, b: set) -> float:
        union = a | b
        return len(a & b) / len(union) if union else 0.0

    overlaps = []
    content_overlaps = []
    for s1, s2 in zip(ctx.sentences, ctx.sentences[1:]):
        overlaps.append(jaccard(set(s1), set(s2)))
        t1 = {tok for tok, tag in zip(s1, tag_tokens(s1)) if tag != "OTHER"}
        t2 = {tok for tok, tag in zip(s2, tag_tokens(s2)) if tag != "OTHER"}
        content_overlaps.append(jaccard(t1, t2))
    return [
        _div(sum(1 for t in ctx.tokens if t in _PRONOUNS), n),
        _div(sum(1 for t in ctx.tokens if t == "the"), n),
        _div(sum(1 for t in ctx.tokens if t in ("a", "an")), n),
        _div(negations, n),
        _div(sum(1 for t in ctx.tokens if t in _CONNECTIVES), n),
        float(np.mean(overlaps)) if overlaps else 0.0,
        float(np.mean(content_overlaps)) if content_overlaps else 0.0,
        float(len(ctx.sentences[0])) if ctx.sentences else 0.0,
        float(len(ctx.sentences[-1])) if ctx.sentences else 0.0,
        _div(ctx.text.count("?"), n_sent),
        _div(ctx.text.count("!"), n_sent),
    ]


# ---------------------------------------------------------------------------
# registry assembly

FAMILIES = (
    (_NATIVE_TOKEN_NAMES, _native_token),
    (_NATIVE_SOPH_NAMES, _native_soph),
    (_NATIVE_TAG_NAMES, _native_tag),
    (_SHAPE_NAMES, _shape),
    (_WORD_LEN_NAMES, _word_len_hist),
    (_LETTER_NAMES, _letters),
    (_CHAR_CLASS_NAMES, _char_classes),
    (_FREQ_BAND_NAMES, _freq_bands),
    (_FW_NAMES, _fw_rates),
    (_POS_STAT_NAMES, _pos_stats),
    (_POS_BIGRAM_NAMES, _pos_bigrams),
    (_DIVERSITY_NAMES, _diversity),
    (_READABILITY_NAMES, _readability),
    (_SYNTAX_NAMES, _syntax),
    (_CHAR_ENTROPY_NAMES, _char_entropy),
    (_COHESION_NAMES, _cohesion),
)

COLUMNS: tuple[str, ...] = tuple(
    name for names, _ in FAMILIES for name in names
)
NATIVE_COLUMNS: tuple[str, ...] = (
    _NATIVE_TOKEN_NAMES + _NATIVE_SOPH_NAMES + _NATIVE_TAG_NAMES
)

if len(COLUMNS) != 241:
    raise AssertionError(f"registry defines {len(COLUMNS)} columns, expected 241")
if len(set(COLUMNS)) != len(COLUMNS):
    raise AssertionError("registry contains duplicate column names")


def compute_features(text: str) -> np.ndarray:
    """All 241 features for one text, in COLUMNS order."""
    ctx = TextContext.from_text(text)
    values: list[float] = []
    for names, fn in FAMILIES:
        block = fn(ctx)
        if len(block) != len(names):
            raise AssertionError(
                f"family {names[0]}... returned {len(block)} values for "
                f"{len(names)} names"
            )
        values.extend(block)
    return np.array(values, dtype=np.float64)
