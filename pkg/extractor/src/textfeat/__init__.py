"""textfeat: surface, lexical and syntactic feature extraction for text.

Computes a fixed registry of 241 real-valued features per text (482 on
pair tasks) plus per-token coarse part-of-speech tags, writing CSV and
JSONL files that downstream tools consume directly.
"""

__version__ = "0.1.0"

from .errors import ArgumentError, ParseError, TextfeatError, ValidationError
from .extract import TextSample, emit_tags, extract_full, read_dataset
from .features import COLUMNS, NATIVE_COLUMNS, TextContext, compute_features
from .tagger import TAGS, tag_token, tag_tokens
from .tokens import sentence_tokens, split_sentences, tokenize
from .wordlist import COMMON_WORDS, FREQ_CUTOFF, FUNCTION_WORDS, RANKED_WORDS

__all__ = [
    "ArgumentError",
    "COLUMNS",
    "COMMON_WORDS",
    "FREQ_CUTOFF",
    "FUNCTION_WORDS",
    "NATIVE_COLUMNS",
    "ParseError",
    "RANKED_WORDS",
    "TAGS",
    "TextContext",
    "TextSample",
    "TextfeatError",
    "ValidationError",
    "compute_features",
    "emit_tags",
    "extract_full",
    "read_dataset",
    "sentence_tokens",
    "split_sentences",
    "tag_token",
    "tag_tokens",
    "tokenize",
    "__version__",
]
