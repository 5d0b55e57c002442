"""Tokenization, the TTR family, sophistication counts, and tag measures."""

import math

import numpy as np
import pytest

from curlearn import (
    ArgumentError,
    Dataset,
    FrequencyList,
    LexicalOptions,
    Sample,
    SOPHISTICATION_COLUMNS,
    TAG_COLUMNS,
    TOKEN_ONLY_COLUMNS,
    TokenizedText,
    UnsupportedInputError,
    ValidationError,
    compute_index_matrix,
    load_frequency_list,
    load_tagged,
    pos_indices,
    sophistication_counts,
    tokenize,
    ttr_family,
)


class TestTokenize:
    def test_lowercases_and_keeps_contractions(self):
        assert tokenize("Don't stop, it's fine-ish.") == [
            "don't",
            "stop",
            "it's",
            "fine",
            "ish",
        ]

    def test_underscores_and_digits(self):
        assert tokenize("snake_case 2nd x10") == ["snake", "case", "2nd", "x10"]

    def test_empty_and_punctuation_only(self):
        assert tokenize("") == []
        assert tokenize("... !! ??") == []


class TestTtrFamily:
    def test_hand_example(self):
        """Five tokens, three types: every variant has a closed form."""
        rec = ttr_family(["a", "b", "b", "a", "c"], k_segment=2)
        np.testing.assert_allclose(rec.ttr, 0.6)
        np.testing.assert_allclose(rec.root_ttr, 1.3416407864998738)
        np.testing.assert_allclose(rec.corrected_ttr, 0.9486832980505138)
        np.testing.assert_allclose(rec.log_ttr, 0.6826061944859854)
        # windows [a, b] and [b, a] are both all-distinct; the tail [c] drops
        np.testing.assert_allclose(rec.msttr, 1.0)

    def test_root_and_corrected_identities(self):
        """root = ttr * sqrt(N) and corrected = ttr * sqrt(N / 2)."""
        rng = np.random.default_rng(7)
        for _ in range(300):
            n = int(rng.integers(1, 120))
            tokens = [f"w{rng.integers(0, 30)}" for _ in range(n)]
            rec = ttr_family(tokens)
            np.testing.assert_allclose(rec.root_ttr, rec.ttr * math.sqrt(n), rtol=1e-12)
            np.testing.assert_allclose(
                rec.corrected_ttr, rec.ttr * math.sqrt(n / 2), rtol=1e-12
            )

    def test_empty_input_is_all_zero(self):
        rec = ttr_family([])
        assert (rec.ttr, rec.root_ttr, rec.corrected_ttr, rec.log_ttr, rec.msttr) == (
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
        )

    def test_single_token_log_convention(self):
        rec = ttr_family(["word"])
        assert rec.log_ttr == 1.0
        assert rec.ttr == 1.0

    def test_msttr_falls_back_without_a_full_window(self):
        rec = ttr_family(["a", "b", "a"], k_segment=10)
        np.testing.assert_allclose(rec.msttr, rec.ttr)

    def test_msttr_averages_disjoint_windows(self):
        # [a, a] -> 0.5 and [b, c] -> 1.0
        rec = ttr_family(["a", "a", "b", "c"], k_segment=2)
        np.testing.assert_allclose(rec.msttr, 0.75)

    def test_bad_segment_length(self):
        with pytest.raises(ArgumentError):
            ttr_family(["a"], k_segment=0)


class TestFrequencyList:
    def test_common_versus_rare(self):
        freq = FrequencyList(("the", "of", "cat"), cutoff=2)
        assert freq.is_common("the")
        assert not freq.is_common("cat")
        assert not freq.is_common("zyxt")

    def test_duplicate_words_rejected(self):
        with pytest.raises(ValidationError):
            FrequencyList(("a", "a"), cutoff=1)

    def test_cutoff_bounds(self):
        with pytest.raises(ArgumentError):
            FrequencyList(("a",), cutoff=0)
        with pytest.raises(ArgumentError):
            FrequencyList(("a",), cutoff=2)

    def test_load_skips_blank_lines(self, tmp_path):
        p = tmp_path / "freq.txt"
        p.write_text("the\n\nof\nand\n")
        freq = load_frequency_list(str(p), cutoff=2)
        assert freq.ranked_words == ("the", "of", "and")
        assert freq.is_common("of")
        assert not freq.is_common("and")


class TestSophistication:
    def test_hand_example(self):
        freq = FrequencyList(("the", "cat", "saw"), cutoff=3)
        rec = sophistication_counts(["the", "cat", "saw", "the", "zyx"], freq, first_k=3)
        assert rec.unique_words == 4
        assert rec.unique_sophisticated == 1
        assert rec.total_sophisticated == 1
        np.testing.assert_allclose(rec.lexical_sophistication_total, 0.2)
        np.testing.assert_allclose(rec.lexical_sophistication_unique, 0.25)
        assert rec.unique_in_first_k == 3

    def test_empty_tokens(self):
        freq = FrequencyList(("a",), cutoff=1)
        rec = sophistication_counts([], freq)
        assert rec.lexical_sophistication_total == 0.0
        assert rec.unique_in_first_k == 0

    def test_repeated_rare_words_count_once_in_unique(self):
        freq = FrequencyList(("a",), cutoff=1)
        rec = sophistication_counts(["q", "q", "q"], freq)
        assert rec.total_sophisticated == 3
        assert rec.unique_sophisticated == 1

    def test_first_k_validation(self):
        freq = FrequencyList(("a",), cutoff=1)
        with pytest.raises(ArgumentError):
            sophistication_counts(["a"], freq, first_k=0)


class TestPosIndices:
    def test_hand_example(self):
        text = TokenizedText(
            tokens=("the", "cat", "sat"), tags=("OTHER", "NOUN", "VERB")
        )
        rec = pos_indices(text)
        np.testing.assert_allclose(rec.noun_variation, 0.5)
        np.testing.assert_allclose(rec.verb_variation_unique, 1.0)
        np.testing.assert_allclose(rec.verbs_per_token, 1 / 3)
        np.testing.assert_allclose(rec.nouns_per_verb, 1.0)
        assert rec.adjective_variation == 0.0
        assert rec.adverbs_per_sentence_proxy == 0.0

    def test_nouns_per_verb_guard_without_verbs(self):
        text = TokenizedText(tokens=("cats", "dogs"), tags=("NOUN", "NOUN"))
        rec = pos_indices(text)
        np.testing.assert_allclose(rec.nouns_per_verb, 2.0)
        assert rec.verb_variation_unique == 0.0

    def test_requires_tags(self):
        with pytest.raises(UnsupportedInputError):
            pos_indices(TokenizedText(tokens=("a",)))

    def test_tag_validation(self):
        with pytest.raises(ValidationError):
            TokenizedText(tokens=("a",), tags=("NN",))
        with pytest.raises(ValidationError):
            TokenizedText(tokens=("a", "b"), tags=("NOUN",))


class TestComputeIndexMatrix:
    def dataset(self, pair=False):
        return Dataset(
            [
                Sample(
                    id="a",
                    text="the cat sat on the mat",
                    label=0,
                    split="train",
                    text_pair="a cat sat" if pair else None,
                ),
                Sample(id="b", text="dogs bark", label=1, split="test"),
            ]
        )

    def test_token_only_columns(self):
        m = compute_index_matrix(self.dataset())
        assert m.index_names == list(TOKEN_ONLY_COLUMNS)
        assert m.sample_ids == ["a", "b"]
        row = dict(zip(m.index_names, m.values[0]))
        np.testing.assert_allclose(row["ttr"], 5 / 6)
        np.testing.assert_allclose(row["unique_words"], 5.0)

    def test_sophistication_columns_require_frequency_list(self):
        freq = FrequencyList(("the", "cat", "on", "a"), cutoff=4)
        m = compute_index_matrix(self.dataset(), freq=freq)
        assert m.index_names == list(TOKEN_ONLY_COLUMNS) + list(SOPHISTICATION_COLUMNS)

    def test_tagged_columns_and_pair_suffixes(self):
        ds = self.dataset(pair=True)
        tags = {
            "a": (
                TokenizedText(
                    tokens=("the", "cat", "sat", "on", "the", "mat"),
                    tags=("OTHER", "NOUN", "VERB", "OTHER", "OTHER", "NOUN"),
                ),
                TokenizedText(
                    tokens=("a", "cat", "sat"), tags=("OTHER", "NOUN", "VERB")
                ),
            ),
            "b": (
                TokenizedText(tokens=("dogs", "bark"), tags=("NOUN", "VERB")),
                None,
            ),
        }
        m = compute_index_matrix(ds, tags=tags)
        base = list(TOKEN_ONLY_COLUMNS) + list(TAG_COLUMNS)
        assert m.index_names == [f"{n} (P)" for n in base] + [f"{n} (H)" for n in base]
        # sample b has no second text: its (H) block is all zeros
        half = len(base)
        np.testing.assert_array_equal(m.values[1, half:], 0.0)

    def test_tags_must_cover_every_sample(self):
        tags = {
            "a": (TokenizedText(tokens=("x",), tags=("NOUN",)), None),
        }
        with pytest.raises(UnsupportedInputError, match="'b'"):
            compute_index_matrix(self.dataset(), tags=tags)

    def test_load_tagged_round_trip(self, tmp_path):
        p = tmp_path / "tags.jsonl"
        p.write_text(
            '{"id": "a", "tokens": ["the", "cat"], "tags": ["OTHER", "NOUN"], '
            '"tokens_pair": ["sat"], "tags_pair": ["VERB"]}\n'
        )
        tagged = load_tagged(str(p))
        primary, secondary = tagged["a"]
        assert primary.tokens == ("the", "cat")
        assert secondary.tags == ("VERB",)

    def test_load_tagged_validates_inline(self, tmp_path):
        p = tmp_path / "tags.jsonl"
        p.write_text('{"id": "a", "tokens": ["x"], "tags": ["XX"]}\n')
        with pytest.raises(ValidationError, match=r":1:"):
            load_tagged(str(p))

    def test_options_control_window_sizes(self):
        ds = Dataset(
            [Sample(id="a", text="a a b c", label=0, split="train")]
        )
        m = compute_index_matrix(ds, opts=LexicalOptions(msttr_segment=2, first_k=2))
        row = dict(zip(m.index_names, m.values[0]))
        np.testing.assert_allclose(row["msttr"], 0.75)
        np.testing.assert_allclose(row["unique_words_in_first_k"], 1.0)
