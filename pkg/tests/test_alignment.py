"""Alignment TSV parsing, pos_class assignment, and round-trips."""

import pytest

from promkit.corpus.alignment import (
    AlignmentError,
    parse_alignment,
    parse_alignment_file,
    serialize_alignment,
)
from promkit.corpus.lexicon import PosClass, PronounLexicon, classify_words

from conftest import make_alignment_rows


def write(tmp_path, content, name="a.tsv"):
    path = tmp_path / name
    path.write_text(content, encoding="utf-8")
    return path


def test_two_word_file(tmp_path):
    content = make_alignment_rows("u1", [
        ("he", [("HH", 0.0, 0.15), ("IY", 0.15, 0.30)]),
        ("loves", [("L", 0.30, 0.50), ("V", 0.50, 0.80)]),
    ])
    words = parse_alignment(write(tmp_path, content))
    assert len(words) == 2
    assert words[0].text == "he"
    assert words[0].pos_class == PosClass.PRONOUN_SUBJECTIVE
    assert words[1].pos_class == PosClass.OTHER
    assert words[0].start_s == 0.0 and words[0].end_s == pytest.approx(0.30)
    assert [p.label for p in words[1].phones] == ["L", "V"]


def test_empty_file(tmp_path):
    assert parse_alignment(write(tmp_path, "")) == []


def test_end_before_start_rejected(tmp_path):
    content = "u1\t0\the\tHH\t0.300000\t0.100000\n"
    with pytest.raises(AlignmentError):
        parse_alignment(write(tmp_path, content))


def test_overlapping_words_rejected(tmp_path):
    content = make_alignment_rows("u1", [
        ("a", [("A", 0.0, 0.5)]),
        ("b", [("B", 0.3, 0.8)]),
    ])
    with pytest.raises(AlignmentError, match="overlap"):
        parse_alignment(write(tmp_path, content))


def test_phone_gap_rejected(tmp_path):
    content = make_alignment_rows("u1", [
        ("a", [("A", 0.0, 0.2), ("B", 0.4, 0.6)]),  # 200 ms gap > 10 ms tolerance
    ])
    with pytest.raises(AlignmentError):
        parse_alignment(write(tmp_path, content))


def test_nonconsecutive_word_indices_rejected(tmp_path):
    content = "u1\t0\ta\tA\t0.000000\t0.200000\nu1\t2\tb\tB\t0.200000\t0.400000\n"
    with pytest.raises(AlignmentError, match="consecutive"):
        parse_alignment(write(tmp_path, content))


def test_pos_class_override_column(tmp_path):
    content = "u1\t0\ther\tHH\t0.000000\t0.200000\tpossessive_pronoun\n"
    words = parse_alignment(write(tmp_path, content))
    assert words[0].pos_class == PosClass.POSSESSIVE_PRONOUN


def test_multi_utterance_file(tmp_path):
    content = make_alignment_rows("u1", [("a", [("A", 0.0, 0.2)])]) + make_alignment_rows(
        "u2", [("b", [("B", 0.0, 0.3)])]
    )
    parsed = parse_alignment_file(write(tmp_path, content))
    assert set(parsed) == {"u1", "u2"}
    with pytest.raises(AlignmentError, match="multiple utterances"):
        parse_alignment(write(tmp_path, content))
    assert len(parse_alignment(write(tmp_path, content), utt_id="u2")) == 1


def test_round_trip_is_byte_identical(tmp_path):
    content = make_alignment_rows("u7", [
        ("I", [("AY", 0.0, 0.25)]),
        ("am", [("AE", 0.25, 0.4), ("M", 0.4, 0.62)]),
        ("going", [("G", 0.62, 0.8), ("OW", 0.8, 1.0), ("NG", 1.0, 1.33)]),
    ])
    words = parse_alignment(write(tmp_path, content))
    assert serialize_alignment(words, "u7") == content


class TestLexicon:
    def test_unambiguous_classes(self):
        assert classify_words(["we", "saw", "them"]) == [
            PosClass.PRONOUN_SUBJECTIVE, PosClass.OTHER, PosClass.PRONOUN_OBJECTIVE,
        ]
        assert classify_words(["mine"]) == [PosClass.POSSESSIVE_PRONOUN]
        assert classify_words(["my", "book"])[0] == PosClass.POSSESSIVE_DETERMINER

    def test_her_determiner_vs_objective(self):
        # "her book" -> determiner; sentence-final "her" -> objective
        assert classify_words(["loving", "her", "book"])[1] == PosClass.POSSESSIVE_DETERMINER
        assert classify_words(["he", "loves", "her"])[2] == PosClass.PRONOUN_OBJECTIVE
        assert classify_words(["he", "loves", "her."])[2] == PosClass.PRONOUN_OBJECTIVE

    def test_his_determiner_vs_possessive(self):
        assert classify_words(["his", "dog"])[0] == PosClass.POSSESSIVE_DETERMINER
        assert classify_words(["the", "dog", "is", "his"])[3] == PosClass.POSSESSIVE_PRONOUN

    def test_you_it_subjective_vs_objective(self):
        assert classify_words(["you", "are", "kind"])[0] == PosClass.PRONOUN_SUBJECTIVE
        assert classify_words(["I", "love", "you"])[2] == PosClass.PRONOUN_OBJECTIVE
        assert classify_words(["it", "is", "here"])[0] == PosClass.PRONOUN_SUBJECTIVE
        assert classify_words(["on", "it"])[1] == PosClass.PRONOUN_OBJECTIVE

    def test_case_and_punctuation_normalization(self):
        assert classify_words(["HE,"]) == [PosClass.PRONOUN_SUBJECTIVE]

    def test_custom_lexicon_json(self, tmp_path):
        path = tmp_path / "lex.json"
        path.write_text(
            '{"subjective": ["zin"], "objective": [], '
            '"possessive_determiners": [], "possessive_pronouns": [], "verb_like": []}',
            encoding="utf-8",
        )
        lex = PronounLexicon.from_json(path)
        assert lex.classify("zin") == PosClass.PRONOUN_SUBJECTIVE
        assert lex.classify("he") == PosClass.OTHER
