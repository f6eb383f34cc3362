"""Closed-class pronoun lexicon and part-of-speech bucketing.

Only the personal-pronoun classes are distinguished; every other token is
bucketed as ``other``.  Ambiguous surface forms (her, his, it, you) are
resolved with a shallow next/previous-token heuristic, which callers can
override per token in the alignment file.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path


class PosClass(str, enum.Enum):
    PRONOUN_SUBJECTIVE = "pronoun_subjective"
    PRONOUN_OBJECTIVE = "pronoun_objective"
    POSSESSIVE_DETERMINER = "possessive_determiner"
    POSSESSIVE_PRONOUN = "possessive_pronoun"
    OTHER = "other"

    def is_pronoun(self) -> bool:
        return self is not PosClass.OTHER


SUBJECTIVE = {"i", "you", "he", "she", "it", "we", "they"}
OBJECTIVE = {"me", "you", "him", "her", "it", "us", "them"}
POSSESSIVE_DETERMINERS = {"my", "your", "his", "her", "its", "our", "their"}
POSSESSIVE_PRONOUNS = {"mine", "yours", "his", "hers", "ours", "theirs"}

# Auxiliaries/modals/copulas used by the "verb-like" disambiguation check.
VERB_LIKE = {
    "am", "is", "are", "was", "were", "be", "been", "being",
    "do", "does", "did", "done",
    "have", "has", "had", "having",
    "will", "would", "shall", "should", "can", "could", "may", "might", "must",
}

PUNCTUATION = ".,;:!?\"'()[]-—…“”‘’"


def normalize_token(text: str) -> str:
    """Lowercase and strip leading/trailing punctuation (no stemming)."""
    return text.lower().strip(PUNCTUATION)


def _is_punctuation(text: str | None) -> bool:
    return text is None or normalize_token(text) == ""


@dataclass
class PronounLexicon:
    subjective: set[str] = field(default_factory=lambda: set(SUBJECTIVE))
    objective: set[str] = field(default_factory=lambda: set(OBJECTIVE))
    possessive_determiners: set[str] = field(default_factory=lambda: set(POSSESSIVE_DETERMINERS))
    possessive_pronouns: set[str] = field(default_factory=lambda: set(POSSESSIVE_PRONOUNS))
    verb_like: set[str] = field(default_factory=lambda: set(VERB_LIKE))

    @classmethod
    def from_json(cls, path: str | Path) -> "PronounLexicon":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        kwargs = {key: set(raw[key]) for key in raw}
        return cls(**kwargs)

    def classify(
        self,
        text: str,
        next_text: str | None = None,
        sentence_initial: bool = False,
    ) -> PosClass:
        """Classify a single token given its right neighbour.

        A form with a possessive-determiner reading keeps it only when the
        next token exists, is not sentence-final punctuation, and is not
        verb-like; otherwise the non-determiner reading wins.  On the
        remaining subjective/objective ambiguity (you, it) the subjective
        reading wins sentence-initially or before a verb-like token.
        """
        word = normalize_token(text)
        classes = []
        if word in self.subjective:
            classes.append(PosClass.PRONOUN_SUBJECTIVE)
        if word in self.objective:
            classes.append(PosClass.PRONOUN_OBJECTIVE)
        if word in self.possessive_determiners:
            classes.append(PosClass.POSSESSIVE_DETERMINER)
        if word in self.possessive_pronouns:
            classes.append(PosClass.POSSESSIVE_PRONOUN)
        if not classes:
            return PosClass.OTHER
        if len(classes) == 1:
            return classes[0]

        next_norm = None if next_text is None else normalize_token(next_text)
        determiner_position = (
            not _is_punctuation(next_text) and next_norm not in self.verb_like
        )
        if PosClass.POSSESSIVE_DETERMINER in classes:
            if determiner_position:
                return PosClass.POSSESSIVE_DETERMINER
            others = [c for c in classes if c is not PosClass.POSSESSIVE_DETERMINER]
            return others[0]
        if sentence_initial or next_norm in self.verb_like:
            return PosClass.PRONOUN_SUBJECTIVE
        return PosClass.PRONOUN_OBJECTIVE


DEFAULT_LEXICON = PronounLexicon()


def classify_words(texts: list[str], lexicon: PronounLexicon | None = None) -> list[PosClass]:
    """Classify a word sequence; each word sees its right neighbour."""
    lex = lexicon or DEFAULT_LEXICON
    out = []
    for i, text in enumerate(texts):
        nxt = texts[i + 1] if i + 1 < len(texts) else None
        out.append(lex.classify(text, nxt, sentence_initial=(i == 0)))
    return out
