"""Alignment TSV parsing and serialization.

One row per phone::

    utt_id<TAB>word_idx<TAB>word<TAB>phone<TAB>start_s<TAB>end_s

Times are seconds with 6 decimals, LF line endings.  Word row order defines
the word index; word boundaries are the extent of the word's phones.  An
optional 7th column on a word's first phone row overrides the lexicon-derived
pos_class for that word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from promkit.corpus.lexicon import PosClass, PronounLexicon, classify_words

#: Phones must tile the word span within this tolerance (seconds).
PHONE_TILING_TOL = 0.010


class AlignmentError(ValueError):
    """Malformed or inconsistent alignment data."""


@dataclass(frozen=True)
class PhoneInterval:
    label: str
    start_s: float
    end_s: float

    def __post_init__(self):
        if not self.end_s > self.start_s:
            raise AlignmentError(
                f"phone {self.label!r}: end {self.end_s} must exceed start {self.start_s}"
            )

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s


@dataclass(frozen=True)
class WordToken:
    index: int
    text: str
    start_s: float
    end_s: float
    phones: tuple[PhoneInterval, ...] = field(default_factory=tuple)
    pos_class: PosClass = PosClass.OTHER

    def __post_init__(self):
        if not self.end_s > self.start_s:
            raise AlignmentError(
                f"word {self.text!r}: end {self.end_s} must exceed start {self.start_s}"
            )
        if self.phones:
            if abs(self.phones[0].start_s - self.start_s) > PHONE_TILING_TOL or abs(
                self.phones[-1].end_s - self.end_s
            ) > PHONE_TILING_TOL:
                raise AlignmentError(f"word {self.text!r}: phones do not tile the word span")
            for prev, cur in zip(self.phones, self.phones[1:]):
                if cur.start_s < prev.end_s - PHONE_TILING_TOL or cur.start_s > prev.end_s + PHONE_TILING_TOL:
                    raise AlignmentError(
                        f"word {self.text!r}: phone {cur.label!r} does not abut {prev.label!r}"
                    )

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s


def _parse_rows(path: Path) -> list[tuple[str, int, str, str, float, float, str | None]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) not in (6, 7):
                raise AlignmentError(f"{path}:{lineno}: expected 6 or 7 columns, got {len(parts)}")
            utt_id, word_idx, word, phone, start, end = parts[:6]
            override = parts[6] if len(parts) == 7 else None
            try:
                rows.append((utt_id, int(word_idx), word, phone, float(start), float(end), override))
            except ValueError as exc:
                raise AlignmentError(f"{path}:{lineno}: {exc}") from exc
    return rows


def _build_words(
    rows: list[tuple[str, int, str, str, float, float, str | None]],
    path: Path,
    lexicon: PronounLexicon | None,
) -> list[WordToken]:
    # Group consecutive rows by word index; row order defines word order.
    groups: list[tuple[int, str, str | None, list[PhoneInterval]]] = []
    for utt_id, word_idx, word, phone, start, end, override in rows:
        if end <= start:
            raise AlignmentError(f"{path}: phone {phone!r} of word {word!r} has end <= start")
        if groups and groups[-1][0] == word_idx:
            if groups[-1][1] != word:
                raise AlignmentError(f"{path}: word index {word_idx} maps to conflicting texts")
            groups[-1][3].append(PhoneInterval(phone, start, end))
        else:
            groups.append((word_idx, word, override, [PhoneInterval(phone, start, end)]))
    if [g[0] for g in groups] != list(range(len(groups))):
        raise AlignmentError(f"{path}: word indices must be consecutive from 0")

    texts = [g[1] for g in groups]
    classes = classify_words(texts, lexicon)
    words = []
    last_end = None
    for (word_idx, word, override, phones), pos in zip(groups, classes):
        start, end = phones[0].start_s, phones[-1].end_s
        if last_end is not None and start < last_end - PHONE_TILING_TOL:
            raise AlignmentError(f"{path}: word {word!r} overlaps the previous word")
        if override is not None:
            pos = PosClass(override)
        words.append(
            WordToken(
                index=word_idx,
                text=word,
                start_s=start,
                end_s=end,
                phones=tuple(phones),
                pos_class=pos,
            )
        )
        last_end = end
    return words


def parse_alignment_file(
    path: str | Path, lexicon: PronounLexicon | None = None
) -> dict[str, list[WordToken]]:
    """Parse an alignment TSV into word tokens, grouped by utterance id."""
    path = Path(path)
    rows = _parse_rows(path)
    by_utt: dict[str, list] = {}
    for row in rows:
        by_utt.setdefault(row[0], []).append(row)
    return {utt_id: _build_words(utt_rows, path, lexicon) for utt_id, utt_rows in by_utt.items()}


def parse_alignment(
    path: str | Path, utt_id: str | None = None, lexicon: PronounLexicon | None = None
) -> list[WordToken]:
    """Parse the alignment for one utterance.

    When ``utt_id`` is None the file must contain exactly one utterance.
    An empty file yields an empty list.
    """
    parsed = parse_alignment_file(path, lexicon)
    if utt_id is not None:
        if utt_id not in parsed:
            raise AlignmentError(f"{path}: utterance {utt_id!r} not present")
        return parsed[utt_id]
    if not parsed:
        return []
    if len(parsed) > 1:
        raise AlignmentError(f"{path}: multiple utterances present, specify utt_id")
    return next(iter(parsed.values()))


def serialize_alignment(words: list[WordToken], utt_id: str) -> str:
    """Inverse of :func:`parse_alignment` for canonical 6-column files."""
    lines = []
    for word in words:
        for phone in word.phones:
            lines.append(
                f"{utt_id}\t{word.index}\t{word.text}\t{phone.label}"
                f"\t{phone.start_s:.6f}\t{phone.end_s:.6f}"
            )
    return "".join(line + "\n" for line in lines)
