"""Context windows: the current sentence optionally preceded by up to two
previous sentences from the same chapter, flattened with separator markers."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from promkit.corpus.manifest import SentenceOrder, SpeakerRendition, Utterance

#: Reserved sentence-separator marker; never part of the target span.
SEPARATOR = "<sep>"


class Regime(str, enum.Enum):
    CURRENT = "current"
    PLUS1 = "plus1"
    PLUS2 = "plus2"

    @property
    def n_previous(self) -> int:
        return {Regime.CURRENT: 0, Regime.PLUS1: 1, Regime.PLUS2: 2}[self]


@dataclass(frozen=True)
class ContextWindow:
    regime: Regime
    tokens: tuple[str, ...]
    target_start: int
    target_end: int
    utt_id: str
    sentence_order: SentenceOrder
    target_word_indices: tuple[int, ...]

    def __post_init__(self):
        if not self.target_end > self.target_start:
            raise ValueError("target span must be non-empty")

    @property
    def target_tokens(self) -> tuple[str, ...]:
        return self.tokens[self.target_start : self.target_end]


def _previous_in_chapter(
    rendition: SpeakerRendition, order: SentenceOrder, n: int
) -> list[Utterance]:
    """Up to n immediately preceding sentences of the same book+chapter.

    Neighbours are taken in reading order (the rendition is sorted by
    sentence order); crossing a chapter boundary stops the walk.
    """
    utts = rendition.utterances
    idx = next(i for i, utt in enumerate(utts) if utt.sentence_order == order)
    out: list[Utterance] = []
    for j in range(idx - 1, max(-1, idx - n - 1), -1):
        if utts[j].sentence_order[:2] != order[:2]:
            break
        out.append(utts[j])
    out.reverse()
    return out


def build_context_window(
    rendition: SpeakerRendition, order: SentenceOrder, regime: Regime | str
) -> ContextWindow:
    """Flatten {W_{s-2}}? {W_{s-1}}? W_s into one token list.

    Missing previous sentences (chapter starts, gaps) are omitted; the
    requested regime is recorded regardless.
    """
    regime = Regime(regime)
    order = tuple(order)
    target = rendition.utterance_for(order)
    if target is None:
        raise KeyError(f"sentence {order} not in rendition {rendition.speaker_id}")

    previous = _previous_in_chapter(rendition, order, regime.n_previous)
    tokens: list[str] = []
    for utt in previous:
        tokens.extend(w.text for w in utt.words)
        tokens.append(SEPARATOR)
    target_start = len(tokens)
    tokens.extend(w.text for w in target.words)

    return ContextWindow(
        regime=regime,
        tokens=tuple(tokens),
        target_start=target_start,
        target_end=len(tokens),
        utt_id=target.utt_id,
        sentence_order=order,
        target_word_indices=tuple(w.index for w in target.words),
    )


def iter_context_windows(rendition: SpeakerRendition, regime: Regime | str):
    """Context windows for every sentence of a rendition, in corpus order."""
    for utt in rendition.utterances:
        yield build_context_window(rendition, utt.sentence_order, regime)
