"""Corpus manifest: multi-rendition collections of aligned utterances.

The manifest is a UTF-8 JSON file::

    {"corpus_id": ...,
     "renditions": [{"speaker_id": ...,
                     "utterances": [{"utt_id": ..., "order": [book, chapter, sentence],
                                     "audio": ..., "alignment": ...}, ...]}, ...]}

Audio/alignment paths are resolved relative to the manifest's directory.
``audio`` may be null for text-only corpora (training/evaluating predictors
does not need waveforms); annotation then skips those utterances.
"""

from __future__ import annotations

import functools
import json
import wave
from dataclasses import dataclass
from pathlib import Path

from promkit.corpus.alignment import AlignmentError, WordToken, parse_alignment
from promkit.corpus.lexicon import PronounLexicon

SentenceOrder = tuple[int, int, int]


class ManifestError(ValueError):
    """Malformed manifest or violated corpus invariant."""


@dataclass(frozen=True)
class AudioRef:
    path: Path
    sample_rate: int | None  # None when the header was not read (lenient load)


@dataclass(frozen=True)
class Utterance:
    utt_id: str
    sentence_order: SentenceOrder
    words: tuple[WordToken, ...]
    duration_s: float
    audio_ref: AudioRef | None = None

    def __post_init__(self):
        for word in self.words:
            if word.start_s < 0 or word.end_s > self.duration_s + 1e-6:
                raise ManifestError(
                    f"utterance {self.utt_id}: word {word.text!r} outside [0, {self.duration_s}]"
                )


@dataclass(frozen=True)
class SpeakerRendition:
    speaker_id: str
    utterances: tuple[Utterance, ...]

    def utterance_for(self, order: SentenceOrder) -> Utterance | None:
        return self._by_order.get(tuple(order))

    @functools.cached_property
    def _by_order(self) -> dict[SentenceOrder, Utterance]:
        return {u.sentence_order: u for u in self.utterances}


@dataclass(frozen=True)
class Manifest:
    corpus_id: str
    renditions: tuple[SpeakerRendition, ...]
    root: Path

    def rendition(self, speaker_id: str) -> SpeakerRendition:
        for rend in self.renditions:
            if rend.speaker_id == speaker_id:
                return rend
        raise KeyError(speaker_id)

    def sentence_orders(self) -> list[SentenceOrder]:
        """All sentence orders present in any rendition, sorted."""
        orders = {u.sentence_order for rend in self.renditions for u in rend.utterances}
        return sorted(orders)


def _read_wav_header(path: Path) -> tuple[int, float]:
    try:
        with wave.open(str(path), "rb") as wav:
            rate = wav.getframerate()
            duration = wav.getnframes() / float(rate)
    except (wave.Error, EOFError, OSError) as exc:
        raise ManifestError(f"unreadable audio header {path}: {exc}") from exc
    return rate, duration


def _load_utterance(
    entry: dict, root: Path, lexicon: PronounLexicon | None, strict_audio: bool
) -> Utterance:
    try:
        utt_id = entry["utt_id"]
        order = tuple(int(x) for x in entry["order"])
        alignment_rel = entry["alignment"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ManifestError(f"bad utterance entry {entry!r}: {exc}") from exc
    if len(order) != 3:
        raise ManifestError(f"utterance {utt_id}: order must be [book, chapter, sentence]")

    alignment_path = root / alignment_rel
    if not alignment_path.is_file():
        raise ManifestError(f"utterance {utt_id}: missing alignment file {alignment_path}")
    try:
        words = parse_alignment(alignment_path, utt_id=utt_id, lexicon=lexicon)
    except AlignmentError as exc:
        raise ManifestError(f"utterance {utt_id}: invalid alignment: {exc}") from exc

    audio_rel = entry.get("audio")
    if audio_rel is not None:
        audio_path = root / audio_rel
        try:
            if not audio_path.is_file():
                raise ManifestError(f"utterance {utt_id}: missing audio file {audio_path}")
            rate, duration = _read_wav_header(audio_path)
            audio_ref = AudioRef(path=audio_path, sample_rate=rate)
        except ManifestError:
            if strict_audio:
                raise
            # lenient mode: keep the utterance; annotation will fail it
            audio_ref = AudioRef(path=audio_path, sample_rate=None)
            duration = max(w.end_s for w in words)
    else:
        audio_ref = None
        duration = max((w.end_s for w in words), default=0.0)

    return Utterance(
        utt_id=utt_id,
        sentence_order=order,
        words=tuple(words),
        duration_s=duration,
        audio_ref=audio_ref,
    )


def load_manifest(
    path: str | Path,
    lexicon: PronounLexicon | None = None,
    strict_audio: bool = True,
) -> Manifest:
    """Load and validate a corpus manifest.

    Raises :class:`ManifestError` on parse failures, missing files,
    duplicate ids, or invalid alignments.  With ``strict_audio=False``
    missing/unreadable audio does not fail the load; the utterance is kept
    and the defect surfaces when its audio is actually needed.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ManifestError(f"cannot parse manifest {path}: {exc}") from exc

    root = path.parent
    try:
        corpus_id = raw["corpus_id"]
        rendition_entries = raw["renditions"]
    except (KeyError, TypeError) as exc:
        raise ManifestError(f"manifest {path} missing required key: {exc}") from exc

    renditions = []
    seen_speakers = set()
    for rend_entry in rendition_entries:
        speaker_id = rend_entry.get("speaker_id")
        if speaker_id is None:
            raise ManifestError("rendition without speaker_id")
        if speaker_id in seen_speakers:
            raise ManifestError(f"duplicate rendition id {speaker_id!r}")
        seen_speakers.add(speaker_id)

        utterances = []
        seen_utts = set()
        for entry in rend_entry.get("utterances", []):
            utt = _load_utterance(entry, root, lexicon, strict_audio)
            if utt.utt_id in seen_utts:
                raise ManifestError(f"duplicate utt_id {utt.utt_id!r} in rendition {speaker_id!r}")
            seen_utts.add(utt.utt_id)
            utterances.append(utt)
        utterances.sort(key=lambda u: u.sentence_order)
        orders = [u.sentence_order for u in utterances]
        if len(set(orders)) != len(orders):
            raise ManifestError(f"rendition {speaker_id!r}: duplicate sentence order")
        renditions.append(SpeakerRendition(speaker_id=speaker_id, utterances=tuple(utterances)))

    return Manifest(corpus_id=corpus_id, renditions=tuple(renditions), root=root)
