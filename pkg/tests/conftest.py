"""Shared fixture builders: tiny aligned corpora and synthetic audio."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from promkit.acoustics.waveio import write_wav


def make_alignment_rows(utt_id: str, words: list[tuple[str, list[tuple[str, float, float]]]]) -> str:
    """words: [(text, [(phone, start, end), ...]), ...] in word order."""
    lines = []
    for idx, (text, phones) in enumerate(words):
        for phone, start, end in phones:
            lines.append(f"{utt_id}\t{idx}\t{text}\t{phone}\t{start:.6f}\t{end:.6f}")
    return "".join(line + "\n" for line in lines)


def evenly_spaced_words(texts: list[str], word_dur: float = 0.4, phones_per_word: int = 2):
    """Tile [0, n*word_dur) with words, each split into equal phones."""
    words = []
    t = 0.0
    for text in texts:
        phones = []
        step = word_dur / phones_per_word
        for k in range(phones_per_word):
            phones.append((f"ph{k}", t + k * step, t + (k + 1) * step))
        words.append((text, phones))
        t += word_dur
    return words


def voiced_tone(duration_s: float, sample_rate: int = 16000, f0: float = 180.0,
                envelope=None) -> np.ndarray:
    """Harmonic-rich tone so the pitch tracker locks on; optional amplitude envelope."""
    t = np.arange(int(round(duration_s * sample_rate))) / sample_rate
    sig = 0.6 * np.sin(2 * np.pi * f0 * t) + 0.25 * np.sin(2 * np.pi * 2 * f0 * t)
    if envelope is not None:
        sig = sig * envelope(t)
    return 0.9 * sig / np.max(np.abs(sig))


class CorpusBuilder:
    """Writes manifest + alignment TSVs (+ optional WAVs) into a directory."""

    def __init__(self, root: Path, corpus_id: str = "toy"):
        self.root = root
        self.corpus_id = corpus_id
        self.renditions: dict[str, list[dict]] = {}

    def add_utterance(
        self,
        speaker: str,
        utt_id: str,
        order: tuple[int, int, int],
        words: list[tuple[str, list[tuple[str, float, float]]]],
        samples: np.ndarray | None = None,
        sample_rate: int = 16000,
        audio_path_override: str | None = None,
    ) -> None:
        align_rel = f"align/{speaker}/{utt_id}.tsv"
        align_path = self.root / align_rel
        align_path.parent.mkdir(parents=True, exist_ok=True)
        align_path.write_text(make_alignment_rows(utt_id, words), encoding="utf-8")

        entry = {"utt_id": utt_id, "order": list(order), "alignment": align_rel, "audio": None}
        if samples is not None:
            audio_rel = audio_path_override or f"audio/{speaker}/{utt_id}.wav"
            audio_path = self.root / audio_rel
            audio_path.parent.mkdir(parents=True, exist_ok=True)
            write_wav(audio_path, samples, sample_rate)
            entry["audio"] = audio_rel
        elif audio_path_override is not None:
            entry["audio"] = audio_path_override  # points at a missing/corrupt file
        self.renditions.setdefault(speaker, []).append(entry)

    def write(self) -> Path:
        manifest = {
            "corpus_id": self.corpus_id,
            "renditions": [
                {"speaker_id": speaker, "utterances": entries}
                for speaker, entries in self.renditions.items()
            ],
        }
        path = self.root / "manifest.json"
        path.write_text(json.dumps(manifest, indent=2), encoding="utf-8")
        return path


@pytest.fixture
def corpus_builder(tmp_path):
    return CorpusBuilder(tmp_path)


@pytest.fixture
def three_sentence_rendition(tmp_path):
    """One speaker, one chapter, three text-only sentences."""
    builder = CorpusBuilder(tmp_path)
    sentences = [
        ("u1", (1, 1, 1), ["he", "loves", "her"]),
        ("u2", (1, 1, 2), ["she", "left", "early"]),
        ("u3", (1, 1, 3), ["they", "came", "back"]),
    ]
    for utt_id, order, texts in sentences:
        builder.add_utterance("s1", utt_id, order, evenly_spaced_words(texts))
    return builder.write()
