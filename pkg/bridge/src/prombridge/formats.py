"""Readers/writers for the shared file formats.

These mirror the annotation toolkit's external interfaces (manifest JSON,
alignment TSV, labels TSV, predictions TSV) without importing it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

LABELS = ("p0", "p1", "p2")


class FormatError(ValueError):
    pass


@dataclass(frozen=True)
class Sentence:
    utt_id: str
    order: tuple[int, int, int]
    words: tuple[str, ...]


@dataclass(frozen=True)
class Rendition:
    speaker_id: str
    sentences: tuple[Sentence, ...]


def read_alignment_words(path: Path, utt_id: str) -> list[str]:
    """Word texts for one utterance; row order defines word index."""
    words: list[tuple[int, str]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) < 6:
                raise FormatError(f"{path}:{lineno}: expected >=6 columns")
            if parts[0] != utt_id:
                continue
            idx = int(parts[1])
            if not words or words[-1][0] != idx:
                words.append((idx, parts[2]))
    return [text for _, text in words]


def read_manifest(path: str | Path) -> list[Rendition]:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot parse manifest {path}: {exc}") from exc
    root = path.parent
    renditions = []
    for rend in raw.get("renditions", []):
        sentences = []
        for entry in rend.get("utterances", []):
            words = read_alignment_words(root / entry["alignment"], entry["utt_id"])
            sentences.append(
                Sentence(
                    utt_id=entry["utt_id"],
                    order=tuple(int(x) for x in entry["order"]),
                    words=tuple(words),
                )
            )
        sentences.sort(key=lambda s: s.order)
        renditions.append(Rendition(speaker_id=rend["speaker_id"], sentences=tuple(sentences)))
    return renditions


def read_labels_tsv(path: str | Path) -> dict[tuple[str, int], str]:
    labels: dict[tuple[str, int], str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise FormatError(f"{path}:{lineno}: expected 5 columns")
            utt_id, word_idx, _, _, label = parts
            if label not in LABELS:
                raise FormatError(f"{path}:{lineno}: bad label {label!r}")
            labels[(utt_id, int(word_idx))] = label
    return labels


@dataclass
class Predictions:
    model_id: str
    context: str
    rows: dict[tuple[str, int], str] = field(default_factory=dict)

    def add(self, utt_id: str, word_idx: int, label: str) -> None:
        key = (utt_id, word_idx)
        if key in self.rows:
            raise FormatError(f"duplicate prediction key {key}")
        if label not in LABELS:
            raise FormatError(f"bad label {label!r}")
        self.rows[key] = label


def write_predictions_tsv(predictions: Predictions, path: str | Path) -> None:
    """Shared grammar: header line, then utt_id<TAB>word_idx<TAB>label."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# model_id={predictions.model_id} context={predictions.context}\n")
        for (utt_id, word_idx), label in sorted(predictions.rows.items()):
            fh.write(f"{utt_id}\t{word_idx}\t{label}\n")
