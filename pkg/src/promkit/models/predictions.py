"""Prediction sets and their TSV interchange format.

Any predictor (native or external) scores a corpus split as one row per
target word::

    # model_id=<id> context=<current|plus1|plus2>
    utt_id<TAB>word_idx<TAB>label
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from promkit.labels import check_label

Key = tuple[str, int]

_HEADER_RE = re.compile(r"^# model_id=(?P<model_id>\S+) context=(?P<context>current|plus1|plus2)$")


@dataclass
class PredictionSet:
    model_id: str
    context: str = "current"
    labels: dict[Key, str] = field(default_factory=dict)
    scores: dict[Key, tuple[float, float, float]] = field(default_factory=dict)

    def add(self, utt_id: str, word_idx: int, label: str,
            class_scores: tuple[float, float, float] | None = None) -> None:
        key = (utt_id, word_idx)
        if key in self.labels:
            raise ValueError(f"duplicate prediction key {key}")
        self.labels[key] = check_label(label)
        if class_scores is not None:
            self.scores[key] = class_scores

    def __len__(self) -> int:
        return len(self.labels)


def export_predictions(predictions: PredictionSet, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# model_id={predictions.model_id} context={predictions.context}\n")
        for (utt_id, word_idx), label in sorted(predictions.labels.items()):
            fh.write(f"{utt_id}\t{word_idx}\t{label}\n")


def import_predictions(path: str | Path) -> PredictionSet:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty predictions file (header required)")
    match = _HEADER_RE.match(lines[0])
    if not match:
        raise ValueError(f"{path}: bad header line {lines[0]!r}")
    predictions = PredictionSet(model_id=match["model_id"], context=match["context"])
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"{path}:{lineno}: expected 3 columns, got {len(parts)}")
        utt_id, word_idx, label = parts
        try:
            predictions.add(utt_id, int(word_idx), label)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from exc
    return predictions
