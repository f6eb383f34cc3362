"""Word-majority baseline.

Counts how often each (case-folded) lexical item carries each prominence
category in training labels, then predicts the per-word majority category;
out-of-vocabulary words fall back to the global majority.  Ties break
toward non-prominence (p0 > p1 > p2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from promkit.corpus.context import SEPARATOR, ContextWindow
from promkit.labels import LABEL_TO_INDEX, LABELS
from promkit.models.predictions import PredictionSet
from promkit.prominence.annotate import ProminenceAnnotation


@dataclass
class WordStats:
    counts: dict[str, list[int]] = field(default_factory=dict)

    @property
    def fallback(self) -> list[int]:
        totals = [0, 0, 0]
        for row in self.counts.values():
            for i, n in enumerate(row):
                totals[i] += n
        return totals

    def observe(self, word: str, label: str) -> None:
        row = self.counts.setdefault(word.lower(), [0, 0, 0])
        row[LABEL_TO_INDEX[label]] += 1

    def majority_label(self, word: str) -> str:
        row = self.counts.get(word.lower())
        if row is None:
            row = self.fallback
        # first index of the max count wins: the p0 > p1 > p2 tie-break
        return LABELS[row.index(max(row))]

    def save(self, path: str | Path, model_id: str = "word_majority") -> None:
        payload = {
            "model_id": model_id,
            "counts": {w: self.counts[w] for w in sorted(self.counts)},
        }
        Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> tuple["WordStats", str]:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        stats = cls(counts={w: list(map(int, row)) for w, row in raw["counts"].items()})
        return stats, raw.get("model_id", "word_majority")


def fit_majority(annotations: list[ProminenceAnnotation]) -> WordStats:
    """Exact per-word category counts over one or more label files."""
    stats = WordStats()
    n_rows = 0
    for annotation in annotations:
        for _, _, word, _, label in annotation.rows:
            stats.observe(word, label)
            n_rows += 1
    if n_rows == 0:
        raise ValueError("no training labels: cannot fit the majority baseline")
    return stats


def predict_majority(
    stats: WordStats,
    windows: list[ContextWindow],
    model_id: str = "word_majority",
) -> PredictionSet:
    """Majority prediction for every target word of the given windows."""
    predictions = PredictionSet(model_id=model_id, context=windows[0].regime.value if windows else "current")
    for window in windows:
        for token, word_idx in zip(window.target_tokens, window.target_word_indices):
            assert token != SEPARATOR
            predictions.add(window.utt_id, word_idx, stats.majority_label(token))
    return predictions
