"""Recall on the consensus pronoun subsets.

The maj/min subsets count a hit when the word is predicted p2; the neg
subset when it is predicted p0.  Subset entries are resolved to prediction
keys through any rendition utt_id present in the prediction set.
"""

from __future__ import annotations

from promkit.corpus.renditions import PronounSubsets, SubsetEntry
from promkit.labels import P0, P2, check_label
from promkit.models.predictions import PredictionSet

SUBSET_TARGETS = {"maj": P2, "min": P2, "neg": P0}


def _resolve_key(entry: SubsetEntry, predictions: PredictionSet) -> tuple[str, int]:
    for utt_id in sorted(entry.utt_ids.values()):
        key = (utt_id, entry.word_idx)
        if key in predictions.labels:
            return key
    raise KeyError(
        f"subset entry {entry.sentence_order}/{entry.word_idx} not covered by predictions"
    )


def subset_recall(
    entries: list[SubsetEntry], predictions: PredictionSet, target: str
) -> float:
    """Fraction of subset words predicted as the target label."""
    check_label(target)
    if not entries:
        raise ValueError("empty subset")
    hits = 0
    for entry in entries:
        key = _resolve_key(entry, predictions)
        if predictions.labels[key] == target:
            hits += 1
    return hits / len(entries)


def subset_recalls(subsets: PronounSubsets, predictions: PredictionSet) -> dict[str, float]:
    """maj@p2, min@p2, neg@p0 recalls; empty subsets are omitted."""
    out = {}
    for name, target in SUBSET_TARGETS.items():
        entries = getattr(subsets, name)
        if entries:
            out[f"{name}@{target}"] = subset_recall(entries, predictions, target)
    return out
