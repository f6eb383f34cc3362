"""Ordinal-ranking listening-test aggregation.

Each evaluator ranks the three synthesized versions of an utterance (one
per prominence label) from most to least prominent.  Rank 1 scores 1.0,
rank 2 scores 0.5, rank 3 scores 0.0; scores are aggregated per synthesis
label (and optionally per pronoun category) as means and medians.
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass, field
from pathlib import Path

from promkit.labels import LABELS, check_label

RANK_TO_SCORE = {1: 1.0, 2: 0.5, 3: 0.0}


class RankingError(ValueError):
    """Malformed rankings input."""


@dataclass
class RankScore:
    utt_id: str
    stimulus_label: str
    scores: list[float] = field(default_factory=list)

    @property
    def mean(self) -> float:
        return statistics.fmean(self.scores)

    @property
    def median(self) -> float:
        return statistics.median(self.scores)


@dataclass
class RankAggregate:
    #: (utt_id, stimulus_label) -> RankScore
    per_utterance: dict[tuple[str, str], RankScore]
    #: stimulus_label -> pooled scores
    per_label: dict[str, list[float]]
    rejected: list[str]

    def label_summary(self) -> dict[str, dict[str, float]]:
        return {
            label: {
                "mean": statistics.fmean(scores),
                "median": statistics.median(scores),
                "n": len(scores),
            }
            for label, scores in self.per_label.items()
            if scores
        }


def read_rankings_csv(path: str | Path) -> list[tuple[str, str, str, int]]:
    """Rows of (evaluator_id, utt_id, stimulus_label, rank)."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or row[0].startswith("#"):
                continue
            if lineno == 1 and row[:1] == ["evaluator_id"]:
                continue  # optional header
            if len(row) != 4:
                raise RankingError(f"{path}:{lineno}: expected 4 columns, got {len(row)}")
            evaluator, utt_id, label, rank = (cell.strip() for cell in row)
            try:
                rows.append((evaluator, utt_id, check_label(label), int(rank)))
            except ValueError as exc:
                raise RankingError(f"{path}:{lineno}: {exc}") from exc
    return rows


def aggregate_rank_scores(
    rows: list[tuple[str, str, str, int]],
    categories: dict[str, str] | None = None,
) -> tuple[RankAggregate, dict[str, dict[str, list[float]]]]:
    """Aggregate ranking rows; non-permutation triples are rejected.

    Returns the aggregate and, when ``categories`` maps utt_id to a pronoun
    category, a category -> label -> scores breakdown (empty otherwise).
    """
    triples: dict[tuple[str, str], dict[str, int]] = {}
    for evaluator, utt_id, label, rank in rows:
        triples.setdefault((evaluator, utt_id), {})[label] = rank

    per_utterance: dict[tuple[str, str], RankScore] = {}
    per_label: dict[str, list[float]] = {label: [] for label in LABELS}
    by_category: dict[str, dict[str, list[float]]] = {}
    rejected = []

    for (evaluator, utt_id), ranking in sorted(triples.items()):
        if sorted(ranking) != sorted(LABELS) or sorted(ranking.values()) != [1, 2, 3]:
            rejected.append(
                f"{evaluator}/{utt_id}: ranking {ranking} is not a permutation of the 3 stimuli"
            )
            continue
        for label, rank in ranking.items():
            score = RANK_TO_SCORE[rank]
            key = (utt_id, label)
            if key not in per_utterance:
                per_utterance[key] = RankScore(utt_id=utt_id, stimulus_label=label)
            per_utterance[key].scores.append(score)
            per_label[label].append(score)
            if categories and utt_id in categories:
                cat = by_category.setdefault(categories[utt_id], {l: [] for l in LABELS})
                cat[label].append(score)

    return RankAggregate(per_utterance=per_utterance, per_label=per_label, rejected=rejected), by_category
