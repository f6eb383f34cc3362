"""Per-class precision/recall/F1 and the confusion matrix."""

from __future__ import annotations

from dataclasses import dataclass, field

from promkit.labels import LABEL_TO_INDEX, LABELS, P2, check_label

Key = tuple[str, int]


@dataclass
class ConfusionCounts:
    """3x3 gold-by-predicted counts over (p0, p1, p2)."""

    matrix: list[list[int]] = field(default_factory=lambda: [[0] * 3 for _ in range(3)])

    def observe(self, gold: str, predicted: str) -> None:
        self.matrix[LABEL_TO_INDEX[gold]][LABEL_TO_INDEX[predicted]] += 1

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.matrix)

    def gold_count(self, label: str) -> int:
        return sum(self.matrix[LABEL_TO_INDEX[label]])

    def predicted_count(self, label: str) -> int:
        i = LABEL_TO_INDEX[label]
        return sum(row[i] for row in self.matrix)

    def true_positives(self, label: str) -> int:
        i = LABEL_TO_INDEX[label]
        return self.matrix[i][i]


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    undefined: bool = False  # no gold nor predicted instances of the class


@dataclass
class MetricsReport:
    model_id: str
    context: str
    per_class: dict[str, ClassMetrics]
    confusion: ConfusionCounts
    n_words: int
    n_p2: int
    subset_recalls: dict[str, float] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "model_id": self.model_id,
            "context": self.context,
            "per_class": {
                label: {
                    "precision": m.precision,
                    "recall": m.recall,
                    "f1": m.f1,
                    "undefined": m.undefined,
                }
                for label, m in self.per_class.items()
            },
            "confusion": self.confusion.matrix,
            "n_words": self.n_words,
            "n_p2": self.n_p2,
            "subset_recalls": dict(self.subset_recalls),
        }


def _metrics_from_confusion(confusion: ConfusionCounts, focus: str) -> ClassMetrics:
    tp = confusion.true_positives(focus)
    n_pred = confusion.predicted_count(focus)
    n_gold = confusion.gold_count(focus)
    precision = tp / n_pred if n_pred else 0.0
    recall = tp / n_gold if n_gold else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return ClassMetrics(
        precision=precision,
        recall=recall,
        f1=f1,
        undefined=(n_pred == 0 and n_gold == 0),
    )


def prf1_from_lists(gold: list[str], predicted: list[str], focus: str = P2):
    """(precision, recall, f1) for the focus class plus the full confusion.

    Zero denominators yield 0 by convention; a class absent from both gold
    and prediction is flagged undefined.
    """
    if len(gold) != len(predicted):
        raise ValueError(f"length mismatch: {len(gold)} gold vs {len(predicted)} predicted")
    check_label(focus)
    confusion = ConfusionCounts()
    for g, p in zip(gold, predicted):
        confusion.observe(check_label(g), check_label(p))
    m = _metrics_from_confusion(confusion, focus)
    return (m.precision, m.recall, m.f1), confusion


def prf1(gold: dict[Key, str], predicted: dict[Key, str], focus: str = P2):
    """Keyed variant: gold and predictions must cover identical key sets."""
    missing = sorted(set(gold) - set(predicted))
    extra = sorted(set(predicted) - set(gold))
    if missing or extra:
        raise ValueError(
            f"key mismatch: {len(missing)} gold-only keys (first: {missing[:5]}), "
            f"{len(extra)} prediction-only keys (first: {extra[:5]})"
        )
    keys = sorted(gold)
    return prf1_from_lists([gold[k] for k in keys], [predicted[k] for k in keys], focus)


def all_class_metrics(confusion: ConfusionCounts) -> dict[str, ClassMetrics]:
    return {label: _metrics_from_confusion(confusion, label) for label in LABELS}
