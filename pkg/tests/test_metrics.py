"""Precision/recall/F1 against a brute-force counting oracle, and subset
recall."""

import itertools

import pytest

from promkit.corpus.renditions import SubsetEntry
from promkit.evaluation.metrics import prf1, prf1_from_lists
from promkit.evaluation.subsets import subset_recall, subset_recalls
from promkit.models.predictions import PredictionSet

LABELS = ("p0", "p1", "p2")


def oracle_prf1(gold, pred, focus):
    """Definition-level counting, independent of the implementation."""
    tp = sum(1 for g, p in zip(gold, pred) if g == focus and p == focus)
    fp = sum(1 for g, p in zip(gold, pred) if g != focus and p == focus)
    fn = sum(1 for g, p in zip(gold, pred) if g == focus and p != focus)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def test_hand_example():
    gold = ["p2", "p0", "p0", "p2"]
    pred = ["p2", "p2", "p0", "p0"]
    (p, r, f1), confusion = prf1_from_lists(gold, pred, focus="p2")
    assert (p, r, f1) == (0.5, 0.5, 0.5)
    assert confusion.total == 4


def test_identity_prediction():
    gold = ["p0", "p1", "p2", "p2", "p1"]
    (p, r, f1), _ = prf1_from_lists(gold, list(gold), focus="p2")
    assert (p, r, f1) == (1.0, 1.0, 1.0)


def test_absent_class_flagged_undefined():
    from promkit.evaluation.metrics import all_class_metrics, ConfusionCounts
    confusion = ConfusionCounts()
    for g, p in zip(["p0", "p1"], ["p0", "p1"]):
        confusion.observe(g, p)
    metrics = all_class_metrics(confusion)["p2"]
    assert (metrics.precision, metrics.recall, metrics.f1) == (0.0, 0.0, 0.0)
    assert metrics.undefined


def test_key_mismatch_lists_missing():
    gold = {("u", 0): "p0", ("u", 1): "p2"}
    pred = {("u", 0): "p0", ("u", 2): "p2"}
    with pytest.raises(ValueError, match="key mismatch"):
        prf1(gold, pred)


def test_row_permutation_invariance():
    gold = {("u", i): lab for i, lab in enumerate(["p2", "p0", "p1", "p2", "p0"])}
    pred = {("u", i): lab for i, lab in enumerate(["p0", "p0", "p1", "p2", "p2"])}
    metrics_a, _ = prf1(gold, pred)
    shuffled_gold = dict(reversed(list(gold.items())))
    shuffled_pred = dict(reversed(list(pred.items())))
    metrics_b, _ = prf1(shuffled_gold, shuffled_pred)
    assert metrics_a == metrics_b


def test_exhaustive_short_sequences_match_oracle():
    """All gold/pred pairs up to length 3, every focus class (the full
    length-6 sweep runs in the acceptance suite)."""
    for n in (1, 2, 3):
        for gold in itertools.product(LABELS, repeat=n):
            for pred in itertools.product(LABELS, repeat=n):
                for focus in LABELS:
                    ours, _ = prf1_from_lists(list(gold), list(pred), focus)
                    assert ours == oracle_prf1(gold, pred, focus)


class TestSubsetRecall:
    def entry(self, i, utt_ids=None):
        return SubsetEntry(sentence_order=(1, 1, i), word_idx=0, word="he",
                           utt_ids=utt_ids or {"s1": f"s1_u{i}"})

    def preds(self, labels_by_utt):
        preds = PredictionSet(model_id="m")
        for utt_id, label in labels_by_utt.items():
            preds.add(utt_id, 0, label)
        return preds

    def test_quarter_recall(self):
        entries = [self.entry(i) for i in range(4)]
        preds = self.preds({"s1_u0": "p2", "s1_u1": "p0", "s1_u2": "p0", "s1_u3": "p1"})
        assert subset_recall(entries, preds, target="p2") == 0.25

    def test_neg_all_p0_full_recall(self):
        entries = [self.entry(i) for i in range(3)]
        preds = self.preds({f"s1_u{i}": "p0" for i in range(3)})
        assert subset_recall(entries, preds, target="p0") == 1.0

    def test_empty_subset_rejected(self):
        with pytest.raises(ValueError, match="empty subset"):
            subset_recall([], self.preds({"u": "p0"}), target="p2")

    def test_missing_key_rejected(self):
        entries = [self.entry(0, utt_ids={"s1": "absent"})]
        with pytest.raises(KeyError, match="not covered"):
            subset_recall(entries, self.preds({"other": "p2"}), target="p2")

    def test_resolution_through_any_rendition(self):
        entries = [self.entry(0, utt_ids={"s1": "a", "s2": "b"})]
        preds = self.preds({"b": "p2"})  # predictions keyed by rendition s2
        assert subset_recall(entries, preds, target="p2") == 1.0

    def test_subset_recalls_bundle(self):
        from promkit.corpus.renditions import PronounSubsets
        subsets = PronounSubsets(
            maj=[self.entry(0)], min=[self.entry(1)], neg=[self.entry(2)]
        )
        preds = self.preds({"s1_u0": "p2", "s1_u1": "p0", "s1_u2": "p0"})
        out = subset_recalls(subsets, preds)
        assert out == {"maj@p2": 1.0, "min@p2": 0.0, "neg@p0": 1.0}
