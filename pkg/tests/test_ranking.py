"""Listening-test rank aggregation."""

import pytest

from promkit.evaluation.ranking import (
    RankingError,
    aggregate_rank_scores,
    read_rankings_csv,
)


def perfect_control_rows(n_evaluators=30, n_utts=10):
    """Every evaluator ranks the p2 clip first, p1 second, p0 third."""
    rows = []
    for e in range(n_evaluators):
        for u in range(n_utts):
            rows += [
                (f"e{e}", f"u{u}", "p2", 1),
                (f"e{e}", f"u{u}", "p1", 2),
                (f"e{e}", f"u{u}", "p0", 3),
            ]
    return rows


def test_perfect_control_medians():
    aggregate, _ = aggregate_rank_scores(perfect_control_rows())
    summary = aggregate.label_summary()
    assert summary["p0"]["median"] == 0.0
    assert summary["p1"]["median"] == 0.5
    assert summary["p2"]["median"] == 1.0
    assert summary["p2"]["mean"] == 1.0
    assert not aggregate.rejected


def test_all_rank_p2_first_mean_one():
    rows = perfect_control_rows(n_evaluators=30, n_utts=1)
    aggregate, _ = aggregate_rank_scores(rows)
    rs = aggregate.per_utterance[("u0", "p2")]
    assert rs.mean == 1.0 and rs.median == 1.0
    assert len(rs.scores) == 30


def test_split_evaluators_mean_075():
    """Two evaluators swap first/second on two stimuli -> both mean 0.75."""
    rows = [
        ("e1", "u", "p2", 1), ("e1", "u", "p1", 2), ("e1", "u", "p0", 3),
        ("e2", "u", "p1", 1), ("e2", "u", "p2", 2), ("e2", "u", "p0", 3),
    ]
    aggregate, _ = aggregate_rank_scores(rows)
    assert aggregate.per_utterance[("u", "p2")].mean == 0.75
    assert aggregate.per_utterance[("u", "p1")].mean == 0.75
    assert aggregate.per_utterance[("u", "p0")].mean == 0.0


def test_score_conservation():
    """Per evaluator per utterance the three scores sum to 1.5."""
    rows = perfect_control_rows(5, 4)
    aggregate, _ = aggregate_rank_scores(rows)
    per_pair = {}
    for (utt, label), rs in aggregate.per_utterance.items():
        for i, score in enumerate(rs.scores):
            per_pair.setdefault((i, utt), 0.0)
            per_pair[(i, utt)] += score
    assert all(total == 1.5 for total in per_pair.values())


def test_non_permutation_rejected_with_reason():
    rows = [
        ("e1", "u", "p2", 1), ("e1", "u", "p1", 1), ("e1", "u", "p0", 3),  # two rank-1s
        ("e2", "u", "p2", 1), ("e2", "u", "p1", 2), ("e2", "u", "p0", 3),
    ]
    aggregate, _ = aggregate_rank_scores(rows)
    assert len(aggregate.rejected) == 1
    assert "e1/u" in aggregate.rejected[0]
    assert len(aggregate.per_utterance[("u", "p2")].scores) == 1  # only e2 counted


def test_incomplete_triple_rejected():
    rows = [("e1", "u", "p2", 1), ("e1", "u", "p1", 2)]  # p0 missing
    aggregate, _ = aggregate_rank_scores(rows)
    assert len(aggregate.rejected) == 1
    assert aggregate.label_summary() == {}


def test_category_breakdown():
    rows = perfect_control_rows(3, 2)
    categories = {"u0": "possessive_determiner", "u1": "pronoun_subjective"}
    _, by_category = aggregate_rank_scores(rows, categories)
    assert set(by_category) == {"possessive_determiner", "pronoun_subjective"}
    assert by_category["possessive_determiner"]["p2"] == [1.0, 1.0, 1.0]


class TestCsv:
    def test_read_with_header(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text(
            "evaluator_id,utt_id,stimulus_label,rank\ne1,u1,p2,1\ne1,u1,p1,2\ne1,u1,p0,3\n",
            encoding="utf-8",
        )
        rows = read_rankings_csv(path)
        assert rows == [("e1", "u1", "p2", 1), ("e1", "u1", "p1", 2), ("e1", "u1", "p0", 3)]

    def test_bad_label_rejected(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text("e1,u1,p7,1\n", encoding="utf-8")
        with pytest.raises(RankingError):
            read_rankings_csv(path)

    def test_bad_column_count_rejected(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text("e1,u1,p2\n", encoding="utf-8")
        with pytest.raises(RankingError, match="4 columns"):
            read_rankings_csv(path)
