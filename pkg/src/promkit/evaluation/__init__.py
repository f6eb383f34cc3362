from promkit.evaluation.metrics import ConfusionCounts, MetricsReport, prf1, prf1_from_lists
from promkit.evaluation.significance import McNemarResult, mcnemar, mcnemar_from_labels
from promkit.evaluation.agreement import KappaResult, cohen_kappa, pairwise_kappa
from promkit.evaluation.subsets import subset_recall, subset_recalls
from promkit.evaluation.ranking import RankingError, RankScore, aggregate_rank_scores, read_rankings_csv
from promkit.evaluation.report import compare_report, render_report_figures, write_report

__all__ = [
    "ConfusionCounts",
    "MetricsReport",
    "prf1",
    "prf1_from_lists",
    "McNemarResult",
    "mcnemar",
    "mcnemar_from_labels",
    "KappaResult",
    "cohen_kappa",
    "pairwise_kappa",
    "RankingError",
    "RankScore",
    "aggregate_rank_scores",
    "read_rankings_csv",
    "subset_recall",
    "subset_recalls",
    "compare_report",
    "render_report_figures",
    "write_report",
]
