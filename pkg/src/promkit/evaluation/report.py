"""Model-comparison reports: JSON, aligned text tables, and figures.

The text table mirrors the shape of the usual results tables: per-model
P/R/F1 for the strong-prominence class plus totals, subset recalls where
pronoun subsets are supplied, and the upper-triangular McNemar p-value
matrix between models.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from promkit.corpus.renditions import PronounSubsets
from promkit.evaluation.metrics import MetricsReport, all_class_metrics, prf1
from promkit.evaluation.significance import McNemarResult, mcnemar_from_labels
from promkit.evaluation.subsets import subset_recalls
from promkit.labels import LABELS, P2
from promkit.models.predictions import PredictionSet

Key = tuple[str, int]


@dataclass
class ReportBundle:
    reports: list[MetricsReport]
    #: (model_id_a, model_id_b) -> McNemarResult, a before b in input order
    mcnemar_matrix: dict[tuple[str, str], McNemarResult] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "reports": [r.to_json() for r in self.reports],
            "mcnemar": [
                {
                    "model_a": a,
                    "model_b": b,
                    "b": res.b,
                    "c": res.c,
                    "statistic": res.statistic,
                    "p_value": res.p_value,
                    "method": res.method,
                }
                for (a, b), res in self.mcnemar_matrix.items()
            ],
        }


def compare_report(
    gold: dict[Key, str],
    prediction_sets: list[PredictionSet],
    subsets: PronounSubsets | None = None,
    binarize_mcnemar: bool = False,
) -> ReportBundle:
    if not prediction_sets:
        raise ValueError("at least one prediction set required")

    reports = []
    for preds in prediction_sets:
        (_, _, _), confusion = prf1(gold, preds.labels, focus=P2)
        report = MetricsReport(
            model_id=preds.model_id,
            context=preds.context,
            per_class=all_class_metrics(confusion),
            confusion=confusion,
            n_words=confusion.total,
            n_p2=confusion.gold_count(P2),
        )
        if subsets is not None:
            report.subset_recalls = subset_recalls(subsets, preds)
        reports.append(report)

    bundle = ReportBundle(reports=reports)
    for i, preds_a in enumerate(prediction_sets):
        for preds_b in prediction_sets[i + 1 :]:
            bundle.mcnemar_matrix[(preds_a.model_id, preds_b.model_id)] = mcnemar_from_labels(
                gold, preds_a.labels, preds_b.labels, binarize_p2=binarize_mcnemar
            )
    return bundle


def _format_table(rows: list[list[str]], header: list[str]) -> str:
    widths = [max(len(str(row[i])) for row in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(str(cell).ljust(w) for cell, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(str(cell).ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def format_text_report(bundle: ReportBundle) -> str:
    sections = []

    rows = []
    for r in bundle.reports:
        m = r.per_class[P2]
        rows.append([
            r.model_id, r.context,
            f"{m.f1:.3f}", f"{m.recall:.3f}", f"{m.precision:.3f}",
            f"{r.n_p2:,}", f"{r.n_words:,}",
        ])
    sections.append("== <p2> prominence prediction ==\n" + _format_table(
        rows, ["Model", "Context", "F1", "R", "P", "# p2 tags", "# words"]
    ))

    if any(r.subset_recalls for r in bundle.reports):
        rows = []
        for r in bundle.reports:
            sr = r.subset_recalls
            rows.append([
                r.model_id,
                *(f"{sr[key]:.3f}" if key in sr else "-" for key in ("maj@p2", "min@p2", "neg@p0")),
            ])
        sections.append("== pronoun subset recall ==\n" + _format_table(
            rows, ["Model", "Maj <p2> R", "Min <p2> R", "Neg <p0> R"]
        ))

    if bundle.mcnemar_matrix:
        rows = [
            [a, b, str(res.b), str(res.c), f"{res.statistic:.3f}", f"{res.p_value:.4g}", res.method]
            for (a, b), res in bundle.mcnemar_matrix.items()
        ]
        sections.append("== pairwise McNemar ==\n" + _format_table(
            rows, ["Model A", "Model B", "b", "c", "stat", "p", "method"]
        ))

    return "\n\n".join(sections) + "\n"


def render_report_figures(bundle: ReportBundle, out_dir: str | Path) -> list[Path]:
    """Grouped P/R/F1 bars for the p2 class, one group per model."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(max(4.0, 1.6 * len(bundle.reports)), 3.2))
    x = np.arange(len(bundle.reports))
    for offset, (name, attr) in enumerate(
        [("P", "precision"), ("R", "recall"), ("F1", "f1")]
    ):
        vals = [getattr(r.per_class[P2], attr) for r in bundle.reports]
        ax.bar(x + (offset - 1) * 0.25, vals, width=0.25, label=name)
    ax.set_xticks(x)
    ax.set_xticklabels([f"{r.model_id}\n({r.context})" for r in bundle.reports], fontsize=8)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("<p2> score")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    path = out_dir / "metrics_p2.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]


def render_rank_figure(per_label: dict[str, list[float]], path: str | Path) -> Path:
    """Listening-test score distributions: median lines and mean triangles."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = [lab for lab in LABELS if per_label.get(lab)]
    data = [per_label[lab] for lab in labels]
    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    ax.boxplot(data, tick_labels=[f"<{lab}>" for lab in labels], showmeans=True)
    ax.set_ylabel("prominence rank score")
    ax.set_ylim(-0.05, 1.05)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_report(
    bundle: ReportBundle, out_dir: str | Path, figures: bool = True
) -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {}
    json_path = out_dir / "report.json"
    json_path.write_text(json.dumps(bundle.to_json(), indent=2) + "\n", encoding="utf-8")
    paths["json"] = json_path
    text_path = out_dir / "report.txt"
    text_path.write_text(format_text_report(bundle), encoding="utf-8")
    paths["text"] = text_path
    if figures:
        for fig_path in render_report_figures(bundle, out_dir):
            paths[fig_path.stem] = fig_path
    return paths
