"""Command-line entry point.

Subcommands: annotate, subsets, train, predict, evaluate, compare,
rank-agg.  Exit codes: 0 success, 2 partial failure, 64 usage error,
65 data format error.
"""

from __future__ import annotations

import argparse
import json
import logging
import statistics
import sys
from pathlib import Path

from promkit.config import (
    ConfigError,
    annotate_config,
    echo_effective_config,
    load_config_file,
    training_config,
    transformer_config,
)
from promkit.corpus.alignment import AlignmentError
from promkit.corpus.context import Regime, iter_context_windows
from promkit.corpus.manifest import Manifest, ManifestError, load_manifest
from promkit.corpus.renditions import PronounSubsets, extract_pronoun_subsets
from promkit.evaluation.ranking import RankingError, aggregate_rank_scores, read_rankings_csv
from promkit.evaluation.report import compare_report, render_rank_figure, write_report
from promkit.models.majority import WordStats, fit_majority, predict_majority
from promkit.models.predictions import import_predictions, export_predictions
from promkit.models.training import (
    TrainingConfig,
    load_checkpoint,
    predict_transformer,
    save_checkpoint,
    train_transformer,
)
from promkit.prominence.annotate import annotate_corpus, read_labels_tsv, write_labels_tsv
from promkit.prominence.quantize import Thresholds

log = logging.getLogger("promkit")

EXIT_OK = 0
EXIT_PARTIAL = 2
EXIT_USAGE = 64
EXIT_DATA = 65


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _speaker_paths(values: list[str]) -> dict[str, Path]:
    """Parse repeated speaker=path (or bare path, keyed by file stem)."""
    out: dict[str, Path] = {}
    for value in values:
        if "=" in value:
            speaker, _, path = value.partition("=")
        else:
            speaker, path = Path(value).stem, value
        if speaker in out:
            raise ConfigError(f"duplicate labels for speaker {speaker!r}")
        out[speaker] = Path(path)
    return out


def _load_gold(values: list[str]) -> dict[tuple[str, int], str]:
    gold: dict[tuple[str, int], str] = {}
    for speaker, path in _speaker_paths(values).items():
        annotation = read_labels_tsv(path, speaker_id=speaker)
        for key, label in annotation.label_map().items():
            if key in gold:
                raise ConfigError(f"duplicate gold key {key} (labels files overlap)")
            gold[key] = label
    return gold


def _windows_for(manifest: Manifest, regime: str, renditions: list[str] | None):
    windows = []
    for rendition in manifest.renditions:
        if renditions and rendition.speaker_id not in renditions:
            continue
        windows.extend(iter_context_windows(rendition, Regime(regime)))
    return windows


def cmd_annotate(args) -> int:
    cfg_raw = load_config_file(args.config)
    config = annotate_config(cfg_raw.get("annotate", cfg_raw))
    # lenient: a missing/corrupt audio file skips its utterance (exit 2)
    # instead of failing the whole run
    manifest = load_manifest(args.manifest, strict_audio=False)
    thresholds = Thresholds.load(args.thresholds) if args.thresholds else None

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    annotations, fitted, failures = annotate_corpus(
        manifest, config, thresholds=thresholds, jobs=args.jobs
    )
    for speaker_id, annotation in annotations.items():
        write_labels_tsv(annotation, out_dir / f"labels_{speaker_id}.tsv")
        if speaker_id in fitted:
            fitted[speaker_id].save(out_dir / f"thresholds_{speaker_id}.json")
    echo_effective_config(out_dir, "run_config.json", {
        "subcommand": "annotate",
        "config": config,
        "manifest": str(args.manifest),
        "reused_thresholds": str(args.thresholds) if args.thresholds else None,
    })
    if failures:
        log.warning("%d utterance(s) skipped", len(failures))
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_subsets(args) -> int:
    manifest = load_manifest(args.manifest)
    labels = {
        speaker: read_labels_tsv(path, speaker_id=speaker).label_map()
        for speaker, path in _speaker_paths(args.labels).items()
    }
    subsets = extract_pronoun_subsets(manifest, labels)
    subsets.save(args.out)
    log.info("maj=%d min=%d neg=%d", len(subsets.maj), len(subsets.min), len(subsets.neg))
    return EXIT_OK


def cmd_train(args) -> int:
    cfg_raw = load_config_file(args.config)

    if args.model == "majority":
        annotations = [
            read_labels_tsv(path, speaker_id=speaker)
            for speaker, path in _speaker_paths(args.labels).items()
        ]
        stats = fit_majority(annotations)
        stats.save(args.out, model_id=args.model_id or "word_majority")
        return EXIT_OK

    if not args.manifest:
        print("promkit train: --manifest is required for the transformer", file=sys.stderr)
        return EXIT_USAGE
    manifest = load_manifest(args.manifest)
    speaker_labels = _speaker_paths(args.labels)
    gold = _load_gold(args.labels)
    windows = _windows_for(manifest, args.regime, list(speaker_labels) or None)

    model_raw = dict(cfg_raw.get("model", {}))
    if args.seed is not None:
        model_raw["seed"] = args.seed
    model_cfg = transformer_config(model_raw)

    train_raw = dict(cfg_raw.get("training", {}))
    train_raw["regime"] = args.regime
    if args.learning_rate is not None:
        train_raw["learning_rate"] = args.learning_rate
    if args.max_steps is not None:
        train_raw["max_steps"] = args.max_steps
    if args.batch_size is not None:
        train_raw["batch_size"] = args.batch_size
    train_cfg = training_config(train_raw)

    checkpoint = train_transformer(
        windows, gold, model_cfg, train_cfg, model_id=args.model_id or "transformer"
    )
    json_path, _ = save_checkpoint(checkpoint, args.out)
    echo_effective_config(json_path.parent, json_path.stem + ".run_config.json", {
        "subcommand": "train",
        "model": checkpoint.model.config,
        "training": train_cfg,
        "manifest": str(args.manifest),
        "labels": {k: str(v) for k, v in speaker_labels.items()},
    })
    return EXIT_OK


def _sniff_model(path: Path):
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if "tensors" in raw:
        return "transformer"
    if "counts" in raw:
        return "majority"
    raise ConfigError(f"{path}: neither a checkpoint nor a majority stats file")


def cmd_predict(args) -> int:
    manifest = load_manifest(args.manifest)
    windows = _windows_for(manifest, args.regime, args.rendition or None)
    model_path = Path(args.model_path)
    kind = _sniff_model(model_path if model_path.suffix == ".json" else model_path.with_suffix(".json"))
    if kind == "majority":
        stats, model_id = WordStats.load(model_path)
        predictions = predict_majority(stats, windows, model_id=args.model_id or model_id)
    else:
        checkpoint = load_checkpoint(model_path)
        if args.model_id:
            checkpoint.model_id = args.model_id
        predictions = predict_transformer(checkpoint, windows)
    export_predictions(predictions, args.out)
    return EXIT_OK


def _report_for(args, prediction_paths: list[str], subcommand: str) -> int:
    gold = _load_gold(args.gold)
    prediction_sets = [import_predictions(path) for path in prediction_paths]
    subsets = PronounSubsets.load(args.subsets) if args.subsets else None
    bundle = compare_report(
        gold, prediction_sets, subsets=subsets, binarize_mcnemar=args.binarize_mcnemar
    )
    paths = write_report(bundle, args.out, figures=not args.no_figures)
    echo_effective_config(Path(args.out), "run_config.json", {
        "subcommand": subcommand,
        "gold": list(args.gold),
        "predictions": list(prediction_paths),
        "subsets": str(args.subsets) if args.subsets else None,
        "binarize_mcnemar": args.binarize_mcnemar,
    })
    print((Path(args.out) / "report.txt").read_text(encoding="utf-8"))
    log.info("report written to %s", paths["json"])
    return EXIT_OK


def cmd_evaluate(args) -> int:
    return _report_for(args, [args.pred], "evaluate")


def cmd_compare(args) -> int:
    return _report_for(args, args.pred, "compare")


def cmd_rank_agg(args) -> int:
    rows = read_rankings_csv(args.rankings)
    categories = None
    if args.categories:
        categories = json.loads(Path(args.categories).read_text(encoding="utf-8"))
    aggregate, by_category = aggregate_rank_scores(rows, categories)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = aggregate.label_summary()
    if not summary:
        print("no valid ranking triples", file=sys.stderr)
        return EXIT_DATA

    with open(out_dir / "rank_summary.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("label\tn\tmean\tmedian\n")
        for label, stats in summary.items():
            fh.write(f"{label}\t{stats['n']}\t{stats['mean']:.6f}\t{stats['median']:.6f}\n")
    with open(out_dir / "rank_per_utterance.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("utt_id\tlabel\tn\tmean\tmedian\n")
        for (utt_id, label), rs in sorted(aggregate.per_utterance.items()):
            fh.write(f"{utt_id}\t{label}\t{len(rs.scores)}\t{rs.mean:.6f}\t{rs.median:.6f}\n")
    if by_category:
        with open(out_dir / "rank_by_category.tsv", "w", encoding="utf-8", newline="\n") as fh:
            fh.write("category\tlabel\tn\tmean\tmedian\n")
            for category in sorted(by_category):
                for label, scores in by_category[category].items():
                    if scores:
                        fh.write(
                            f"{category}\t{label}\t{len(scores)}"
                            f"\t{statistics.fmean(scores):.6f}\t{statistics.median(scores):.6f}\n"
                        )
    if not args.no_figures:
        render_rank_figure(aggregate.per_label, out_dir / "rank_scores.png")
    if aggregate.rejected:
        (out_dir / "rejected_rows.log").write_text(
            "".join(line + "\n" for line in aggregate.rejected), encoding="utf-8"
        )
        log.warning("%d ranking triple(s) rejected", len(aggregate.rejected))
        return EXIT_PARTIAL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="promkit", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    # shared parent so -v is accepted after the subcommand as well
    common = _Parser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def add_parser(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add_parser("annotate", help="annotate a manifest with prominence labels")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("--thresholds", default=None, help="reuse persisted quantizer thresholds")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_annotate)

    p = add_parser("subsets", help="extract consensus pronoun subsets")
    p.add_argument("--manifest", required=True)
    p.add_argument("--labels", action="append", required=True,
                   help="speaker=labels.tsv (repeat per rendition)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_subsets)

    p = add_parser("train", help="train a predictor")
    p.add_argument("--model", choices=("majority", "transformer"), required=True)
    p.add_argument("--labels", action="append", required=True)
    p.add_argument("--manifest", help="required for the transformer")
    p.add_argument("--regime", choices=("current", "plus1", "plus2"), default="current")
    p.add_argument("--out", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--learning-rate", type=float, default=None)
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--batch-size", type=int, default=None)
    p.add_argument("--model-id", default=None)
    p.set_defaults(func=cmd_train)

    p = add_parser("predict", help="predict labels for a manifest")
    p.add_argument("--model-path", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--rendition", action="append", default=None,
                   help="restrict to these renditions (repeatable)")
    p.add_argument("--regime", choices=("current", "plus1", "plus2"), default="current")
    p.add_argument("--model-id", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)

    for name, multi in (("evaluate", False), ("compare", True)):
        p = add_parser(name, help=f"{name} prediction set(s) against gold labels")
        p.add_argument("--gold", action="append", required=True,
                       help="speaker=labels.tsv (repeat per rendition)")
        if multi:
            p.add_argument("--pred", action="append", required=True)
        else:
            p.add_argument("--pred", required=True)
        p.add_argument("--subsets", default=None)
        p.add_argument("--binarize-mcnemar", action="store_true")
        p.add_argument("--out", required=True)
        p.add_argument("--no-figures", action="store_true")
        p.set_defaults(func=cmd_evaluate if not multi else cmd_compare)

    p = add_parser("rank-agg", help="aggregate listening-test rankings")
    p.add_argument("--rankings", required=True, help="CSV: evaluator_id,utt_id,label,rank")
    p.add_argument("--categories", default=None, help="JSON: utt_id -> pronoun category")
    p.add_argument("--out", required=True)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_rank_agg)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (ManifestError, AlignmentError, RankingError, ConfigError) as exc:
        print(f"promkit: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"promkit: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"promkit: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
