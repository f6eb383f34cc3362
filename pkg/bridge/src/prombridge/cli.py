"""`bridge finetune --config <json>`: train on labelled data, export
predictions in the shared TSV grammar.

Config keys: pretrained, train_manifest, train_labels (list of TSV paths),
predictions_out; optional eval_manifest (defaults to train_manifest),
weights_out, model_id, learning_rate, epochs, regime, batch_size,
max_length, seed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from prombridge.finetune import BridgeConfig, PretrainedUnavailable, finetune, predict
from prombridge.formats import FormatError, read_labels_tsv, read_manifest, write_predictions_tsv

log = logging.getLogger("prombridge")

EXIT_OK = 0
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_UNAVAILABLE = 69


def cmd_finetune(config_path: str) -> int:
    raw = json.loads(Path(config_path).read_text(encoding="utf-8"))
    try:
        pretrained = raw["pretrained"]
        train_manifest = raw["train_manifest"]
        label_paths = raw["train_labels"]
        predictions_out = raw["predictions_out"]
    except KeyError as exc:
        print(f"bridge: config missing required key {exc}", file=sys.stderr)
        return EXIT_USAGE

    config = BridgeConfig(
        pretrained=pretrained,
        learning_rate=float(raw.get("learning_rate", 5e-5)),
        epochs=int(raw.get("epochs", 3)),
        regime=raw.get("regime", "current"),
        label_alignment=raw.get("label_alignment", "first_subword"),
        batch_size=int(raw.get("batch_size", 16)),
        max_length=int(raw.get("max_length", 512)),
        seed=int(raw.get("seed", 0)),
    )

    renditions = read_manifest(train_manifest)
    gold: dict[tuple[str, int], str] = {}
    for path in label_paths:
        gold.update(read_labels_tsv(path))

    try:
        tokenizer, model = finetune(renditions, gold, config)
    except PretrainedUnavailable as exc:
        print(f"bridge: {exc}", file=sys.stderr)
        return EXIT_UNAVAILABLE

    weights_out = raw.get("weights_out")
    if weights_out:
        Path(weights_out).mkdir(parents=True, exist_ok=True)
        model.save_pretrained(weights_out)
        tokenizer.save_pretrained(weights_out)

    eval_manifest = raw.get("eval_manifest", train_manifest)
    eval_renditions = read_manifest(eval_manifest)
    predictions = predict(
        tokenizer, model, eval_renditions, config,
        model_id=raw.get("model_id", "finetuned_bridge"),
    )
    write_predictions_tsv(predictions, predictions_out)
    log.info("wrote %d predictions to %s", len(predictions.rows), predictions_out)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="bridge", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    p = sub.add_parser("finetune", help="fine-tune and export predictions")
    p.add_argument("--config", required=True, help="JSON config file")
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        return cmd_finetune(args.config)
    except (FormatError, FileNotFoundError, json.JSONDecodeError, ValueError) as exc:
        print(f"bridge: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
