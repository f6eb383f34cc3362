"""Training and inference for the from-scratch token classifier.

Single-threaded, fully deterministic given the config seed: shuffling and
dropout draw from generators derived from it, and batch order is fixed.
Checkpoints are a JSON + raw-binary pair (row-major little-endian float32
tensors) so reruns are byte-identical.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from promkit.corpus.context import ContextWindow, Regime
from promkit.labels import LABEL_TO_INDEX, LABELS
from promkit.models.predictions import PredictionSet
from promkit.models.transformer import TransformerConfig, TransformerModel
from promkit.models.vocab import Vocabulary

log = logging.getLogger(__name__)

CHECKPOINT_FORMAT_VERSION = 1


@dataclass(frozen=True)
class TrainingConfig:
    learning_rate: float = 5e-5
    batch_size: int = 16
    max_steps: int = 1000
    regime: str = "current"
    #: only "current_only" is implemented: context-sentence positions are
    #: conditioning, never targets, so their gold labels cannot leak
    loss_masking: str = "current_only"
    class_weights: tuple[float, float, float] | None = None
    log_every: int = 100

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError(f"learning rate must be positive, got {self.learning_rate}")
        if self.loss_masking != "current_only":
            raise ValueError(f"unsupported loss masking policy {self.loss_masking!r}")


@dataclass
class Checkpoint:
    model: TransformerModel
    vocab: Vocabulary
    model_id: str
    regime: str


class Example:
    __slots__ = ("ids", "loss_mask", "labels", "utt_id", "word_indices", "target_slice")

    def __init__(self, ids, loss_mask, labels, utt_id, word_indices, target_slice):
        self.ids = ids
        self.loss_mask = loss_mask
        self.labels = labels
        self.utt_id = utt_id
        self.word_indices = word_indices
        self.target_slice = target_slice


def encode_example(
    window: ContextWindow,
    vocab: Vocabulary,
    gold: dict[tuple[str, int], str] | None,
    max_positions: int,
) -> Example:
    ids = vocab.encode_window(window)
    start, end = window.target_start, window.target_end

    if len(ids) > max_positions:
        drop = len(ids) - max_positions
        if drop > start:
            raise ValueError(
                f"target span of {window.utt_id} alone exceeds max_positions={max_positions}"
            )
        log.warning("window %s exceeds %d positions; truncating %d leading context tokens",
                    window.utt_id, max_positions, drop)
        ids = ids[drop:]
        start -= drop
        end -= drop

    length = len(ids)
    loss_mask = np.zeros(length, dtype=bool)
    labels = np.zeros(length, dtype=np.int64)
    if gold is not None:
        for pos, word_idx in zip(range(start, end), window.target_word_indices):
            key = (window.utt_id, word_idx)
            if key not in gold:
                raise KeyError(f"no gold label for {key}")
            loss_mask[pos] = True
            labels[pos] = LABEL_TO_INDEX[gold[key]]
    return Example(
        ids=np.asarray(ids, dtype=np.int64),
        loss_mask=loss_mask,
        labels=labels,
        utt_id=window.utt_id,
        word_indices=tuple(window.target_word_indices),
        target_slice=(start, end),
    )


def _batchify(examples: list[Example], pad_id: int):
    length = max(len(ex.ids) for ex in examples)
    batch = len(examples)
    ids = np.full((batch, length), pad_id, dtype=np.int64)
    valid = np.zeros((batch, length), dtype=bool)
    loss_mask = np.zeros((batch, length), dtype=bool)
    labels = np.zeros((batch, length), dtype=np.int64)
    for i, ex in enumerate(examples):
        n = len(ex.ids)
        ids[i, :n] = ex.ids
        valid[i, :n] = True
        loss_mask[i, :n] = ex.loss_mask
        labels[i, :n] = ex.labels
    return ids, valid, loss_mask, labels


class Adam:
    def __init__(self, params: dict[str, np.ndarray], lr: float,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        self.t += 1
        bc1 = 1.0 - self.beta1**self.t
        bc2 = 1.0 - self.beta2**self.t
        for key, grad in grads.items():
            m = self.m[key]
            v = self.v[key]
            m *= self.beta1
            m += (1.0 - self.beta1) * grad
            v *= self.beta2
            v += (1.0 - self.beta2) * grad**2
            params[key] -= self.lr * (m / bc1) / (np.sqrt(v / bc2) + self.eps)


def train_transformer(
    windows: list[ContextWindow],
    gold: dict[tuple[str, int], str],
    model_config: TransformerConfig,
    training: TrainingConfig = TrainingConfig(),
    model_id: str = "transformer",
) -> Checkpoint:
    """Minimize mean cross-entropy over target-span positions."""
    if not windows:
        raise ValueError("no training windows")
    vocab = Vocabulary.build(windows)
    if model_config.vocab_size != len(vocab):
        model_config = TransformerConfig(**{**model_config.to_json(), "vocab_size": len(vocab)})
    model = TransformerModel(model_config)
    examples = [
        encode_example(w, vocab, gold, model_config.max_positions) for w in windows
    ]

    shuffle_rng = np.random.Generator(np.random.PCG64(model_config.seed + 1))
    dropout_rng = (
        np.random.Generator(np.random.PCG64(model_config.seed + 2))
        if model_config.dropout > 0
        else None
    )
    optimizer = Adam(model.params, lr=training.learning_rate)

    step = 0
    while step < training.max_steps:
        order = shuffle_rng.permutation(len(examples))
        for lo in range(0, len(order), training.batch_size):
            if step >= training.max_steps:
                break
            chunk = [examples[j] for j in order[lo : lo + training.batch_size]]
            ids, valid, loss_mask, labels = _batchify(chunk, vocab.pad_id)
            weights = None
            if training.class_weights is not None:
                weights = np.asarray(training.class_weights)[labels]
            loss, grads = model.loss_and_grads(
                ids, valid, loss_mask, labels, dropout_rng, weights=weights
            )
            optimizer.step(model.params, grads)
            step += 1
            if training.log_every and step % training.log_every == 0:
                log.info("step %d loss %.4f", step, loss)

    return Checkpoint(model=model, vocab=vocab, model_id=model_id, regime=training.regime)


def predict_transformer(
    checkpoint: Checkpoint,
    windows: list[ContextWindow],
    with_scores: bool = False,
) -> PredictionSet:
    """Argmax class per target word; deterministic."""
    regimes = {w.regime.value for w in windows}
    if regimes and regimes != {checkpoint.regime}:
        log.warning("prediction regime %s differs from training regime %s",
                    sorted(regimes), checkpoint.regime)

    predictions = PredictionSet(
        model_id=checkpoint.model_id,
        context=next(iter(regimes)) if len(regimes) == 1 else checkpoint.regime,
    )
    vocab = checkpoint.vocab
    model = checkpoint.model
    for window in windows:
        ex = encode_example(window, vocab, None, model.config.max_positions)
        ids = ex.ids[None, :]
        valid = np.ones_like(ids, dtype=bool)
        logits = model.predict_logits(ids, valid)[0]
        start, end = ex.target_slice
        for pos, word_idx in zip(range(start, end), ex.word_indices):
            row = logits[pos]
            label = LABELS[int(np.argmax(row))]
            scores = tuple(float(x) for x in row) if with_scores else None
            predictions.add(window.utt_id, word_idx, label, scores)
    return predictions


def _tensor_entries(params: dict[str, np.ndarray]) -> list[tuple[str, np.ndarray]]:
    return sorted(params.items())


def save_checkpoint(checkpoint: Checkpoint, stem: str | Path) -> tuple[Path, Path]:
    """Write <stem>.json (config/vocab/manifest) and <stem>.bin (f32 LE)."""
    stem = Path(stem)
    json_path = stem.with_suffix(".json")
    bin_path = stem.with_suffix(".bin")

    manifest = []
    offset = 0
    blobs = []
    for name, tensor in _tensor_entries(checkpoint.model.params):
        data = np.ascontiguousarray(tensor, dtype="<f4").tobytes()
        manifest.append({"name": name, "shape": list(tensor.shape), "offset": offset})
        offset += len(data)
        blobs.append(data)

    meta = {
        "format_version": CHECKPOINT_FORMAT_VERSION,
        "model_id": checkpoint.model_id,
        "regime": checkpoint.regime,
        "config": checkpoint.model.config.to_json(),
        "vocab": list(checkpoint.vocab.tokens),
        "tensors": manifest,
    }
    json_path.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    bin_path.write_bytes(b"".join(blobs))
    return json_path, bin_path


def load_checkpoint(stem: str | Path) -> Checkpoint:
    stem = Path(stem)
    json_path = stem if stem.suffix == ".json" else stem.with_suffix(".json")
    bin_path = json_path.with_suffix(".bin")
    meta = json.loads(json_path.read_text(encoding="utf-8"))
    if meta.get("format_version") != CHECKPOINT_FORMAT_VERSION:
        raise ValueError(f"unsupported checkpoint format {meta.get('format_version')!r}")

    blob = bin_path.read_bytes()
    params = {}
    for entry in meta["tensors"]:
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        start = entry["offset"]
        arr = np.frombuffer(blob, dtype="<f4", count=count, offset=start)
        params[entry["name"]] = arr.reshape(shape).astype(np.float64)

    config = TransformerConfig.from_json(meta["config"])
    model = TransformerModel(config, params=params)
    vocab = Vocabulary(tokens=tuple(meta["vocab"]))
    return Checkpoint(model=model, vocab=vocab, model_id=meta["model_id"], regime=meta["regime"])
