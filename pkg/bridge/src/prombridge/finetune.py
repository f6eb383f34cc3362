"""Fine-tuning a pretrained token classifier on prominence labels.

Inputs are assembled per context regime as
``[CLS] prev-2 [SEP] prev-1 [SEP] current [SEP]`` (previous sentences only
within the same chapter).  Each word is tokenized separately; its first
subword carries the word label and continuation subwords are masked from
the loss (-100), so there is exactly one prediction per current-sentence
word regardless of segmentation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import torch

from prombridge.formats import LABELS, Predictions, Rendition, Sentence

log = logging.getLogger(__name__)

LABEL_TO_ID = {lab: i for i, lab in enumerate(LABELS)}
IGNORE = -100

REGIMES = ("current", "plus1", "plus2")


class PretrainedUnavailable(RuntimeError):
    """The pretrained checkpoint could not be loaded; nothing was written."""


@dataclass(frozen=True)
class BridgeConfig:
    pretrained: str
    learning_rate: float = 5e-5
    epochs: int = 3
    regime: str = "current"
    label_alignment: str = "first_subword"
    batch_size: int = 16
    max_length: int = 512
    seed: int = 0

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ValueError(f"regime must be one of {REGIMES}, got {self.regime!r}")
        if self.label_alignment != "first_subword":
            raise ValueError(f"unsupported label alignment {self.label_alignment!r}")


def load_pretrained(identifier: str, num_labels: int = 3):
    """Tokenizer + token-classification model, or a clear diagnostic."""
    from transformers import AutoModelForTokenClassification, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(identifier, use_fast=False)
        model = AutoModelForTokenClassification.from_pretrained(
            identifier, num_labels=num_labels
        )
    except Exception as exc:
        raise PretrainedUnavailable(
            f"pretrained weights {identifier!r} unavailable: {exc}. "
            "Pass a local checkpoint directory or a reachable model identifier."
        ) from exc
    return tokenizer, model


def context_sentences(rendition: Rendition, index: int, regime: str) -> list[Sentence]:
    """Up to two preceding sentences of the same book+chapter, then current."""
    n_prev = {"current": 0, "plus1": 1, "plus2": 2}[regime]
    current = rendition.sentences[index]
    out = []
    for j in range(max(0, index - n_prev), index):
        if rendition.sentences[j].order[:2] == current.order[:2]:
            out.append(rendition.sentences[j])
    out.append(current)
    return out


@dataclass
class Encoded:
    input_ids: list[int]
    labels: list[int]
    #: (token position, word idx) for each current-sentence word's first subword
    word_positions: list[tuple[int, int]]
    utt_id: str


def encode_window(
    tokenizer, rendition: Rendition, index: int, regime: str,
    gold: dict[tuple[str, int], str] | None, max_length: int,
) -> Encoded:
    sentences = context_sentences(rendition, index, regime)
    current = sentences[-1]

    cls_id = tokenizer.cls_token_id
    sep_id = tokenizer.sep_token_id
    ids = [cls_id]
    labels = [IGNORE]
    word_positions: list[tuple[int, int]] = []

    for sentence in sentences:
        is_current = sentence is current
        for word_idx, word in enumerate(sentence.words):
            pieces = tokenizer.tokenize(word) or [tokenizer.unk_token]
            piece_ids = tokenizer.convert_tokens_to_ids(pieces)
            for k, piece_id in enumerate(piece_ids):
                ids.append(piece_id)
                if is_current and k == 0:
                    if gold is not None:
                        labels.append(LABEL_TO_ID[gold[(current.utt_id, word_idx)]])
                    else:
                        labels.append(IGNORE)
                    word_positions.append((len(ids) - 1, word_idx))
                else:
                    labels.append(IGNORE)
        ids.append(sep_id)
        labels.append(IGNORE)

    if len(ids) > max_length:
        # drop leading context (never the [CLS] or the current span)
        drop = len(ids) - max_length
        first_word_pos = word_positions[0][0]
        if drop >= first_word_pos:
            raise ValueError(f"current sentence of {current.utt_id} exceeds max_length")
        log.warning("window %s truncated by %d leading tokens", current.utt_id, drop)
        ids = [cls_id] + ids[1 + drop :]
        labels = [IGNORE] + labels[1 + drop :]
        word_positions = [(pos - drop, w) for pos, w in word_positions]

    return Encoded(input_ids=ids, labels=labels, word_positions=word_positions,
                   utt_id=current.utt_id)


def _batches(encoded: list[Encoded], batch_size: int, pad_id: int, shuffle_seed=None):
    order = list(range(len(encoded)))
    if shuffle_seed is not None:
        gen = torch.Generator().manual_seed(shuffle_seed)
        order = torch.randperm(len(encoded), generator=gen).tolist()
    for lo in range(0, len(order), batch_size):
        chunk = [encoded[i] for i in order[lo : lo + batch_size]]
        width = max(len(e.input_ids) for e in chunk)
        input_ids = torch.full((len(chunk), width), pad_id, dtype=torch.long)
        attention = torch.zeros((len(chunk), width), dtype=torch.long)
        labels = torch.full((len(chunk), width), IGNORE, dtype=torch.long)
        for row, enc in enumerate(chunk):
            n = len(enc.input_ids)
            input_ids[row, :n] = torch.tensor(enc.input_ids)
            attention[row, :n] = 1
            labels[row, :n] = torch.tensor(enc.labels)
        yield chunk, input_ids, attention, labels


def finetune(
    renditions: list[Rendition],
    gold: dict[tuple[str, int], str],
    config: BridgeConfig,
):
    """Train the token-classification head (and body) on prominence labels."""
    torch.manual_seed(config.seed)
    tokenizer, model = load_pretrained(config.pretrained)
    device = torch.device("cpu")
    model.to(device)
    model.train()

    encoded = [
        encode_window(tokenizer, rend, i, config.regime, gold, config.max_length)
        for rend in renditions
        for i in range(len(rend.sentences))
    ]
    if not encoded:
        raise ValueError("no training sentences")

    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate)
    for epoch in range(config.epochs):
        total = 0.0
        n_batches = 0
        for _, input_ids, attention, labels in _batches(
            encoded, config.batch_size, tokenizer.pad_token_id, shuffle_seed=config.seed + epoch
        ):
            out = model(input_ids=input_ids, attention_mask=attention, labels=labels)
            optimizer.zero_grad()
            out.loss.backward()
            optimizer.step()
            total += out.loss.item()
            n_batches += 1
        log.info("epoch %d mean loss %.4f", epoch + 1, total / max(1, n_batches))

    model.eval()
    return tokenizer, model


def predict(
    tokenizer, model, renditions: list[Rendition], config: BridgeConfig, model_id: str
) -> Predictions:
    """One prediction per current-sentence word, first-subword aligned."""
    predictions = Predictions(model_id=model_id, context=config.regime)
    model.eval()
    with torch.no_grad():
        for rendition in renditions:
            encoded = [
                encode_window(tokenizer, rendition, i, config.regime, None, config.max_length)
                for i in range(len(rendition.sentences))
            ]
            for chunk, input_ids, attention, _ in _batches(
                encoded, config.batch_size, tokenizer.pad_token_id
            ):
                logits = model(input_ids=input_ids, attention_mask=attention).logits
                for row, enc in enumerate(chunk):
                    for pos, word_idx in enc.word_positions:
                        label = LABELS[int(torch.argmax(logits[row, pos]))]
                        predictions.add(enc.utt_id, word_idx, label)
    return predictions
