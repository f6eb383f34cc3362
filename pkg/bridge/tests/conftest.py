"""Fixtures: a local tiny pretrained checkpoint and corpora in the shared
formats."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest


@pytest.fixture(scope="session")
def tiny_pretrained(tmp_path_factory) -> str:
    """A local BERT-family checkpoint directory (random weights).

    Stands in for a downloaded pretrained model; its wordpiece vocabulary
    splits the fixture words (w0..w9 -> 'w' + '##d') so subword-to-word
    alignment is actually exercised.
    """
    from transformers import BertConfig, BertForTokenClassification

    out = tmp_path_factory.mktemp("tiny-pretrained")
    config = BertConfig(
        vocab_size=32, hidden_size=32, num_hidden_layers=2, num_attention_heads=2,
        intermediate_size=64, max_position_embeddings=128, num_labels=3,
    )
    import torch
    torch.manual_seed(1234)
    model = BertForTokenClassification(config)
    model.save_pretrained(out)

    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "w", "the", "and", "mine"]
    vocab += [f"##{d}" for d in range(10)]
    vocab += [f"fill{i}" for i in range(32 - len(vocab))]  # pad out to vocab_size
    (out / "vocab.txt").write_text("".join(v + "\n" for v in vocab), encoding="utf-8")

    from transformers import BertTokenizer
    tokenizer = BertTokenizer(str(out / "vocab.txt"), do_lower_case=True)
    tokenizer.save_pretrained(out)
    return str(out)


def write_corpus(root: Path, speakers=("s1",), n_sents=30, seed=17, chapter_breaks=()):
    """Positional-rule corpus in the shared formats.

    Words come from {w0..w9, the, and, mine}; the last word of every
    sentence is p2, the rest p0.  Returns (manifest, {speaker: labels_tsv},
    gold dict).
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    lexicon = [f"w{d}" for d in range(10)] + ["the", "and", "mine"]
    align_dir = root / "align"
    align_dir.mkdir(parents=True, exist_ok=True)

    renditions = []
    label_paths = {}
    gold = {}
    for speaker in speakers:
        entries = []
        label_rows = []
        chapter = 1
        for i in range(n_sents):
            if i in chapter_breaks:
                chapter += 1
            n = int(rng.integers(3, 7))
            words = [lexicon[int(rng.integers(len(lexicon)))] for _ in range(n)]
            utt_id = f"{speaker}_u{i}"
            rows = []
            t = 0.0
            for j, word in enumerate(words):
                rows.append(f"{utt_id}\t{j}\t{word}\tX\t{t:.6f}\t{t + 0.3:.6f}")
                t += 0.3
            align_rel = f"align/{utt_id}.tsv"
            (root / align_rel).write_text("".join(r + "\n" for r in rows), encoding="utf-8")
            entries.append({
                "utt_id": utt_id, "order": [1, chapter, i + 1],
                "audio": None, "alignment": align_rel,
            })
            for j, word in enumerate(words):
                lab = "p2" if j == n - 1 else "p0"
                gold[(utt_id, j)] = lab
                label_rows.append(f"{utt_id}\t{j}\t{word}\t0.000000\t{lab}")
        renditions.append({"speaker_id": speaker, "utterances": entries})
        labels_path = root / f"labels_{speaker}.tsv"
        labels_path.write_text("".join(r + "\n" for r in label_rows), encoding="utf-8")
        label_paths[speaker] = labels_path

    manifest = root / "manifest.json"
    manifest.write_text(
        json.dumps({"corpus_id": "fixture", "renditions": renditions}, indent=2),
        encoding="utf-8",
    )
    return manifest, label_paths, gold
