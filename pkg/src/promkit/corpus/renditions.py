"""Cross-rendition word alignment and contrastive-pronoun subset extraction.

Renditions of a sentence are matched word-by-position after text
normalization.  Pronouns are then grouped by how many of the (at least
three) speakers realized them with strong prominence:

* ``maj``: at least 2 of 3 speakers labelled the pronoun p2,
* ``min``: exactly 1 of 3,
* ``neg``: all speakers labelled it p0.

Triples with no p2 but not all-p0 fall into no subset.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from promkit.corpus.alignment import WordToken
from promkit.corpus.lexicon import normalize_token
from promkit.corpus.manifest import Manifest, SentenceOrder
from promkit.labels import P0, P2, check_label

log = logging.getLogger(__name__)

AlignedRow = list[tuple[str, WordToken]]


def align_renditions(manifest: Manifest, order: SentenceOrder) -> list[AlignedRow] | None:
    """Match the words of sentence ``order`` across renditions by position.

    Returns one row per word, each row holding (speaker_id, WordToken) for
    every rendition containing the sentence.  Returns None (with a logged
    warning) when renditions disagree on token count after normalization:
    the sentence is excluded as textually divergent.
    """
    present = []
    for rend in manifest.renditions:
        utt = rend.utterance_for(order)
        if utt is not None:
            present.append((rend.speaker_id, utt))
    if len(present) < 2:
        raise ValueError(f"sentence {order}: insufficient renditions ({len(present)} < 2)")

    norm_texts = [[normalize_token(w.text) for w in utt.words] for _, utt in present]
    counts = {len(t) for t in norm_texts}
    if len(counts) != 1:
        log.warning("sentence %s excluded: renditions disagree on token count %s",
                    order, sorted(len(t) for t in norm_texts))
        return None
    reference = norm_texts[0]
    for (speaker_id, _), texts in zip(present[1:], norm_texts[1:]):
        if texts != reference:
            log.warning("sentence %s excluded: rendition %s diverges textually",
                        order, speaker_id)
            return None

    rows: list[AlignedRow] = []
    for i in range(len(reference)):
        rows.append([(speaker_id, utt.words[i]) for speaker_id, utt in present])
    return rows


def consensus_group(labels: list[str]) -> str | None:
    """Map one pronoun's per-speaker labels to maj/min/neg (or None)."""
    for lab in labels:
        check_label(lab)
    n_p2 = sum(1 for lab in labels if lab == P2)
    if n_p2 >= 2:
        return "maj"
    if n_p2 == 1:
        return "min"
    if all(lab == P0 for lab in labels):
        return "neg"
    return None


@dataclass(frozen=True)
class SubsetEntry:
    sentence_order: SentenceOrder
    word_idx: int
    word: str
    utt_ids: dict[str, str]  # speaker_id -> utt_id, for prediction-key lookup

    def to_json(self) -> dict:
        return {
            "order": list(self.sentence_order),
            "word_idx": self.word_idx,
            "word": self.word,
            "utt_ids": dict(sorted(self.utt_ids.items())),
        }

    @classmethod
    def from_json(cls, raw: dict) -> "SubsetEntry":
        return cls(
            sentence_order=tuple(raw["order"]),
            word_idx=int(raw["word_idx"]),
            word=raw["word"],
            utt_ids=dict(raw["utt_ids"]),
        )


@dataclass
class PronounSubsets:
    maj: list[SubsetEntry] = field(default_factory=list)
    min: list[SubsetEntry] = field(default_factory=list)
    neg: list[SubsetEntry] = field(default_factory=list)

    def save(self, path: str | Path) -> None:
        payload = {
            name: [e.to_json() for e in getattr(self, name)] for name in ("maj", "min", "neg")
        }
        Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "PronounSubsets":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(**{
            name: [SubsetEntry.from_json(e) for e in raw.get(name, [])]
            for name in ("maj", "min", "neg")
        })


def extract_pronoun_subsets(
    manifest: Manifest, labels: dict[str, dict[tuple[str, int], str]]
) -> PronounSubsets:
    """Build the maj/min/neg pronoun subsets from per-rendition labels.

    ``labels`` maps speaker_id -> {(utt_id, word_idx): label}.  Sentences
    with fewer than 3 renditions, or excluded by :func:`align_renditions`,
    are skipped.
    """
    subsets = PronounSubsets()
    for order in manifest.sentence_orders():
        present = [r for r in manifest.renditions if r.utterance_for(order) is not None]
        if len(present) < 3:
            continue
        rows = align_renditions(manifest, order)
        if rows is None:
            continue
        for word_idx, row in enumerate(rows):
            token = row[0][1]
            if not token.pos_class.is_pronoun():
                continue
            speaker_labels = []
            utt_ids = {}
            for speaker_id, word in row:
                utt = manifest.rendition(speaker_id).utterance_for(order)
                utt_ids[speaker_id] = utt.utt_id
                key = (utt.utt_id, word.index)
                try:
                    speaker_labels.append(labels[speaker_id][key])
                except KeyError as exc:
                    raise KeyError(
                        f"missing label for speaker {speaker_id}, utterance "
                        f"{utt.utt_id}, word {word.index}"
                    ) from exc
            group = consensus_group(speaker_labels)
            if group is not None:
                entry = SubsetEntry(
                    sentence_order=order, word_idx=word_idx, word=token.text, utt_ids=utt_ids
                )
                getattr(subsets, group).append(entry)
    return subsets
