"""End-to-end prominence annotation of a corpus manifest.

Per utterance: audio -> f0/energy/duration tracks -> composite signal ->
CWT -> LoMA -> word scores.  Scores are pooled per rendition to fit the
quantizer (or labelled with persisted thresholds), then written to one
labels TSV per rendition::

    utt_id<TAB>word_idx<TAB>word<TAB>score<TAB>label

with a threshold sidecar JSON next to each file.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from promkit.acoustics.duration import DurationUnit, build_duration_signal
from promkit.acoustics.energy import EnergyConfig, extract_energy
from promkit.acoustics.pitch import PitchConfig, estimate_f0
from promkit.acoustics.tracks import CompositeSignal, combine_composite
from promkit.acoustics.waveio import AudioError, read_wav, resample
from promkit.corpus.manifest import Manifest, Utterance
from promkit.labels import check_label
from promkit.prominence.cwt import cwt, default_scales
from promkit.prominence.loma import LomaConfig, trace_loma
from promkit.prominence.quantize import QuantizerConfig, Thresholds, apply_thresholds, fit_thresholds
from promkit.prominence.scoring import score_words

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnnotateConfig:
    analysis_rate: int = 16000
    hop_s: float = 0.010
    pitch: PitchConfig = field(default_factory=PitchConfig)
    energy: EnergyConfig = field(default_factory=EnergyConfig)
    duration_unit: DurationUnit = DurationUnit.PHONE
    duration_smooth_frames: int = 5
    component_weights: tuple[float, float, float] = (1.0, 1.0, 1.0)
    scales_s: tuple[float, ...] = tuple(default_scales())
    loma: LomaConfig = field(default_factory=LomaConfig)
    quantizer: QuantizerConfig = field(default_factory=QuantizerConfig)
    final_word_attenuation: float = 1.0


@dataclass
class ProminenceAnnotation:
    """Scores and labels for one rendition, keyed by (utt_id, word_idx)."""

    speaker_id: str
    rows: list[tuple[str, int, str, float, str]] = field(default_factory=list)

    def label_map(self) -> dict[tuple[str, int], str]:
        return {(utt_id, idx): label for utt_id, idx, _, _, label in self.rows}

    def score_map(self) -> dict[tuple[str, int], float]:
        return {(utt_id, idx): score for utt_id, idx, _, score, _ in self.rows}


def annotate_utterance(utterance: Utterance, config: AnnotateConfig = AnnotateConfig()) -> list[float]:
    """Word scores for one utterance; raises on unreadable/missing audio."""
    if utterance.audio_ref is None:
        raise AudioError(f"utterance {utterance.utt_id} has no audio")
    wave = read_wav(utterance.audio_ref.path)
    wave = resample(wave, config.analysis_rate)

    f0 = estimate_f0(wave, config.pitch)
    energy = extract_energy(wave, config.energy)
    duration = build_duration_signal(
        list(utterance.words),
        hop_s=config.hop_s,
        unit=config.duration_unit,
        n_frames=len(f0),
        smooth_frames=config.duration_smooth_frames,
    )
    composite = combine_composite([f0, energy, duration], config.component_weights)
    # utterances shorter than the coarsest scale: mirror-extend the tail so
    # the transform stays defined; padded-region lines end past every word
    min_frames = math.ceil(max(config.scales_s) / config.hop_s)
    if len(composite.values) < min_frames:
        extended = np.pad(
            composite.values, (0, min_frames - len(composite.values)), mode="reflect"
        )
        composite = CompositeSignal(
            values=extended, hop_s=composite.hop_s,
            component_weights=composite.component_weights,
        )
    space = cwt(composite, list(config.scales_s))
    lines = trace_loma(space, config.loma)
    return score_words(
        lines, list(utterance.words), config.hop_s,
        final_word_attenuation=config.final_word_attenuation,
    )


def _scores_for_utterance(args) -> tuple[str, list[float] | None, str | None]:
    utterance, config = args
    try:
        return utterance.utt_id, annotate_utterance(utterance, config), None
    except (AudioError, ValueError) as exc:
        return utterance.utt_id, None, str(exc)


def annotate_corpus(
    manifest: Manifest,
    config: AnnotateConfig = AnnotateConfig(),
    thresholds: Thresholds | None = None,
    jobs: int = 1,
) -> tuple[dict[str, ProminenceAnnotation], dict[str, Thresholds], list[str]]:
    """Annotate every rendition of the manifest.

    Returns (annotations per speaker, thresholds per speaker, failures).
    Utterances whose audio cannot be processed are logged and skipped; the
    failure list carries one entry per skipped utterance.
    """
    annotations: dict[str, ProminenceAnnotation] = {}
    fitted: dict[str, Thresholds] = {}
    failures: list[str] = []

    for rendition in manifest.renditions:
        work = [(utt, config) for utt in rendition.utterances]
        if jobs > 1 and len(work) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_scores_for_utterance, work))
        else:
            results = [_scores_for_utterance(item) for item in work]

        per_utt: dict[str, list[float]] = {}
        for utt_id, scores, error in results:
            if error is not None:
                log.warning("skipping utterance %s: %s", utt_id, error)
                failures.append(f"{rendition.speaker_id}/{utt_id}: {error}")
            else:
                per_utt[utt_id] = scores

        all_scores = [s for utt in rendition.utterances for s in per_utt.get(utt.utt_id, [])]
        if thresholds is not None:
            rend_thresholds = thresholds
        elif all_scores:
            rend_thresholds = fit_thresholds(all_scores, config.quantizer)
        else:
            rend_thresholds = None

        annotation = ProminenceAnnotation(speaker_id=rendition.speaker_id)
        for utt in rendition.utterances:
            scores = per_utt.get(utt.utt_id)
            if scores is None:
                continue
            labels = apply_thresholds(scores, rend_thresholds)
            for word, score, label in zip(utt.words, scores, labels):
                annotation.rows.append((utt.utt_id, word.index, word.text, score, label))
        annotations[rendition.speaker_id] = annotation
        if rend_thresholds is not None:
            fitted[rendition.speaker_id] = rend_thresholds

    return annotations, fitted, failures


def write_labels_tsv(annotation: ProminenceAnnotation, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for utt_id, word_idx, word, score, label in annotation.rows:
            fh.write(f"{utt_id}\t{word_idx}\t{word}\t{score:.6f}\t{label}\n")


def read_labels_tsv(path: str | Path, speaker_id: str | None = None) -> ProminenceAnnotation:
    path = Path(path)
    annotation = ProminenceAnnotation(speaker_id=speaker_id or path.stem)
    seen: set[tuple[str, int]] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise ValueError(f"{path}:{lineno}: expected 5 columns, got {len(parts)}")
            utt_id, word_idx, word, score, label = parts
            try:
                row = (utt_id, int(word_idx), word, float(score), check_label(label))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
            if (row[0], row[1]) in seen:
                raise ValueError(f"{path}:{lineno}: duplicate key ({utt_id}, {word_idx})")
            seen.add((row[0], row[1]))
            annotation.rows.append(row)
    return annotation
