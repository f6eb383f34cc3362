"""Frame-rate feature tracks and their fusion into the composite signal."""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)


class TrackKind(str, enum.Enum):
    F0_LOG = "f0_log"
    ENERGY_LOG = "energy_log"
    DURATION = "duration"


@dataclass(frozen=True)
class FrameTrack:
    values: np.ndarray
    hop_s: float
    kind: TrackKind

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise ValueError(f"{self.kind.value} track contains non-finite values")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class CompositeSignal:
    values: np.ndarray
    hop_s: float
    component_weights: tuple[float, float, float]

    def __len__(self) -> int:
        return len(self.values)


def n_frames_for(n_samples: int, sample_rate: int, hop_s: float) -> int:
    """ceil(duration / hop): every sample belongs to some frame start."""
    hop = int(round(hop_s * sample_rate))
    return max(1, math.ceil(n_samples / hop))


def frame_view(samples: np.ndarray, frame_len: int, hop_len: int, n_frames: int) -> np.ndarray:
    """(n_frames, frame_len) matrix of frames starting at i*hop, zero-padded."""
    needed = (n_frames - 1) * hop_len + frame_len
    padded = np.zeros(needed, dtype=np.float64)
    padded[: len(samples)] = samples[: min(len(samples), needed)]
    idx = np.arange(n_frames)[:, None] * hop_len + np.arange(frame_len)[None, :]
    return padded[idx]


def standardize(values: np.ndarray) -> tuple[np.ndarray, bool]:
    """Zero-mean unit-variance scaling; flags (and zeroes) degenerate input."""
    values = np.asarray(values, dtype=np.float64)
    std = float(values.std())
    if std < 1e-12:
        return np.zeros_like(values), True
    return (values - values.mean()) / std, False


def combine_composite(
    tracks: list[FrameTrack], weights: tuple[float, float, float] = (1.0, 1.0, 1.0)
) -> CompositeSignal:
    """Standardize each track, take the weighted sum, and re-standardize.

    Zero-variance tracks are replaced by zeros with a warning; if the sum
    itself is degenerate the composite is all zeros (warned).
    """
    if len(tracks) != 3 or len(weights) != 3:
        raise ValueError("exactly three tracks and three weights required")
    lengths = {len(t) for t in tracks}
    hops = {t.hop_s for t in tracks}
    if len(lengths) != 1 or len(hops) != 1:
        raise ValueError(f"track length/hop mismatch: lengths={sorted(lengths)} hops={sorted(hops)}")

    total = np.zeros(lengths.pop(), dtype=np.float64)
    for track, weight in zip(tracks, weights):
        z, degenerate = standardize(track.values)
        if degenerate:
            log.warning("zero-variance %s track replaced by zeros", track.kind.value)
        total += weight * z
    combined, degenerate = standardize(total)
    if degenerate:
        log.warning("composite signal has zero variance; returning zeros")
    return CompositeSignal(values=combined, hop_s=hops.pop(), component_weights=tuple(weights))


def dump_track(values: np.ndarray, path: str | Path) -> None:
    """Debug TSV: frame_idx<TAB>value."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i, v in enumerate(values):
            fh.write(f"{i}\t{v:.6f}\n")
