"""Frame energy: log RMS over Hann-windowed frames."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from promkit.acoustics.tracks import FrameTrack, TrackKind, frame_view, n_frames_for
from promkit.acoustics.waveio import Waveform


@dataclass(frozen=True)
class EnergyConfig:
    frame_s: float = 0.040
    hop_s: float = 0.010
    silence_floor: float = 1e-4  # RMS amplitude floor before the log


def hann_window(length: int) -> np.ndarray:
    """Periodic Hann window; its mean square is exactly 3/8 for length > 2."""
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(length) / length)


def extract_energy(wave: Waveform, cfg: EnergyConfig = EnergyConfig()) -> FrameTrack:
    frame_len = int(round(cfg.frame_s * wave.sample_rate))
    hop_len = int(round(cfg.hop_s * wave.sample_rate))
    if frame_len > len(wave.samples):
        raise ValueError("signal too short for the analysis frame")
    n_frames = n_frames_for(len(wave.samples), wave.sample_rate, cfg.hop_s)
    frames = frame_view(wave.samples, frame_len, hop_len, n_frames)
    window = hann_window(frame_len)
    rms = np.sqrt(np.mean((frames * window) ** 2, axis=1))
    values = np.log(np.maximum(rms, cfg.silence_floor))
    return FrameTrack(values=values, hop_s=cfg.hop_s, kind=TrackKind.ENERGY_LOG)
