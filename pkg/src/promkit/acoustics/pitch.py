"""Fundamental-frequency estimation.

Time-domain autocorrelation with cumulative-mean normalization of the
difference function, an absolute voicing threshold, and parabolic lag
refinement.  Good enough for prominence-scale prosody; not a research-grade
pitch tracker.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from promkit.acoustics.tracks import FrameTrack, TrackKind, frame_view, n_frames_for
from promkit.acoustics.waveio import Waveform


@dataclass(frozen=True)
class PitchConfig:
    frame_s: float = 0.040
    hop_s: float = 0.010
    fmin: float = 60.0
    fmax: float = 400.0
    voicing_threshold: float = 0.25


def _check_config(wave: Waveform, cfg: PitchConfig) -> tuple[int, int, int, int]:
    if not (0 < cfg.fmin < cfg.fmax < wave.sample_rate / 2):
        raise ValueError(
            f"need 0 < fmin < fmax < nyquist, got fmin={cfg.fmin} fmax={cfg.fmax} "
            f"rate={wave.sample_rate}"
        )
    frame_len = int(round(cfg.frame_s * wave.sample_rate))
    hop_len = int(round(cfg.hop_s * wave.sample_rate))
    if frame_len > len(wave.samples):
        raise ValueError("signal too short for the analysis frame")
    lag_max = math.ceil(wave.sample_rate / cfg.fmin)
    lag_min = max(2, math.floor(wave.sample_rate / cfg.fmax))
    if frame_len <= lag_max + lag_min:
        raise ValueError(
            f"frame of {frame_len} samples cannot search lags up to {lag_max}; "
            "increase frame_s or fmin"
        )
    return frame_len, hop_len, lag_min, lag_max


def _cmndf(frame: np.ndarray, window: int, lag_max: int) -> np.ndarray:
    """Cumulative-mean-normalized difference function over lags 0..lag_max."""
    segments = np.lib.stride_tricks.sliding_window_view(frame, window)[: lag_max + 1]
    diff = np.sum((segments - segments[0]) ** 2, axis=1)
    out = np.ones(lag_max + 1)
    running = np.cumsum(diff[1:])
    nonzero = running > 0.0
    out[1:][nonzero] = diff[1:][nonzero] * np.arange(1, lag_max + 1)[nonzero] / running[nonzero]
    return out


def _refine_lag(values: np.ndarray, lag: int) -> float:
    """Parabolic interpolation of the minimum around integer lag."""
    if 0 < lag < len(values) - 1:
        a, b, c = values[lag - 1], values[lag], values[lag + 1]
        denom = a - 2 * b + c
        if denom > 0:
            shift = 0.5 * (a - c) / denom
            return lag + float(np.clip(shift, -0.5, 0.5))
    return float(lag)


def track_f0(wave: Waveform, cfg: PitchConfig = PitchConfig()) -> tuple[np.ndarray, np.ndarray]:
    """Per-frame f0 in Hz (0 where unvoiced) and the voicing decision."""
    frame_len, hop_len, lag_min, lag_max = _check_config(wave, cfg)
    n_frames = n_frames_for(len(wave.samples), wave.sample_rate, cfg.hop_s)
    frames = frame_view(wave.samples, frame_len, hop_len, n_frames)

    window = frame_len - lag_max
    f0 = np.zeros(n_frames)
    voiced = np.zeros(n_frames, dtype=bool)
    for i in range(n_frames):
        d = _cmndf(frames[i], window, lag_max)
        below = np.nonzero(d[lag_min:] < cfg.voicing_threshold)[0]
        if below.size == 0:
            continue
        lag = lag_min + int(below[0])
        while lag + 1 <= lag_max and d[lag + 1] < d[lag]:
            lag += 1
        refined = _refine_lag(d, lag)
        hz = wave.sample_rate / refined
        if cfg.fmin <= hz <= cfg.fmax:
            f0[i] = hz
            voiced[i] = True
    return f0, voiced


def interpolate_unvoiced(values: np.ndarray, voiced: np.ndarray, fill: float) -> np.ndarray:
    """Linear interpolation through unvoiced gaps; edges held; all-unvoiced
    tracks become the constant ``fill``."""
    if not voiced.any():
        return np.full(len(values), fill)
    idx = np.arange(len(values))
    return np.interp(idx, idx[voiced], values[voiced])


def estimate_f0(wave: Waveform, cfg: PitchConfig = PitchConfig()) -> FrameTrack:
    """Octave-scale log-f0 track with unvoiced gaps linearly interpolated."""
    f0, voiced = track_f0(wave, cfg)
    log_f0 = np.zeros_like(f0)
    log_f0[voiced] = np.log2(f0[voiced])
    fill = math.log2(math.sqrt(cfg.fmin * cfg.fmax))
    values = interpolate_unvoiced(log_f0, voiced, fill)
    return FrameTrack(values=values, hop_s=cfg.hop_s, kind=TrackKind.F0_LOG)
