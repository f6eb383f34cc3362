"""WAV reading/writing and linear resampling.

Input is PCM 16-bit WAV; stereo is downmixed by channel averaging and
samples are scaled to [-1, 1] floats.
"""

from __future__ import annotations

import wave
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class AudioError(ValueError):
    """Unreadable or unsupported audio input."""


@dataclass(frozen=True)
class Waveform:
    samples: np.ndarray  # float64 in [-1, 1]
    sample_rate: int

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise AudioError(f"sample rate must be positive, got {self.sample_rate}")
        if not np.all(np.isfinite(self.samples)):
            raise AudioError("waveform contains non-finite samples")

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate


def read_wav(path: str | Path) -> Waveform:
    try:
        with wave.open(str(path), "rb") as wav:
            n_channels = wav.getnchannels()
            sampwidth = wav.getsampwidth()
            rate = wav.getframerate()
            raw = wav.readframes(wav.getnframes())
    except (wave.Error, EOFError, OSError) as exc:
        raise AudioError(f"cannot read WAV {path}: {exc}") from exc
    if sampwidth != 2:
        raise AudioError(f"{path}: only 16-bit PCM supported, got {8 * sampwidth}-bit")
    data = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0
    if n_channels > 1:
        data = data.reshape(-1, n_channels).mean(axis=1)
    return Waveform(samples=data, sample_rate=rate)


def write_wav(path: str | Path, samples: np.ndarray, sample_rate: int) -> None:
    clipped = np.clip(np.asarray(samples, dtype=np.float64), -1.0, 1.0)
    pcm = (clipped * 32767.0).astype("<i2")
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(sample_rate)
        wav.writeframes(pcm.tobytes())


def resample(wave_in: Waveform, target_rate: int) -> Waveform:
    """Linear-interpolation resampling onto the target rate's sample grid."""
    if target_rate == wave_in.sample_rate:
        return wave_in
    n_out = int(round(len(wave_in.samples) * target_rate / wave_in.sample_rate))
    t_in = np.arange(len(wave_in.samples)) / wave_in.sample_rate
    t_out = np.arange(n_out) / target_rate
    out = np.interp(t_out, t_in, wave_in.samples)
    return Waveform(samples=out, sample_rate=target_rate)
