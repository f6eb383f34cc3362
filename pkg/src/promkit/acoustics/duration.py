"""Continuous duration signal at frame rate.

Every frame inside a unit (phone or word) takes the log duration of that
unit; frames outside any unit take the minimum observed log duration.  A
moving average smooths the steps between units.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from promkit.acoustics.tracks import FrameTrack, TrackKind
from promkit.corpus.alignment import WordToken


class DurationUnit(str, enum.Enum):
    PHONE = "phone"
    WORD = "word"


def moving_average(values: np.ndarray, width: int) -> np.ndarray:
    """Centered moving average with edge replication, width forced odd."""
    if width <= 1:
        return values.copy()
    if width % 2 == 0:
        width += 1
    half = width // 2
    padded = np.concatenate([np.full(half, values[0]), values, np.full(half, values[-1])])
    kernel = np.full(width, 1.0 / width)
    return np.convolve(padded, kernel, mode="valid")


def build_duration_signal(
    words: list[WordToken],
    hop_s: float,
    unit: DurationUnit | str = DurationUnit.PHONE,
    n_frames: int | None = None,
    smooth_frames: int = 5,
) -> FrameTrack:
    if not words:
        raise ValueError("empty word list")
    unit = DurationUnit(unit)

    if unit is DurationUnit.WORD:
        intervals = [(w.start_s, w.end_s) for w in words]
    else:
        intervals = [(p.start_s, p.end_s) for w in words for p in w.phones]
        if not intervals:
            raise ValueError("words carry no phone intervals")

    if n_frames is None:
        n_frames = max(1, math.ceil(max(e for _, e in intervals) / hop_s))

    log_durs = [math.log(e - s) for s, e in intervals]
    silence = min(log_durs)
    values = np.full(n_frames, silence)
    frame_times = np.arange(n_frames) * hop_s
    for (start, end), log_dur in zip(intervals, log_durs):
        inside = (frame_times >= start) & (frame_times < end)
        values[inside] = log_dur

    values = moving_average(values, smooth_frames)
    return FrameTrack(values=values, hop_s=hop_s, kind=TrackKind.DURATION)
