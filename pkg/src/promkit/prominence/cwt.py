"""Continuous wavelet transform of the composite signal.

Mexican-hat (Ricker) mother wavelet on a geometric scale ladder spanning
syllable-to-phrase timescales.  Each row of the scale-space matrix is the
signal convolved with the wavelet dilated to that scale; kernels are
L2-normalized and edges are mirror-padded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from promkit.acoustics.tracks import CompositeSignal


def default_scales(n_scales: int = 12, min_s: float = 0.08, max_s: float = 2.5) -> list[float]:
    """Geometric ladder, roughly half-octave steps from 0.08 s to 2.5 s."""
    return [float(s) for s in np.geomspace(min_s, max_s, n_scales)]


def ricker_kernel(scale_s: float, hop_s: float, support_sigmas: float = 5.0) -> np.ndarray:
    """Mexican-hat kernel sampled at frame rate, discrete L2 norm 1.

    ``scale_s`` is the width of the wavelet's positive lobe in seconds
    (the distance between its zero crossings, i.e. 2 sigma), so events
    separated by more than a scale are resolved at that scale.  The kernel
    is truncated at +-support_sigmas.
    """
    sigma = scale_s / (2.0 * hop_s)  # in frames
    half = max(1, int(np.ceil(support_sigmas * sigma)))
    t = np.arange(-half, half + 1, dtype=np.float64)
    x = t / sigma
    kernel = (1.0 - x**2) * np.exp(-0.5 * x**2)
    return kernel / np.linalg.norm(kernel)


@dataclass(frozen=True)
class ScaleSpace:
    matrix: np.ndarray  # [scale][frame]
    scales_s: tuple[float, ...]
    hop_s: float
    wavelet: str = "mexican_hat"

    def __post_init__(self):
        if list(self.scales_s) != sorted(self.scales_s) or len(set(self.scales_s)) != len(
            self.scales_s
        ):
            raise ValueError("scales must be strictly increasing")
        if self.matrix.shape[0] != len(self.scales_s):
            raise ValueError("matrix row count must equal scale count")

    @property
    def n_frames(self) -> int:
        return self.matrix.shape[1]


def cwt(signal: CompositeSignal, scales_s: list[float] | None = None) -> ScaleSpace:
    scales = sorted(scales_s) if scales_s is not None else default_scales()
    values = np.asarray(signal.values, dtype=np.float64)
    n = len(values)
    largest_frames = int(np.ceil(max(scales) / signal.hop_s))
    if n < largest_frames:
        raise ValueError(
            f"scale exceeds signal: {max(scales):.3f}s needs {largest_frames} frames, got {n}"
        )

    rows = []
    for scale in scales:
        kernel = ricker_kernel(scale, signal.hop_s)
        half = len(kernel) // 2
        padded = np.pad(values, half, mode="reflect")
        rows.append(np.convolve(padded, kernel, mode="valid"))
    return ScaleSpace(
        matrix=np.vstack(rows), scales_s=tuple(float(s) for s in scales), hop_s=signal.hop_s
    )
