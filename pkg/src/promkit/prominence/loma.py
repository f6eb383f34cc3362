"""Lines of maximum amplitude through the wavelet scale-space.

Each line starts at a local maximum of the coarsest scale and greedily
follows, scale by scale downward, the strongest local maximum within a
scale-dependent drift window around its current frame.  A line's strength
is the (geometrically weighted) sum of the amplitudes it passes through.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from promkit.prominence.cwt import ScaleSpace


@dataclass(frozen=True)
class LomaConfig:
    #: drift window per downward step: +-max(1, scale_s / (drift_divisor * hop_s)) frames
    drift_divisor: float = 4.0
    #: per-scale-step amplitude weight gamma (strength = sum gamma^i * amp_i)
    gamma: float = 1.0


@dataclass(frozen=True)
class LomaLine:
    points: tuple[tuple[int, int, float], ...]  # (scale index, frame index, amplitude)
    strength: float

    @property
    def endpoint_frame(self) -> int:
        """Frame index of the finest-scale point reached."""
        return self.points[-1][1]


def local_maxima(row: np.ndarray) -> np.ndarray:
    """Positive local maxima, boundaries included.

    Mirror-padded convolution folds near-edge events onto the first/last
    frame at coarse scales, so boundary frames must be eligible or short
    utterances lose their edge prominences.
    """
    if len(row) < 2:
        return np.empty(0, dtype=int)
    mask = np.empty(len(row), dtype=bool)
    mask[0] = row[0] > row[1]
    mask[-1] = row[-1] > row[-2]
    mask[1:-1] = (row[1:-1] > row[:-2]) & (row[1:-1] >= row[2:])
    return np.nonzero(mask & (row > 0.0))[0]


def trace_loma(space: ScaleSpace, cfg: LomaConfig = LomaConfig()) -> list[LomaLine]:
    """Greedy downward traces from scale-space maxima.

    Every local maximum of the coarsest row seeds a line; further down the
    ladder, maxima not already covered by a traced line seed their own
    (ridges split below the coarsest scale, and near-edge events can be
    displaced there by boundary folding, so coarsest-only seeding would
    orphan them).
    """
    matrix = space.matrix
    n_scales = matrix.shape[0]
    if n_scales == 0 or space.n_frames == 0:
        return []

    maxima_per_scale = [local_maxima(matrix[i]) for i in range(n_scales)]
    covered: set[tuple[int, int]] = set()
    lines = []

    def trace_from(scale_idx: int, frame: int) -> LomaLine:
        points = [(scale_idx, frame, float(matrix[scale_idx, frame]))]
        for lower in range(scale_idx - 1, -1, -1):
            window = max(1, int(round(space.scales_s[lower] / (cfg.drift_divisor * space.hop_s))))
            candidates = maxima_per_scale[lower]
            nearby = candidates[np.abs(candidates - frame) <= window]
            if nearby.size == 0:
                break
            frame = int(nearby[np.argmax(matrix[lower, nearby])])
            points.append((lower, frame, float(matrix[lower, frame])))
        strength = sum(cfg.gamma**step * amp for step, (_, _, amp) in enumerate(points))
        for scale, pt_frame, _ in points:
            covered.add((scale, pt_frame))
        return LomaLine(points=tuple(points), strength=float(strength))

    def is_covered(scale_idx: int, frame: int) -> bool:
        return any((scale_idx, frame + d) in covered for d in (-1, 0, 1))

    for scale_idx in range(n_scales - 1, -1, -1):
        for frame in maxima_per_scale[scale_idx]:
            if scale_idx < n_scales - 1 and is_covered(scale_idx, int(frame)):
                continue
            lines.append(trace_from(scale_idx, int(frame)))
    return lines
