"""Score quantization into the three prominence categories.

Quantile mode fits thresholds at the q1/q2 empirical quantiles
(nearest-rank, 0-indexed floor convention) of a training score set; fixed
mode uses given thresholds.  Fitted thresholds are persisted to a JSON
sidecar so evaluation splits reuse the training cut points.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from promkit.labels import P0, P1, P2

log = logging.getLogger(__name__)

#: Default quantile cut points; q2 leaves ~21.8% of the mass in p2
#: (strong prominence covers roughly a fifth of running words in read
#: speech).
DEFAULT_Q1 = 0.50
DEFAULT_Q2 = 0.782


@dataclass(frozen=True)
class QuantizerConfig:
    mode: str = "quantile"  # "quantile" | "fixed"
    q1: float = DEFAULT_Q1
    q2: float = DEFAULT_Q2
    t1: float | None = None
    t2: float | None = None

    def __post_init__(self):
        if self.mode not in ("quantile", "fixed"):
            raise ValueError(f"unknown quantizer mode {self.mode!r}")
        if self.mode == "quantile":
            if not (0.0 < self.q1 < self.q2 < 1.0):
                raise ValueError(f"need 0 < q1 < q2 < 1, got q1={self.q1} q2={self.q2}")
        else:
            if self.t1 is None or self.t2 is None or not self.t1 < self.t2:
                raise ValueError(f"fixed mode needs t1 < t2, got t1={self.t1} t2={self.t2}")


@dataclass(frozen=True)
class Thresholds:
    mode: str
    q1: float | None
    q2: float | None
    t1: float
    t2: float
    degenerate: bool = False

    def label_for(self, score: float) -> str:
        if self.degenerate or score < self.t1:
            return P0
        if score < self.t2:
            return P1
        return P2

    def save(self, path: str | Path) -> None:
        payload = {
            "mode": self.mode,
            "q1": self.q1,
            "q2": self.q2,
            "t1": self.t1,
            "t2": self.t2,
            "degenerate": self.degenerate,
        }
        Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", "utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Thresholds":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            mode=raw["mode"],
            q1=raw.get("q1"),
            q2=raw.get("q2"),
            t1=float(raw["t1"]),
            t2=float(raw["t2"]),
            degenerate=bool(raw.get("degenerate", False)),
        )


def nearest_rank(sorted_scores: np.ndarray, q: float) -> float:
    """Empirical quantile: the floor(q*n)-th order statistic (0-indexed)."""
    n = len(sorted_scores)
    idx = min(n - 1, int(np.floor(q * n)))
    return float(sorted_scores[idx])


def fit_thresholds(scores, config: QuantizerConfig = QuantizerConfig()) -> Thresholds:
    scores = np.asarray(list(scores), dtype=np.float64)
    if scores.size == 0:
        raise ValueError("cannot fit a quantizer on an empty score set")
    if config.mode == "fixed":
        return Thresholds(mode="fixed", q1=None, q2=None, t1=config.t1, t2=config.t2)
    srt = np.sort(scores)
    if srt[0] == srt[-1]:
        log.warning("degenerate score distribution (all equal); labelling everything p0")
        return Thresholds(
            mode="quantile", q1=config.q1, q2=config.q2, t1=float(srt[0]), t2=float(srt[0]),
            degenerate=True,
        )
    return Thresholds(
        mode="quantile",
        q1=config.q1,
        q2=config.q2,
        t1=nearest_rank(srt, config.q1),
        t2=nearest_rank(srt, config.q2),
    )


def apply_thresholds(scores, thresholds: Thresholds) -> list[str]:
    return [thresholds.label_for(float(s)) for s in scores]


def quantize(scores, config: QuantizerConfig = QuantizerConfig()) -> tuple[list[str], Thresholds]:
    """Fit on the given score multiset and label it."""
    thresholds = fit_thresholds(scores, config)
    return apply_thresholds(scores, thresholds), thresholds
