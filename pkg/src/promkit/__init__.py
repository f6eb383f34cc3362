"""Prosodic prominence toolkit.

Annotates aligned speech corpora with word-level prominence labels via
wavelet analysis of a composite f0/energy/duration signal, trains text-only
predictors of those labels, and scores predictions with per-class metrics,
paired significance tests, and agreement statistics.
"""

__version__ = "0.1.0"

from promkit.labels import LABELS, P0, P1, P2

__all__ = ["LABELS", "P0", "P1", "P2", "__version__"]
