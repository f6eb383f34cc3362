from promkit.prominence.cwt import ScaleSpace, cwt, default_scales, ricker_kernel
from promkit.prominence.loma import LomaLine, LomaConfig, trace_loma
from promkit.prominence.scoring import score_words
from promkit.prominence.quantize import QuantizerConfig, Thresholds, fit_thresholds, apply_thresholds, quantize
from promkit.prominence.annotate import (
    AnnotateConfig,
    ProminenceAnnotation,
    annotate_corpus,
    annotate_utterance,
    read_labels_tsv,
    write_labels_tsv,
)

__all__ = [
    "ScaleSpace",
    "cwt",
    "default_scales",
    "ricker_kernel",
    "LomaLine",
    "LomaConfig",
    "trace_loma",
    "score_words",
    "QuantizerConfig",
    "Thresholds",
    "fit_thresholds",
    "apply_thresholds",
    "quantize",
    "AnnotateConfig",
    "ProminenceAnnotation",
    "annotate_corpus",
    "annotate_utterance",
    "read_labels_tsv",
    "write_labels_tsv",
]
