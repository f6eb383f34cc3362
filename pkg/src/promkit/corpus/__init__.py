from promkit.corpus.lexicon import PosClass, PronounLexicon, classify_words
from promkit.corpus.alignment import (
    PhoneInterval,
    WordToken,
    parse_alignment,
    parse_alignment_file,
    serialize_alignment,
)
from promkit.corpus.manifest import Manifest, SpeakerRendition, Utterance, load_manifest
from promkit.corpus.context import ContextWindow, Regime, SEPARATOR, build_context_window
from promkit.corpus.renditions import (
    PronounSubsets,
    align_renditions,
    consensus_group,
    extract_pronoun_subsets,
)

__all__ = [
    "PosClass",
    "PronounLexicon",
    "classify_words",
    "PhoneInterval",
    "WordToken",
    "parse_alignment",
    "parse_alignment_file",
    "serialize_alignment",
    "Manifest",
    "SpeakerRendition",
    "Utterance",
    "load_manifest",
    "ContextWindow",
    "Regime",
    "SEPARATOR",
    "build_context_window",
    "PronounSubsets",
    "align_renditions",
    "consensus_group",
    "extract_pronoun_subsets",
]
