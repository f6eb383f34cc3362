"""Whole-word vocabulary for the token classifier.

Case-folded words from the training split, minimum frequency 2, with
reserved padding/unknown/separator symbols.  Whole words keep a 1:1
token-to-label correspondence (no subword alignment needed).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from promkit.corpus.context import SEPARATOR, ContextWindow

PAD = "<pad>"
UNK = "<unk>"
SEP = SEPARATOR

RESERVED = (PAD, UNK, SEP)


@dataclass(frozen=True)
class Vocabulary:
    tokens: tuple[str, ...]

    def __post_init__(self):
        if self.tokens[: len(RESERVED)] != RESERVED:
            raise ValueError(f"vocabulary must start with the reserved symbols {RESERVED}")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def pad_id(self) -> int:
        return 0

    @property
    def unk_id(self) -> int:
        return 1

    @property
    def sep_id(self) -> int:
        return 2

    def encode(self, token: str) -> int:
        if token == SEP:
            return self.sep_id
        return self._index.get(token.lower(), self.unk_id)

    def encode_window(self, window: ContextWindow) -> list[int]:
        return [self.encode(tok) for tok in window.tokens]

    @property
    def _index(self) -> dict[str, int]:
        cache = self.__dict__.get("_index_cache")
        if cache is None:
            cache = {tok: i for i, tok in enumerate(self.tokens)}
            self.__dict__["_index_cache"] = cache
        return cache

    @classmethod
    def build(cls, windows: list[ContextWindow], min_freq: int = 2) -> "Vocabulary":
        """Frequency-then-lexicographic order keeps ids deterministic."""
        counts = Counter()
        for window in windows:
            for token in window.tokens:
                if token != SEPARATOR:
                    counts[token.lower()] += 1
        kept = [tok for tok, n in counts.items() if n >= min_freq]
        kept.sort(key=lambda tok: (-counts[tok], tok))
        return cls(tokens=RESERVED + tuple(kept))
