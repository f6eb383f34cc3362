"""Word scores from traced lines.

A word's prominence score is the largest strength among lines whose
finest-scale endpoint falls inside the word's time span; words no line
ends in score 0.  Max (rather than sum) is robust to line fragmentation.
"""

from __future__ import annotations

from promkit.corpus.alignment import WordToken
from promkit.prominence.loma import LomaLine


def score_words(
    lines: list[LomaLine],
    words: list[WordToken],
    hop_s: float,
    final_word_attenuation: float = 1.0,
) -> list[float]:
    """Per-word scores, in word order.

    ``final_word_attenuation`` optionally damps the last word's score to
    counter phrase-final pitch-rise artifacts; 1.0 (default) disables it.
    """
    scores = [0.0 for _ in words]
    for line in lines:
        t = line.endpoint_frame * hop_s
        for i, word in enumerate(words):
            if word.start_s <= t < word.end_s:
                scores[i] = max(scores[i], line.strength)
                break
    if words and final_word_attenuation != 1.0:
        scores[-1] *= final_word_attenuation
    return scores
